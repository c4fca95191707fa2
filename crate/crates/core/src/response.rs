//! Stimulated Stokes and anti-Stokes response of the output field.
//!
//! A weak probe injected at offset δ = ω_s − ω_l from the pump reflects
//! with amplitude c_s while the radiation-pressure nonlinearity generates a
//! four-wave-mixing sideband c_as at the mirrored offset −δ. Everything is
//! reported per unit Stokes input: the power gains G_s = |√(2κ)c_s|²,
//! G_as = |√(2κ)c_as|², and the homodyne quadratures
//! v_s = √(2κ)·Re c_s, ṽ_s = √(2κ)·Im c_s.
//!
//! With the coupling switched off the cavity is a lossless mirror: G_s ≡ 1
//! and G_as ≡ 0 for every δ, which pins the overall normalization.
//!
//! ```
//! use fwmix::model::{steady_state, PhysicalParams};
//! use fwmix::response::gains_and_quadratures;
//!
//! let op = steady_state(&PhysicalParams::aspelmeyer()).unwrap();
//! let pt = gains_and_quadratures(op.mech_freq, &op).unwrap();
//! assert!(pt.g_s > 1.0); // the probe is amplified near resonance
//! ```

use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::model::OperatingPoint;

/// Response of the output field at one probe offset δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResponsePoint {
    /// Probe offset δ = ω_s − ω_l (rad/s).
    pub offset: f64,
    /// Output amplitude at the Stokes frequency, per unit Stokes drive.
    pub c_s: Complex64,
    /// Output amplitude at the anti-Stokes (four-wave-mixing) frequency.
    pub c_as: Complex64,
    /// Stokes power gain G_s = |√(2κ)c_s|².
    pub g_s: f64,
    /// Anti-Stokes power gain G_as = |√(2κ)c_as|².
    pub g_as: f64,
    /// In-phase homodyne quadrature v_s = √(2κ)(c_s + c_s*)/2.
    pub v_s: f64,
    /// Out-of-phase homodyne quadrature ṽ_s = √(2κ)(c_s − c_s*)/(2i).
    pub v_s_tilde: f64,
}

/// Characteristic denominator d(δ), product form:
/// d = 4ω_m³χ²Δ|c₀|² + [(δ+ω_m)(δ−ω_m) + iγ_mδ]·[κ + i(Δ−δ)]·[κ − i(Δ+δ)].
///
/// Its four complex zeros are the normal modes of the coupled cavity-mirror
/// system; see [`crate::modes`].
pub fn char_denominator(delta: f64, op: &OperatingPoint) -> Complex64 {
    let wm = op.mech_freq;
    let coupling_term = 4.0
        * wm.powi(3)
        * op.coupling
        * op.coupling
        * op.eff_detuning
        * op.photon_number();
    let mech = Complex64::new((delta + wm) * (delta - wm), op.mech_damping * delta);
    let cav_a = Complex64::new(op.cavity_decay, op.eff_detuning - delta);
    let cav_b = Complex64::new(op.cavity_decay, -(op.eff_detuning + delta));
    Complex64::new(coupling_term, 0.0) + mech * cav_a * cav_b
}

/// Characteristic denominator, compact form:
/// d = 4ω_m³χ²Δ|c₀|² + (ω² − ω_m² + iγ_mω)·[(κ − iω)² + Δ²].
///
/// Algebraically identical to [`char_denominator`]; kept as an independent
/// route for the identity property test.
pub fn char_denominator_compact(omega: f64, op: &OperatingPoint) -> Complex64 {
    let wm = op.mech_freq;
    let coupling_term = 4.0
        * wm.powi(3)
        * op.coupling
        * op.coupling
        * op.eff_detuning
        * op.photon_number();
    let mech = Complex64::new(omega * omega - wm * wm, op.mech_damping * omega);
    let cav = Complex64::new(op.cavity_decay, -omega);
    Complex64::new(coupling_term, 0.0)
        + mech * (cav * cav + op.eff_detuning * op.eff_detuning)
}

/// Guard scale for the singularity check: |d| is compared against
/// 1e−300·ω_m³κ². Stable operating points sit far above the guard; only a
/// sweep crossing an undamped pole can trip it.
fn singularity_guard(op: &OperatingPoint) -> f64 {
    1e-300 * op.mech_freq.powi(3) * op.cavity_decay * op.cavity_decay
}

fn checked_denominator(delta: f64, op: &OperatingPoint) -> Result<Complex64> {
    let d = char_denominator(delta, op);
    let guard = singularity_guard(op);
    if d.norm() < guard {
        return Err(Error::Singularity {
            magnitude: d.norm(),
            guard,
        });
    }
    Ok(d)
}

/// Output response at the probe (Stokes) frequency:
/// c_s = √(2κ)/d·{[κ − i(Δ+δ)]·[δ² − ω_m² + iγ_mδ] − 2iω_m³χ²|c₀|²} − 1/√(2κ).
pub fn stokes_response(delta: f64, op: &OperatingPoint) -> Result<Complex64> {
    let d = checked_denominator(delta, op)?;
    let wm = op.mech_freq;
    let sqrt2k = (2.0 * op.cavity_decay).sqrt();
    let mech = Complex64::new(delta * delta - wm * wm, op.mech_damping * delta);
    let cav = Complex64::new(op.cavity_decay, -(op.eff_detuning + delta));
    let spring = Complex64::new(0.0, 2.0 * wm.powi(3) * op.coupling * op.coupling * op.photon_number());
    Ok(sqrt2k / d * (cav * mech - spring) - 1.0 / sqrt2k)
}

/// Output response at the generated anti-Stokes frequency:
/// c_as = −√(2κ)·2iω_m³χ²c₀²/d*(δ).
pub fn antistokes_response(delta: f64, op: &OperatingPoint) -> Result<Complex64> {
    let d = checked_denominator(delta, op)?;
    let wm = op.mech_freq;
    let sqrt2k = (2.0 * op.cavity_decay).sqrt();
    let num = Complex64::new(0.0, 2.0 * wm.powi(3) * op.coupling * op.coupling)
        * op.cavity_amp
        * op.cavity_amp;
    Ok(-sqrt2k * num / d.conj())
}

/// Anti-Stokes response to lowest order in the coupling: the denominator is
/// the χ → 0 factorization, the numerator ∝ χ²ε_l², so |c_as| grows linearly
/// with pump power. Never singular for real δ when κ, γ_m > 0.
pub fn perturbative_antistokes(delta: f64, op: &OperatingPoint) -> Complex64 {
    let wm = op.mech_freq;
    let sqrt2k = (2.0 * op.cavity_decay).sqrt();
    let num = Complex64::new(0.0, 2.0 * sqrt2k * wm.powi(3) * op.coupling * op.coupling)
        * op.pump_amp
        * op.pump_amp;
    let cav0 = Complex64::new(op.cavity_decay, op.eff_detuning);
    let mech = Complex64::new((delta + wm) * (delta - wm), -op.mech_damping * delta);
    let cav_a = Complex64::new(op.cavity_decay, -(op.eff_detuning - delta));
    let cav_b = Complex64::new(op.cavity_decay, op.eff_detuning + delta);
    -num / (cav0 * cav0 * mech * cav_a * cav_b)
}

/// Output response at the pump frequency, c_l = √(2κ)c₀ − ε_l/√(2κ).
/// Exported for completeness; no observable in this crate depends on it.
pub fn pump_response(op: &OperatingPoint) -> Complex64 {
    let sqrt2k = (2.0 * op.cavity_decay).sqrt();
    sqrt2k * op.cavity_amp - op.pump_amp / sqrt2k
}

/// Gains and quadratures at one probe offset.
pub fn gains_and_quadratures(delta: f64, op: &OperatingPoint) -> Result<ResponsePoint> {
    let c_s = stokes_response(delta, op)?;
    let c_as = antistokes_response(delta, op)?;
    let sqrt2k = (2.0 * op.cavity_decay).sqrt();
    Ok(ResponsePoint {
        offset: delta,
        c_s,
        c_as,
        g_s: (sqrt2k * c_s).norm_sqr(),
        g_as: (sqrt2k * c_as).norm_sqr(),
        v_s: sqrt2k * c_s.re,
        v_s_tilde: sqrt2k * c_s.im,
    })
}

/// Default probe grid: 2001 points across δ/ω_m ∈ [0.5, 1.5], which covers
/// the normal-mode features at every power treated here.
pub fn default_offset_grid(op: &OperatingPoint) -> Vec<f64> {
    offset_grid(op, 0.5, 1.5, 2001)
}

/// Probe grid with explicit bounds (in units of ω_m) and point count.
pub fn offset_grid(op: &OperatingPoint, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| op.mech_freq * (lo + (hi - lo) * i as f64 / (points - 1) as f64))
        .collect()
}

/// Pointwise response over a probe grid. The grid need not be sorted; the
/// evaluation is a pure per-point map and preserves input order.
pub fn sweep_response(op: &OperatingPoint, grid: &[f64]) -> Result<SpectrumSeries> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("probe grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|d| !d.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "probe grid contains non-finite offset {bad}"
        )));
    }
    let points = grid
        .iter()
        .map(|&delta| gains_and_quadratures(delta, op))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSeries {
        omega_m: op.mech_freq,
        points,
    })
}

/// A sweep of [`ResponsePoint`]s with its normalization frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    /// Mechanical frequency used to normalize the offset axis.
    pub omega_m: f64,
    /// Per-offset responses, in grid order.
    pub points: Vec<ResponsePoint>,
}

impl SpectrumSeries {
    /// Largest Stokes gain and the normalized offset where it occurs.
    pub fn max_gain_s(&self) -> (f64, f64) {
        self.extremum(|p| p.g_s)
    }

    /// Largest anti-Stokes gain and the normalized offset where it occurs.
    pub fn max_gain_as(&self) -> (f64, f64) {
        self.extremum(|p| p.g_as)
    }

    fn extremum(&self, f: impl Fn(&ResponsePoint) -> f64) -> (f64, f64) {
        let mut best = (f64::NEG_INFINITY, f64::NAN);
        for p in &self.points {
            let v = f(p);
            if v > best.0 {
                best = (v, p.offset / self.omega_m);
            }
        }
        best
    }

    /// Strict local maxima of the anti-Stokes gain after 5-point smoothing,
    /// as (normalized offset, smoothed value) pairs.
    pub fn antistokes_peaks(&self) -> Vec<(f64, f64)> {
        let xs: Vec<f64> = self.points.iter().map(|p| p.offset / self.omega_m).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.g_as).collect();
        smoothed_peaks(&xs, &ys)
    }

    /// CSV export with the documented header
    /// `delta_over_omega_m,Gs,Gas,vs,vs_tilde`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "delta_over_omega_m,Gs,Gas,vs,vs_tilde")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{}",
                p.offset / self.omega_m,
                p.g_s,
                p.g_as,
                p.v_s,
                p.v_s_tilde
            )?;
        }
        Ok(())
    }

    /// JSON record set mirroring the CSV columns.
    pub fn to_json_records(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.points
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "delta_over_omega_m": p.offset / self.omega_m,
                        "Gs": p.g_s,
                        "Gas": p.g_as,
                        "vs": p.v_s,
                        "vs_tilde": p.v_s_tilde,
                    })
                })
                .collect(),
        )
    }
}

/// Strict local maxima of `ys` after a centered 5-point box average.
/// Returns (x, smoothed y) for every interior maximum.
pub fn smoothed_peaks(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    if ys.len() < 7 {
        return Vec::new();
    }
    let smooth: Vec<f64> = (2..ys.len() - 2)
        .map(|i| (ys[i - 2] + ys[i - 1] + ys[i] + ys[i + 1] + ys[i + 2]) / 5.0)
        .collect();
    let mut peaks = Vec::new();
    for i in 1..smooth.len() - 1 {
        if smooth[i] > smooth[i - 1] && smooth[i] > smooth[i + 1] {
            peaks.push((xs[i + 2], smooth[i]));
        }
    }
    peaks
}
