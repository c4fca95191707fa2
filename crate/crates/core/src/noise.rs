//! Spontaneously generated photons: noise spectra, correlators, g²(τ).
//!
//! With the coherent drives subtracted, the output field fluctuation is a
//! linear combination of three inputs (frequency domain, rotating frame):
//!
//! ```text
//! δc_out(ω) = V(ω)·ξ(ω) + E(ω)·δc_in(ω) + F(ω)·δc_in†(−ω)
//! ```
//!
//! ξ is the thermal Langevin force on the mirror with colored spectrum
//! S_ξ(ω) = 2(γ_m/ω_m)·ω·[1 + coth(ħω/2k_BT)], and δc_in is the broadband
//! vacuum. Because the dynamics is linear, the output is a zero-mean
//! Gaussian field and every photon-counting observable reduces to three
//! stationary kernels:
//!
//! * flux spectrum       n(ω) = |V(ω)|²·S_ξ(−ω) + |F(ω)|²,
//!   with ⟨δc_out†(t)δc_out(t+τ)⟩ = (1/2π)∫n(ω)e^{−iωτ}dω,
//! * anomalous spectrum  a(ω) = V(ω)V(−ω)·S_ξ(ω) + E(ω)F(−ω),
//!   with ⟨δc_out(t)δc_out(t+τ)⟩ = (1/2π)∫a(ω)e^{+iωτ}dω,
//! * mean flux           n̄ = (1/2π)∫n(ω)dω.
//!
//! The coincidence rate then follows from the Gaussian moment
//! factorization, exactly (not approximately):
//!
//! ```text
//! g²(τ) = 1 + |g¹(τ)|²/n̄² + |A(τ)|²/n̄²
//! ```
//!
//! A useful internal consistency check falls out of the algebra: since the
//! output field keeps free-field commutators, a(ω) is even in ω. The test
//! suite pins this.
//!
//! ```
//! use fwmix::model::{steady_state, PhysicalParams};
//! use fwmix::noise::{correlators, NoiseConfig};
//!
//! let params = PhysicalParams::aspelmeyer().with_pump_power(1e-3);
//! let op = steady_state(&params).unwrap();
//! let tau: Vec<f64> = (0..=60).map(|i| i as f64 * 0.5e-6).collect();
//! let series = correlators(&op, 0.0, &tau, &NoiseConfig::default()).unwrap();
//! assert!(series.g2[0] >= 2.0); // Gaussian fields always bunch at tau = 0
//! ```

use num_complex::Complex64;
use std::io::Write;

use crate::constants::{BOLTZMANN, HBAR};
use crate::error::{Error, Result};
use crate::model::OperatingPoint;
use crate::modes::{expand_char_poly, find_roots};
use crate::quad::{self, GridSpec, Sign, Window};
use crate::response::char_denominator;

/// Transfer functions of the output fluctuations at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPoint {
    /// Frequency ω (rad/s).
    pub omega: f64,
    /// Mechanical-noise port V(ω): response to the Langevin force.
    pub v: Complex64,
    /// Co-rotating vacuum port E(ω): response to δc_in(ω).
    pub e: Complex64,
    /// Counter-rotating vacuum port F(ω): response to δc_in†(−ω).
    pub f: Complex64,
}

/// Evaluate V, E, F at frequency ω. The denominator is the shared
/// characteristic function from [`crate::response::char_denominator`].
pub fn transfer_functions(omega: f64, op: &OperatingPoint) -> Result<TransferPoint> {
    let d = char_denominator(omega, op);
    let guard = 1e-300 * op.mech_freq.powi(3) * op.cavity_decay * op.cavity_decay;
    if d.norm() < guard {
        return Err(Error::Singularity {
            magnitude: d.norm(),
            guard,
        });
    }
    let wm = op.mech_freq;
    let k = op.cavity_decay;
    let sqrt2k = (2.0 * k).sqrt();
    let chi = op.coupling;
    let i = Complex64::new(0.0, 1.0);
    let cav = Complex64::new(k, -(omega + op.eff_detuning));
    let mech = Complex64::new(omega * omega - wm * wm, op.mech_damping * omega);

    let v = -sqrt2k * wm * wm * chi / d * i * cav * op.cavity_amp;
    let e = 2.0 * k / d
        * (-2.0 * wm.powi(3) * chi * chi * i * op.photon_number() + mech * cav)
        - 1.0;
    let f = -4.0 * k * wm.powi(3) * chi * chi * op.cavity_amp * op.cavity_amp / d * i;
    Ok(TransferPoint { omega, v, e, f })
}

/// Spectral density of the thermal Langevin force,
/// S_ξ(ω) = 2(γ_m/ω_m)·ω·[1 + coth(ħω/2k_BT)].
///
/// At T = 0 the zero-point limit applies: 4(γ_m/ω_m)·ω for ω > 0 and 0 for
/// ω ≤ 0 — the bath only absorbs.
pub fn thermal_kernel(omega: f64, temperature: f64, op: &OperatingPoint) -> Result<f64> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::invalid_param(
            "temperature",
            format!("must be nonnegative and finite, got {temperature}"),
        ));
    }
    let scale = 2.0 * op.mech_damping / op.mech_freq;
    if temperature == 0.0 {
        return Ok(if omega > 0.0 { 2.0 * scale * omega } else { 0.0 });
    }
    let x = HBAR * omega / (2.0 * BOLTZMANN * temperature);
    let bracket = if x.abs() < 1e-6 {
        // w*(1 + coth x) = w + 2kT/hbar + hbar w^2/(6 kT) + O(x^3)
        omega + 2.0 * BOLTZMANN * temperature / HBAR
            + HBAR * omega * omega / (6.0 * BOLTZMANN * temperature)
    } else if x.abs() > 30.0 {
        omega * (1.0 + x.signum())
    } else {
        omega * (1.0 + 1.0 / x.tanh())
    };
    Ok(scale * bracket)
}

/// Stationary noise kernels at one frequency: the normal-ordered flux
/// spectrum n(ω) (real, nonnegative) and the anomalous spectrum a(ω).
pub fn output_noise_spectra(
    omega: f64,
    op: &OperatingPoint,
    temperature: f64,
) -> Result<(f64, Complex64)> {
    let tp = transfer_functions(omega, op)?;
    let tm = transfer_functions(-omega, op)?;
    let n = tp.v.norm_sqr() * thermal_kernel(-omega, temperature, op)?
        + tp.f.norm_sqr();
    let a = tp.v * tm.v * thermal_kernel(omega, temperature, op)? + tp.e * tm.f;
    Ok((n, a))
}

/// Which spectral band the correlators integrate over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Positive frequencies only (the Stokes part of the fluctuations).
    Stokes,
    /// Negative frequencies only (the anti-Stokes part).
    Antistokes,
    /// The full output field. This is what the coincidence measurement sees.
    Total,
}

/// Integration controls for the correlator pipeline.
#[derive(Debug, Clone)]
pub struct NoiseConfig {
    /// Convergence target for n̄ and g²(0) under grid doubling.
    pub rel_tol: f64,
    /// Bound on the number of doublings.
    pub max_doublings: usize,
    /// Background half-span in units of ω_m.
    pub background_span: f64,
    /// Initial background point count.
    pub background_points: usize,
    /// Window width in units of the mode linewidth |Im(root)|.
    pub window_linewidths: f64,
    /// Initial points per window.
    pub window_points: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            rel_tol: 1e-4,
            max_doublings: 6,
            background_span: 8.0,
            background_points: 1601,
            window_linewidths: 20.0,
            window_points: 401,
        }
    }
}

impl NoiseConfig {
    /// Same configuration with a different convergence target.
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// Stationary correlators on a delay grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorSeries {
    /// Delay grid τ (s), as supplied by the caller.
    pub tau: Vec<f64>,
    /// Mean output flux density n̄ = ⟨δc_out†δc_out⟩.
    pub n_bar: f64,
    /// First-order coherence g¹(τ) = ⟨δc_out†(t)δc_out(t+τ)⟩.
    pub g1: Vec<Complex64>,
    /// Anomalous correlator A(τ) = ⟨δc_out(t+τ)δc_out(t)⟩.
    pub anomalous: Vec<Complex64>,
    /// Normalized coincidence rate g²(τ).
    pub g2: Vec<f64>,
    /// Grid-doubling agreement actually achieved by the pipeline.
    pub achieved_tol: f64,
}

impl CorrelatorSeries {
    /// g² at the smallest |τ| on the grid.
    pub fn g2_zero(&self) -> f64 {
        let idx = self
            .tau
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.g2[idx]
    }

    /// CSV export with the documented header `tau_us,g2,g1_re,g1_im,a_re,a_im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "tau_us,g2,g1_re,g1_im,a_re,a_im")?;
        for i in 0..self.tau.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                self.tau[i] * 1e6,
                self.g2[i],
                self.g1[i].re,
                self.g1[i].im,
                self.anomalous[i].re,
                self.anomalous[i].im
            )?;
        }
        Ok(())
    }

    /// JSON record set mirroring the CSV columns.
    pub fn to_json_records(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.tau.len())
                .map(|i| {
                    serde_json::json!({
                        "tau_us": self.tau[i] * 1e6,
                        "g2": self.g2[i],
                        "g1_re": self.g1[i].re,
                        "g1_im": self.g1[i].im,
                        "a_re": self.anomalous[i].re,
                        "a_im": self.anomalous[i].im,
                    })
                })
                .collect(),
        )
    }

    /// JSON summary with the documented keys
    /// `{n_bar, g2_zero, g2_peak, peak_tau_us, cs_ratio}`.
    pub fn summary_json(&self) -> Result<serde_json::Value> {
        let (peak_tau, ratio) = cs_violation(self)?;
        let peak = self.g2.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(serde_json::json!({
            "n_bar": self.n_bar,
            "g2_zero": self.g2_zero(),
            "g2_peak": peak,
            "peak_tau_us": peak_tau * 1e6,
            "cs_ratio": ratio,
        }))
    }
}

/// Adaptive frequency grid for the noise spectra: a coarse background over
/// ±`background_span`·ω_m plus one window per normal mode, centered on
/// Re(root) with width `window_linewidths`·|Im(root)|.
pub fn spectrum_grid(op: &OperatingPoint, cfg: &NoiseConfig) -> Result<GridSpec> {
    let set = find_roots(&expand_char_poly(op))?;
    let span = cfg.background_span * op.mech_freq;
    let mut windows = Vec::with_capacity(4);
    for r in set.roots {
        let half = 0.5 * cfg.window_linewidths * r.im.abs();
        // clip to the background interval
        let lo = (r.re - half).max(-span);
        let hi = (r.re + half).min(span);
        if hi > lo {
            windows.push(Window {
                center: 0.5 * (lo + hi),
                width: hi - lo,
                points: cfg.window_points,
            });
        }
    }
    Ok(GridSpec {
        background: (-span, span),
        background_points: cfg.background_points,
        windows,
    })
}

/// One pipeline pass on a fixed grid.
struct Pass {
    n_bar: f64,
    g1: Vec<Complex64>,
    anomalous: Vec<Complex64>,
    g2: Vec<f64>,
}

fn pass_on_grid(
    spec: &GridSpec,
    op: &OperatingPoint,
    temperature: f64,
    tau: &[f64],
    band: Band,
) -> Result<Pass> {
    let xs = spec.build()?;
    let mut n = Vec::with_capacity(xs.len());
    let mut a = Vec::with_capacity(xs.len());
    for &w in &xs {
        let (ni, ai) = output_noise_spectra(w, op, temperature)?;
        n.push(Complex64::new(ni, 0.0));
        a.push(ai);
    }
    let range = match band {
        Band::Total => 0..xs.len(),
        Band::Stokes => xs.iter().position(|&x| x >= 0.0).unwrap_or(0)..xs.len(),
        Band::Antistokes => 0..xs.iter().rposition(|&x| x <= 0.0).map_or(0, |i| i + 1),
    };
    let (xs, n, a) = (&xs[range.clone()], &n[range.clone()], &a[range]);

    let n_bar = quad::integrate(xs, n)?.re / std::f64::consts::TAU;
    if !(n_bar > 0.0) || !n_bar.is_normal() {
        return Err(Error::CorrelationUndefined);
    }
    let g1 = quad::oscillatory_transform(xs, n, tau, Sign::Minus)?;
    let anomalous = quad::oscillatory_transform(xs, a, tau, Sign::Minus)?;
    let g2 = g1
        .iter()
        .zip(&anomalous)
        .map(|(g, a)| 1.0 + (g.norm_sqr() + a.norm_sqr()) / (n_bar * n_bar))
        .collect();
    Ok(Pass {
        n_bar,
        g1,
        anomalous,
        g2,
    })
}

/// Band-restricted correlators; `Band::Total` reproduces [`correlators`]
/// bit for bit (it is the same code path).
///
/// For the one-sided bands the anomalous column is the Stokes/anti-Stokes
/// cross pairing ⟨δc_out^(s)(t+τ)δc_out^(as)(t)⟩ — a single band has no
/// anomalous moment of its own, since that pairing always couples ω to −ω.
pub fn band_components(
    op: &OperatingPoint,
    temperature: f64,
    tau: &[f64],
    band: Band,
    cfg: &NoiseConfig,
) -> Result<CorrelatorSeries> {
    if tau.is_empty() {
        return Err(Error::InvalidArgument("delay grid is empty".into()));
    }
    if tau.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("delay grid contains non-finite values".into()));
    }

    let mut spec = spectrum_grid(op, cfg)?;
    let mut prev = pass_on_grid(&spec, op, temperature, tau, band)?;
    let mut sequence = vec![prev.n_bar];
    for _ in 0..cfg.max_doublings {
        spec = spec.doubled();
        let next = pass_on_grid(&spec, op, temperature, tau, band)?;
        sequence.push(next.n_bar);
        let dn = (next.n_bar - prev.n_bar).abs() / next.n_bar;
        let dg = (next.g2[0] - prev.g2[0]).abs() / next.g2[0];
        let achieved = dn.max(dg);
        if achieved <= cfg.rel_tol {
            return Ok(CorrelatorSeries {
                tau: tau.to_vec(),
                n_bar: next.n_bar,
                g1: next.g1,
                anomalous: next.anomalous,
                g2: next.g2,
                achieved_tol: achieved,
            });
        }
        prev = next;
    }
    Err(Error::NumericalFailure {
        message: format!(
            "correlator pipeline did not converge to {:e} within {} doublings",
            cfg.rel_tol, cfg.max_doublings
        ),
        residuals: sequence,
    })
}

/// Full-field correlators: n̄, g¹(τ), A(τ) and the coincidence rate
/// g²(τ) = 1 + |g¹|²/n̄² + |A|²/n̄², with grid refinement until n̄ and g²(0)
/// are stable to `cfg.rel_tol`.
pub fn correlators(
    op: &OperatingPoint,
    temperature: f64,
    tau: &[f64],
    cfg: &NoiseConfig,
) -> Result<CorrelatorSeries> {
    band_components(op, temperature, tau, Band::Total, cfg)
}

/// Locate the coincidence peak: returns (τ at max g², g²(peak)/g²(0)).
/// A ratio above 1 is the nonclassical regime — delayed coincidences beat
/// simultaneous ones, which no classical stationary field can do.
pub fn cs_violation(series: &CorrelatorSeries) -> Result<(f64, f64)> {
    if series.tau.is_empty() {
        return Err(Error::InvalidArgument("correlator series is empty".into()));
    }
    let mut peak = (series.tau[0], f64::NEG_INFINITY);
    for (t, g) in series.tau.iter().zip(&series.g2) {
        if *g > peak.1 {
            peak = (*t, *g);
        }
    }
    Ok((peak.0, peak.1 / series.g2_zero()))
}
