//! Normal-mode structure: the characteristic quartic and its roots.
//!
//! The zeros of the characteristic denominator d(δ) are the complex normal
//! modes of the coupled cavity-mirror system. Their real parts are the mode
//! frequencies, their imaginary parts the decay rates (all stable modes
//! have Im < 0). Below a critical pump power the two Re > 0 modes share one
//! frequency but split in lifetime; above it the frequencies split — the
//! normal-mode splitting this crate exists to map out.
//!
//! Roots are found by Aberth–Ehrlich simultaneous iteration on the
//! ω_m-scaled monic quartic, then polished with Newton steps until the
//! normalized residual |d(r)|/(ω_m³κ²·max(1, |r/ω_m|⁴)) drops below 1e−8,
//! which makes the result independent of the iteration internals.

use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::model::{steady_state, OperatingPoint, PhysicalParams};

/// Residual acceptance for polished roots.
const ROOT_RESIDUAL_TOL: f64 = 1e-8;

/// Two Re > 0 roots closer than this (in units of ω_m) count as frequency
/// degenerate; also the onset threshold used by [`critical_power`].
pub const RE_DEGENERACY_TOL: f64 = 1e-3;

/// Branch identity of one root, stable across a power sweep.
///
/// Seeded from the analytic χ = 0 limit, where the quartic factorizes into
/// a mechanical pair ±√(ω_m² − γ_m²/4) − iγ_m/2 and a cavity pair ±Δ − iκ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchLabel {
    /// Mechanical-like branch on the Re > 0 side.
    MechanicalPlus,
    /// Mechanical-like branch on the Re < 0 side.
    MechanicalMinus,
    /// Cavity-like branch on the Re > 0 side.
    CavityPlus,
    /// Cavity-like branch on the Re < 0 side.
    CavityMinus,
}

impl std::fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BranchLabel::MechanicalPlus => "mech+",
            BranchLabel::MechanicalMinus => "mech-",
            BranchLabel::CavityPlus => "cav+",
            BranchLabel::CavityMinus => "cav-",
        };
        f.write_str(s)
    }
}

const ALL_LABELS: [BranchLabel; 4] = [
    BranchLabel::MechanicalPlus,
    BranchLabel::MechanicalMinus,
    BranchLabel::CavityPlus,
    BranchLabel::CavityMinus,
];

/// Characteristic quartic in ascending powers of δ.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    /// Coefficients a₀..a₄ of Σ aₖ δᵏ.
    pub coeffs: [Complex64; 5],
    /// Frequency scale used to condition the root finder (ω_m for physical
    /// polynomials, 1 for synthetic ones).
    pub freq_scale: f64,
    /// Normalization of the residual check (ω_m³κ² for physical
    /// polynomials, 1 for synthetic ones).
    pub residual_scale: f64,
}

impl CharPoly {
    /// Wrap raw coefficients with unit scales (for synthetic polynomials).
    pub fn new(coeffs: [Complex64; 5]) -> Self {
        CharPoly {
            coeffs,
            freq_scale: 1.0,
            residual_scale: 1.0,
        }
    }

    /// Evaluate the quartic by Horner's rule.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let c = &self.coeffs;
        (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
    }

    /// Evaluate the derivative.
    pub fn eval_derivative(&self, x: Complex64) -> Complex64 {
        let c = &self.coeffs;
        ((4.0 * c[4] * x + 3.0 * c[3]) * x + 2.0 * c[2]) * x + c[1]
    }

    fn normalized_residual(&self, root: Complex64) -> f64 {
        let scaled = (root / self.freq_scale).norm();
        self.eval(root).norm() / (self.residual_scale * scaled.powi(4).max(1.0))
    }
}

/// The four labeled roots of one characteristic quartic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet {
    /// Roots sorted by (sign of Re, |Re|), rad/s.
    pub roots: [Complex64; 4],
    /// Branch identity of each root.
    pub labels: [BranchLabel; 4],
    /// True iff every root has Im < 0 (all modes decay).
    pub stable: bool,
}

impl RootSet {
    /// The two roots with Re > 0, ordered mechanical-like first.
    pub fn positive_pair(&self) -> [Complex64; 2] {
        let mut mech = None;
        let mut cav = None;
        for (r, l) in self.roots.iter().zip(&self.labels) {
            match l {
                BranchLabel::MechanicalPlus => mech = Some(*r),
                BranchLabel::CavityPlus => cav = Some(*r),
                _ => {}
            }
        }
        [mech.expect("mech+ present"), cav.expect("cav+ present")]
    }

    /// |Re(mech+) − Re(cav+)|: the normal-mode frequency splitting.
    pub fn re_separation(&self) -> f64 {
        let [a, b] = self.positive_pair();
        (a.re - b.re).abs()
    }

    /// Root matching a given label.
    pub fn by_label(&self, label: BranchLabel) -> Complex64 {
        self.roots[self
            .labels
            .iter()
            .position(|l| *l == label)
            .expect("all four labels present")]
    }
}

/// Expand the characteristic denominator into its quartic coefficients:
/// a₄ = −1, a₃ = −i(2κ + γ_m), a₂ = κ² + Δ² + 2γ_mκ + ω_m²,
/// a₁ = i[γ_m(κ² + Δ²) + 2κω_m²], a₀ = 4ω_m³χ²Δ|c₀|² − ω_m²(κ² + Δ²).
pub fn expand_char_poly(op: &OperatingPoint) -> CharPoly {
    let wm = op.mech_freq;
    let k = op.cavity_decay;
    let gm = op.mech_damping;
    let delta = op.eff_detuning;
    let k2d2 = k * k + delta * delta;
    let coupling_term = 4.0 * wm.powi(3) * op.coupling * op.coupling * delta * op.photon_number();
    CharPoly {
        coeffs: [
            Complex64::new(coupling_term - wm * wm * k2d2, 0.0),
            Complex64::new(0.0, gm * k2d2 + 2.0 * k * wm * wm),
            Complex64::new(k2d2 + 2.0 * gm * k + wm * wm, 0.0),
            Complex64::new(0.0, -(2.0 * k + gm)),
            Complex64::new(-1.0, 0.0),
        ],
        freq_scale: wm,
        residual_scale: wm.powi(3) * k * k,
    }
}

/// Analytic roots of the χ = 0 factorization, with their branch labels.
pub fn zero_coupling_roots(op: &OperatingPoint) -> [(BranchLabel, Complex64); 4] {
    let wm = op.mech_freq;
    let gm = op.mech_damping;
    let mech_re = (wm * wm - 0.25 * gm * gm).sqrt();
    [
        (BranchLabel::MechanicalPlus, Complex64::new(mech_re, -0.5 * gm)),
        (BranchLabel::MechanicalMinus, Complex64::new(-mech_re, -0.5 * gm)),
        (BranchLabel::CavityPlus, Complex64::new(op.eff_detuning, -op.cavity_decay)),
        (BranchLabel::CavityMinus, Complex64::new(-op.eff_detuning, -op.cavity_decay)),
    ]
}

/// Find the four roots of a characteristic quartic.
///
/// Standalone calls label the roots by linewidth within each half-plane
/// (narrow = mechanical-like, broad = cavity-like); [`sweep_roots`] replaces
/// this with continuity tracking.
pub fn find_roots(poly: &CharPoly) -> Result<RootSet> {
    if poly.coeffs[4].norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "leading quartic coefficient must be nonzero".into(),
        ));
    }
    // condition: solve for z = delta / freq_scale in monic form
    let s = poly.freq_scale;
    let lead = poly.coeffs[4] * s.powi(4);
    let monic: [Complex64; 4] = [
        poly.coeffs[0] / lead,
        poly.coeffs[1] * s / lead,
        poly.coeffs[2] * (s * s) / lead,
        poly.coeffs[3] * (s * s * s) / lead,
    ];
    let mut z = aberth(&monic)?;

    // Newton polish on the original polynomial until the residual gate holds.
    let mut roots = [Complex64::new(0.0, 0.0); 4];
    let mut residuals = [0.0; 4];
    for (i, zi) in z.iter_mut().enumerate() {
        let mut r = *zi * s;
        for _ in 0..40 {
            if poly.normalized_residual(r) < 0.01 * ROOT_RESIDUAL_TOL {
                break;
            }
            let dp = poly.eval_derivative(r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = poly.eval(r) / dp;
            r -= step;
            if step.norm() <= 1e-17 * r.norm().max(s) {
                break;
            }
        }
        roots[i] = r;
        residuals[i] = poly.normalized_residual(r);
    }
    if residuals.iter().any(|&r| !(r < ROOT_RESIDUAL_TOL)) {
        return Err(Error::NumericalFailure {
            message: format!("root polishing left residuals above {ROOT_RESIDUAL_TOL:e}"),
            residuals: residuals.to_vec(),
        });
    }

    // sort by (sign Re, |Re|)
    roots.sort_by(|a, b| {
        let ka = (a.re >= 0.0) as u8;
        let kb = (b.re >= 0.0) as u8;
        ka.cmp(&kb)
            .then(a.re.abs().partial_cmp(&b.re.abs()).unwrap())
            .then(a.im.partial_cmp(&b.im).unwrap())
    });

    let labels = label_by_linewidth(&roots);
    let stable = roots.iter().all(|r| r.im < 0.0);
    Ok(RootSet { roots, labels, stable })
}

/// Aberth–Ehrlich simultaneous iteration for a monic quartic
/// z⁴ + c₃z³ + c₂z² + c₁z + c₀ (coefficients ascending in `monic`).
fn aberth(monic: &[Complex64; 4]) -> Result<[Complex64; 4]> {
    let eval = |z: Complex64| (((z + monic[3]) * z + monic[2]) * z + monic[1]) * z + monic[0];
    let deriv = |z: Complex64| ((4.0 * z + 3.0 * monic[3]) * z + 2.0 * monic[2]) * z + monic[1];

    // start on a slightly rotated circle at the Cauchy bound
    let radius = 1.0 + monic.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: [Complex64; 4] = std::array::from_fn(|k| {
        Complex64::from_polar(radius, std::f64::consts::TAU * (k as f64 + 0.37) / 4.0)
    });

    for _ in 0..200 {
        let mut moved = 0.0_f64;
        for k in 0..4 {
            let p = eval(z[k]);
            let dp = deriv(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let w = if dp.norm() > 0.0 { p / dp } else { p };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..4 {
                if j != k {
                    repulse += 1.0 / (z[k] - z[j]);
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * repulse;
            let step = if denom.norm() > 1e-300 { w / denom } else { w };
            z[k] -= step;
            moved = moved.max(step.norm() / z[k].norm().max(1.0));
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    // Let the caller's residual gate decide; report progress if it fails.
    Ok(z)
}

/// Label sorted roots: within each Re-sign pair the narrower (smaller |Im|)
/// root is mechanical-like, the broader cavity-like.
fn label_by_linewidth(roots: &[Complex64; 4]) -> [BranchLabel; 4] {
    let mut labels = [BranchLabel::MechanicalPlus; 4];
    let neg: Vec<usize> = (0..4).filter(|&i| roots[i].re < 0.0).collect();
    let pos: Vec<usize> = (0..4).filter(|&i| roots[i].re >= 0.0).collect();
    if neg.len() == 2 && pos.len() == 2 {
        let assign = |idx: &[usize], mech: BranchLabel, cav: BranchLabel, labels: &mut [BranchLabel; 4]| {
            if roots[idx[0]].im.abs() <= roots[idx[1]].im.abs() {
                labels[idx[0]] = mech;
                labels[idx[1]] = cav;
            } else {
                labels[idx[0]] = cav;
                labels[idx[1]] = mech;
            }
        };
        assign(&neg, BranchLabel::MechanicalMinus, BranchLabel::CavityMinus, &mut labels);
        assign(&pos, BranchLabel::MechanicalPlus, BranchLabel::CavityPlus, &mut labels);
    } else {
        // mirror symmetry normally forbids this; keep a deterministic order
        labels = ALL_LABELS;
    }
    labels
}

/// Root trajectories over a pump-power sweep with continuity-tracked branch
/// labels, seeded from the analytic χ = 0 limit.
pub fn sweep_roots(params: &PhysicalParams, powers: &[f64]) -> Result<Vec<RootSet>> {
    if powers.is_empty() {
        return Err(Error::InvalidArgument("power grid is empty".into()));
    }
    if powers.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidArgument(
            "pump powers must be nonnegative and finite".into(),
        ));
    }
    if powers.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "pump powers must be sorted ascending".into(),
        ));
    }

    let seed_op = steady_state(&params.with_pump_power(0.0))?;
    let mut previous: Vec<(BranchLabel, Complex64)> = zero_coupling_roots(&seed_op).to_vec();

    let mut out = Vec::with_capacity(powers.len());
    for &power in powers {
        let op = steady_state(&params.with_pump_power(power))?;
        let mut set = find_roots(&expand_char_poly(&op))?;
        let labels = track_labels(&previous, &set.roots, op.mech_freq);
        set.labels = labels;
        previous = set
            .labels
            .iter()
            .cloned()
            .zip(set.roots.iter().cloned())
            .collect();
        out.push(set);
    }
    Ok(out)
}

/// Assign labels by nearest-neighbor continuity against the previous point,
/// minimizing total displacement over all 4! assignments. Ambiguous matches
/// (two candidates within 1e−9·ω_m) are broken by imaginary-part order and
/// logged.
fn track_labels(
    previous: &[(BranchLabel, Complex64)],
    roots: &[Complex64; 4],
    omega_m: f64,
) -> [BranchLabel; 4] {
    const PERMS: [[usize; 4]; 24] = permutations4();
    let mut best = (f64::INFINITY, 0usize);
    for (pi, perm) in PERMS.iter().enumerate() {
        let cost: f64 = previous
            .iter()
            .zip(perm)
            .map(|((_, prev), &ri)| (roots[ri] - prev).norm())
            .sum();
        if cost < best.0 {
            best = (cost, pi);
        }
    }
    let perm = PERMS[best.1];

    // ambiguity diagnostic: a previous root nearly equidistant to two candidates
    for (_, prev) in previous {
        let mut d: Vec<f64> = roots.iter().map(|r| (r - prev).norm()).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if (d[1] - d[0]).abs() < 1e-9 * omega_m {
            log::warn!(
                "branch tracking ambiguity near {prev}: two candidates within 1e-9 omega_m; \
                 tie broken by imaginary-part ordering"
            );
        }
    }

    let mut labels = [BranchLabel::MechanicalPlus; 4];
    for ((label, _), &ri) in previous.iter().zip(&perm) {
        labels[ri] = *label;
    }
    labels
}

const fn permutations4() -> [[usize; 4]; 24] {
    let mut out = [[0usize; 4]; 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let mut d = 0;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[n] = [a, b, c, d];
                        n += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// Locate the normal-mode-splitting onset by bisection on the Re-separation
/// of the Re > 0 root pair (onset criterion: separation > 1e−3·ω_m).
/// The bracket must straddle the onset; the result is resolved to 1 μW.
pub fn critical_power(params: &PhysicalParams, bracket: (f64, f64)) -> Result<f64> {
    const POWER_TOL: f64 = 1e-6; // W

    let (mut lo, mut hi) = bracket;
    if !(lo >= 0.0) || !(hi > lo) {
        return Err(Error::Bracket(format!(
            "bracket must satisfy 0 <= lo < hi, got ({lo}, {hi})"
        )));
    }
    let sep = |power: f64| -> Result<f64> {
        let op = steady_state(&params.with_pump_power(power))?;
        Ok(find_roots(&expand_char_poly(&op))?.re_separation() / op.mech_freq)
    };
    let split = |s: f64| s > RE_DEGENERACY_TOL;
    if split(sep(lo)?) {
        return Err(Error::Bracket(format!(
            "low end {lo} W already shows frequency splitting"
        )));
    }
    if !split(sep(hi)?) {
        return Err(Error::Bracket(format!(
            "high end {hi} W shows no frequency splitting; onset not bracketed"
        )));
    }
    while hi - lo > POWER_TOL {
        let mid = 0.5 * (lo + hi);
        if split(sep(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// CSV export of labeled root trajectories with the documented header
/// `power_mw,branch,re_over_omega_m,im_over_omega_m,stable`.
pub fn write_roots_csv<W: Write>(
    mut out: W,
    powers: &[f64],
    sets: &[RootSet],
    omega_m: f64,
) -> Result<()> {
    writeln!(out, "power_mw,branch,re_over_omega_m,im_over_omega_m,stable")?;
    for (power, set) in powers.iter().zip(sets) {
        for label in ALL_LABELS {
            let r = set.by_label(label);
            writeln!(
                out,
                "{},{},{},{},{}",
                power * 1e3,
                label,
                r.re / omega_m,
                r.im / omega_m,
                set.stable
            )?;
        }
    }
    Ok(())
}

/// JSON record set mirroring the roots CSV columns.
pub fn roots_json_records(
    powers: &[f64],
    sets: &[RootSet],
    omega_m: f64,
) -> serde_json::Value {
    let mut records = Vec::with_capacity(4 * sets.len());
    for (power, set) in powers.iter().zip(sets) {
        for label in ALL_LABELS {
            let r = set.by_label(label);
            records.push(serde_json::json!({
                "power_mw": power * 1e3,
                "branch": label.to_string(),
                "re_over_omega_m": r.re / omega_m,
                "im_over_omega_m": r.im / omega_m,
                "stable": set.stable,
            }));
        }
    }
    serde_json::Value::Array(records)
}
