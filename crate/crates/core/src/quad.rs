//! Quadrature on window-refined grids and oscillatory transforms.
//!
//! The noise spectra this crate integrates are sums of resonances whose
//! widths span four orders of magnitude, so uniform grids are hopeless.
//! [`GridSpec`] describes a coarse background plus dense windows centered
//! on each resonance; [`integrate`] is plain composite trapezoid on the
//! merged grid; [`oscillatory_transform`] evaluates (1/2π)∫f(ω)e^{±iωτ}dω
//! with a Filon-type rule — the kernel e^{±iωτ} is integrated exactly
//! against a piecewise-linear interpolant of f, so accuracy is set by how
//! well the grid resolves f, never by how fast the kernel spins. Delay
//! ranges with τ·ω_max of order 10⁶ rad cost nothing extra.
//!
//! ```
//! use fwmix::quad::{self, GridSpec, Window};
//! use num_complex::Complex64;
//!
//! let spec = GridSpec {
//!     background: (-10.0, 10.0),
//!     background_points: 2001,
//!     windows: vec![Window { center: 0.0, width: 2.0, points: 401 }],
//! };
//! let xs = spec.build().unwrap();
//! let ys: Vec<Complex64> = xs
//!     .iter()
//!     .map(|&x| Complex64::new(1.0 / (1.0 + x * x), 0.0))
//!     .collect();
//! let area = quad::integrate(&xs, &ys).unwrap();
//! // arctan(10) - arctan(-10)
//! assert!((area.re - 2.0 * 10.0_f64.atan()).abs() < 1e-4);
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sign of the oscillatory kernel e^{sign·iωτ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// Kernel e^{+iωτ}.
    Plus,
    /// Kernel e^{−iωτ}.
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One dense refinement window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    /// Window center (same units as the background range).
    pub center: f64,
    /// Full window width.
    pub width: f64,
    /// Sample count across the window, at least 2.
    pub points: usize,
}

/// A coarse background range with dense windows merged into it.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Background interval (lo, hi).
    pub background: (f64, f64),
    /// Background sample count, at least 2.
    pub background_points: usize,
    /// Refinement windows; each must lie inside the background interval.
    pub windows: Vec<Window>,
}

impl GridSpec {
    /// Validate the segment invariants.
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.background;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "background range must be finite with lo < hi, got ({lo}, {hi})"
            )));
        }
        if self.background_points < 2 {
            return Err(Error::InvalidArgument(
                "background needs at least 2 points".into(),
            ));
        }
        for w in &self.windows {
            if w.points < 2 {
                return Err(Error::InvalidArgument(
                    "every window needs at least 2 points".into(),
                ));
            }
            if !(w.width > 0.0) || !w.center.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "window must have positive width, got center {} width {}",
                    w.center, w.width
                )));
            }
            if w.center - 0.5 * w.width < lo || w.center + 0.5 * w.width > hi {
                return Err(Error::InvalidArgument(format!(
                    "window [{}, {}] extends outside the background range ({lo}, {hi})",
                    w.center - 0.5 * w.width,
                    w.center + 0.5 * w.width
                )));
            }
        }
        Ok(())
    }

    /// Merged, strictly increasing sample grid.
    pub fn build(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let (lo, hi) = self.background;
        let mut points = Vec::new();
        // A background straddling zero is split there so that 0 is always a
        // grid node; band-restricted integrals cut at exactly ω = 0.
        if lo < 0.0 && hi > 0.0 {
            let frac = -lo / (hi - lo);
            let n_neg = ((self.background_points - 1) as f64 * frac).round().max(1.0) as usize;
            let n_pos = (self.background_points - 1).saturating_sub(n_neg).max(1);
            linspace_into(lo, 0.0, n_neg + 1, &mut points);
            linspace_into(0.0, hi, n_pos + 1, &mut points);
        } else {
            linspace_into(lo, hi, self.background_points, &mut points);
        }
        for w in &self.windows {
            linspace_into(
                w.center - 0.5 * w.width,
                w.center + 0.5 * w.width,
                w.points,
                &mut points,
            );
        }
        Ok(merge_sorted(points))
    }

    /// The same grid at double density (each segment's point count n → 2n−1,
    /// which nests the original nodes).
    pub fn doubled(&self) -> GridSpec {
        GridSpec {
            background: self.background,
            background_points: 2 * self.background_points - 1,
            windows: self
                .windows
                .iter()
                .map(|w| Window {
                    points: 2 * w.points - 1,
                    ..*w
                })
                .collect(),
        }
    }
}

fn linspace_into(lo: f64, hi: f64, n: usize, out: &mut Vec<f64>) {
    let step = (hi - lo) / (n - 1) as f64;
    out.reserve(n);
    for i in 0..n {
        out.push(if i == n - 1 { hi } else { lo + i as f64 * step });
    }
}

/// Sort and deduplicate a point collection into a strictly increasing grid.
pub fn merge_sorted(mut points: Vec<f64>) -> Vec<f64> {
    points.sort_by(|a, b| a.partial_cmp(b).expect("grid points must not be NaN"));
    points.dedup();
    points
}

fn check_samples<T>(xs: &[f64], ys: &[T]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "abscissae/value length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 samples to integrate".into(),
        ));
    }
    for pair in xs.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::InvalidArgument(format!(
                "abscissae must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// Composite trapezoid integral of complex samples.
pub fn integrate(xs: &[f64], ys: &[Complex64]) -> Result<Complex64> {
    check_samples(xs, ys)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 1..xs.len() {
        acc += (ys[i] + ys[i - 1]) * 0.5 * (xs[i] - xs[i - 1]);
    }
    Ok(acc)
}

/// Composite trapezoid integral of real samples.
pub fn integrate_real(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_samples(xs, ys)?;
    let mut acc = 0.0;
    for i in 1..xs.len() {
        acc += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }
    Ok(acc)
}

/// Filon-type oscillatory transform: for each τ in `taus` compute
/// (1/2π) ∫ f(ω) e^{sign·iωτ} dω over the sampled grid.
///
/// On each interval f is represented by its linear interpolant and the
/// moments ∫e^{iθu}du, ∫u·e^{iθu}du are evaluated in closed form (with a
/// series fallback for small phase advance θh where the closed form loses
/// precision). At τ = 0 the result reduces to [`integrate`]/2π exactly.
pub fn oscillatory_transform(
    xs: &[f64],
    ys: &[Complex64],
    taus: &[f64],
    sign: Sign,
) -> Result<Vec<Complex64>> {
    check_samples(xs, ys)?;
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        if tau == 0.0 {
            out.push(integrate(xs, ys)? / std::f64::consts::TAU);
            continue;
        }
        let theta = sign.value() * tau;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..xs.len() {
            let h = xs[i] - xs[i - 1];
            let (m0, m1) = kernel_moments(theta, h);
            let slope = (ys[i] - ys[i - 1]) / h;
            let phase = Complex64::from_polar(1.0, theta * xs[i - 1]);
            acc += phase * (ys[i - 1] * m0 + slope * m1);
        }
        out.push(acc / std::f64::consts::TAU);
    }
    Ok(out)
}

/// Moments (∫₀ʰ e^{iθu}du, ∫₀ʰ u e^{iθu}du).
fn kernel_moments(theta: f64, h: f64) -> (Complex64, Complex64) {
    let z = theta * h;
    if z.abs() < 1e-3 {
        // series in z; truncation below 1e-15 relative at |z| = 1e-3
        let z2 = z * z;
        let m0 = Complex64::new(1.0 - z2 / 6.0 + z2 * z2 / 120.0, z / 2.0 - z2 * z / 24.0) * h;
        let m1 = Complex64::new(0.5 - z2 / 8.0 + z2 * z2 / 144.0, z / 3.0 - z2 * z / 30.0) * (h * h);
        (m0, m1)
    } else {
        let itheta = Complex64::new(0.0, theta);
        let eiz = Complex64::from_polar(1.0, z);
        let one = Complex64::new(1.0, 0.0);
        let m0 = (eiz - one) / itheta;
        let m1 = eiz * (h / itheta + 1.0 / (theta * theta)) - 1.0 / (theta * theta);
        (m0, m1)
    }
}

/// Maximum grid doublings attempted by [`converge`].
pub const MAX_DOUBLINGS: usize = 8;

/// Evaluate `f` on successively doubled grids until two consecutive values
/// agree to `rel_tol`; returns the last value and the achieved agreement.
pub fn converge<F>(mut f: F, spec: &GridSpec, rel_tol: f64) -> Result<(Complex64, f64)>
where
    F: FnMut(&GridSpec) -> Result<Complex64>,
{
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    let mut spec = spec.clone();
    let mut prev = f(&spec)?;
    let mut sequence = vec![prev.norm()];
    for _ in 0..MAX_DOUBLINGS {
        spec = spec.doubled();
        let next = f(&spec)?;
        sequence.push(next.norm());
        let scale = next.norm().max(f64::MIN_POSITIVE);
        let achieved = (next - prev).norm() / scale;
        if achieved <= rel_tol {
            return Ok((next, achieved));
        }
        prev = next;
    }
    Err(Error::NumericalFailure {
        message: format!("integral did not converge to {rel_tol:e} within {MAX_DOUBLINGS} doublings"),
        residuals: sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn complexify(xs: &[f64], f: impl Fn(f64) -> f64) -> Vec<Complex64> {
        xs.iter().map(|&x| Complex64::new(f(x), 0.0)).collect()
    }

    #[test]
    fn constant_over_unit_interval_is_exact() {
        // 128 intervals of width exactly 1/128: the trapezoid sum is exact.
        let spec = GridSpec {
            background: (0.0, 1.0),
            background_points: 129,
            windows: vec![],
        };
        let xs = spec.build().unwrap();
        let ys = complexify(&xs, |_| 1.0);
        assert_eq!(integrate(&xs, &ys).unwrap().re, 1.0);
    }

    #[test]
    fn lorentzian_unit_area() {
        let kappa = 1.0;
        let spec = GridSpec {
            background: (-200.0 * kappa, 200.0 * kappa),
            background_points: 2001,
            windows: vec![Window { center: 0.0, width: 40.0 * kappa, points: 4001 }],
        };
        let xs = spec.build().unwrap();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&w| kappa / (std::f64::consts::PI * (kappa * kappa + w * w)))
            .collect();
        let got = integrate_real(&xs, &ys).unwrap();
        // analytic mass inside +/-200 kappa; the tail outside holds ~3.2e-3
        let truncated = 2.0 / std::f64::consts::PI * (200.0_f64).atan();
        assert_relative_eq!(got, truncated, max_relative = 1e-4);
        assert!((got - 1.0).abs() < 4e-3);
    }

    #[test]
    fn window_refinement_beats_uniform_at_equal_cost() {
        // Narrow Lorentzian: a window-refined grid with the same total point
        // count must be at least 100x more accurate than a uniform grid.
        let omega_m = std::f64::consts::TAU * 947e3;
        let gamma = std::f64::consts::TAU * 141.0;
        let f = |w: f64| gamma / (std::f64::consts::PI * (gamma * gamma + (w - omega_m).powi(2)));
        let lo = -8.0 * omega_m;
        let hi = 8.0 * omega_m;
        let exact = ((hi - omega_m) / gamma).atan() / std::f64::consts::PI
            - ((lo - omega_m) / gamma).atan() / std::f64::consts::PI;

        let uniform = GridSpec { background: (lo, hi), background_points: 4002, windows: vec![] };
        let xs_u = uniform.build().unwrap();
        let err_u = (integrate_real(&xs_u, &xs_u.iter().map(|&x| f(x)).collect::<Vec<_>>())
            .unwrap()
            - exact)
            .abs();

        let refined = GridSpec {
            background: (lo, hi),
            background_points: 2001,
            windows: vec![Window { center: omega_m, width: 40.0 * gamma, points: 2001 }],
        };
        let xs_r = refined.build().unwrap();
        let err_r = (integrate_real(&xs_r, &xs_r.iter().map(|&x| f(x)).collect::<Vec<_>>())
            .unwrap()
            - exact)
            .abs();

        assert!(
            err_r * 100.0 <= err_u,
            "refined err {err_r:e} not 100x below uniform err {err_u:e}"
        );
    }

    #[test]
    fn transform_matches_analytic_exponential_decay() {
        // (1/2pi) int 2k/(k^2+w^2) e^{-iw tau} dw = e^{-k|tau|}
        let kappa = std::f64::consts::TAU * 215e3;
        let spec = GridSpec {
            background: (-12800.0 * kappa, 12800.0 * kappa),
            background_points: 16385,
            windows: vec![Window { center: 0.0, width: 80.0 * kappa, points: 4097 }],
        };
        let xs = spec.build().unwrap();
        let ys = complexify(&xs, |w| 2.0 * kappa / (kappa * kappa + w * w));
        let taus: Vec<f64> = (0..21).map(|i| i as f64 * 0.5 / kappa).collect();
        let got = oscillatory_transform(&xs, &ys, &taus, Sign::Minus).unwrap();
        for (tau, g) in taus.iter().zip(&got) {
            let expect = (-kappa * tau).exp();
            assert!(
                (g.re - expect).abs() < 1e-4 && g.im.abs() < 1e-4,
                "tau*kappa={}: got {g}, expected {expect}",
                tau * kappa
            );
        }
    }

    #[test]
    fn transform_at_zero_tau_is_plain_integral() {
        let spec = GridSpec { background: (-3.0, 5.0), background_points: 300, windows: vec![] };
        let xs = spec.build().unwrap();
        let ys: Vec<Complex64> = xs
            .iter()
            .map(|&x| Complex64::new((-x * x).exp(), 0.3 * x))
            .collect();
        let direct = integrate(&xs, &ys).unwrap() / std::f64::consts::TAU;
        let via = oscillatory_transform(&xs, &ys, &[0.0], Sign::Minus).unwrap()[0];
        assert_eq!(direct, via);
    }

    #[test]
    fn transform_conjugate_symmetry_for_real_input() {
        let kappa = 2.0;
        let spec = GridSpec { background: (-40.0, 40.0), background_points: 3001, windows: vec![] };
        let xs = spec.build().unwrap();
        let ys = complexify(&xs, |w| 2.0 * kappa / (kappa * kappa + w * w));
        let taus = [0.3, 1.7, 4.0];
        let neg: Vec<f64> = taus.iter().map(|t| -t).collect();
        let plus = oscillatory_transform(&xs, &ys, &taus, Sign::Minus).unwrap();
        let minus = oscillatory_transform(&xs, &ys, &neg, Sign::Minus).unwrap();
        for (a, b) in plus.iter().zip(&minus) {
            assert_relative_eq!(a.re, b.re, max_relative = 1e-13);
            assert_relative_eq!(a.im, -b.im, max_relative = 1e-13);
        }
    }

    #[test]
    fn rejects_malformed_samples() {
        let ys = vec![Complex64::new(1.0, 0.0); 3];
        assert!(integrate(&[0.0, 1.0, 0.5], &ys).is_err()); // unsorted
        assert!(integrate(&[0.0, 0.0, 1.0], &ys).is_err()); // duplicate
        assert!(integrate(&[0.0], &ys[..1]).is_err()); // too short
        assert!(integrate(&[0.0, 1.0], &ys).is_err()); // length mismatch
    }

    #[test]
    fn grid_invariants() {
        let spec = GridSpec {
            background: (-4.0, 4.0),
            background_points: 41,
            windows: vec![Window { center: 1.0, width: 0.5, points: 11 }],
        };
        let xs = spec.build().unwrap();
        assert!(xs.windows(2).all(|p| p[0] < p[1]));
        assert!(xs.contains(&0.0));
        // merge idempotence
        let twice = merge_sorted(xs.iter().cloned().chain(xs.iter().cloned()).collect());
        assert_eq!(twice, xs);
        // window outside background is rejected
        let bad = GridSpec {
            background: (-1.0, 1.0),
            background_points: 11,
            windows: vec![Window { center: 0.9, width: 0.5, points: 11 }],
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn doubled_grid_nests() {
        let spec = GridSpec {
            background: (-2.0, 2.0),
            background_points: 9,
            windows: vec![Window { center: 0.5, width: 0.25, points: 5 }],
        };
        let coarse = spec.build().unwrap();
        let fine = spec.doubled().build().unwrap();
        for x in &coarse {
            assert!(fine.iter().any(|y| y == x), "{x} lost on doubling");
        }
    }

    #[test]
    fn converge_constant_stops_after_one_doubling() {
        let spec = GridSpec { background: (0.0, 1.0), background_points: 17, windows: vec![] };
        let mut calls = 0;
        let (value, achieved) = converge(
            |s| {
                calls += 1;
                let xs = s.build()?;
                let ys: Vec<Complex64> = xs.iter().map(|_| Complex64::new(2.0, 0.0)).collect();
                integrate(&xs, &ys)
            },
            &spec,
            1e-12,
        )
        .unwrap();
        assert_eq!(calls, 2);
        assert_relative_eq!(value.re, 2.0, max_relative = 1e-15);
        assert!(achieved <= 1e-12);
    }

    #[test]
    fn converge_resolves_underresolved_lorentzian() {
        let gamma = 1e-3;
        let spec = GridSpec {
            background: (-1.0, 1.0),
            background_points: 101,
            windows: vec![Window { center: 0.0, width: 20.0 * gamma, points: 51 }],
        };
        let exact = 2.0 / std::f64::consts::PI * (1.0 / gamma).atan();
        let (value, achieved) = converge(
            |s| {
                let xs = s.build()?;
                let ys: Vec<Complex64> = xs
                    .iter()
                    .map(|&w| Complex64::new(gamma / (std::f64::consts::PI * (gamma * gamma + w * w)), 0.0))
                    .collect();
                integrate(&xs, &ys)
            },
            &spec,
            1e-4,
        )
        .unwrap();
        assert!(achieved <= 1e-4);
        assert_relative_eq!(value.re, exact, max_relative = 1e-3);
    }

    #[test]
    fn converge_rejects_zero_tolerance() {
        let spec = GridSpec { background: (0.0, 1.0), background_points: 9, windows: vec![] };
        assert!(converge(|_| Ok(Complex64::new(1.0, 0.0)), &spec, 0.0).is_err());
    }
}
