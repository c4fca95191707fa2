//! Property tests for the algebraic invariants of the pipeline.

use fwmix::model::{steady_state, OperatingPoint, PhysicalParams};
use fwmix::modes::{expand_char_poly, find_roots};
use fwmix::noise::{correlators, NoiseConfig};
use fwmix::quad::{self, GridSpec, Sign};
use fwmix::response::{
    char_denominator, char_denominator_compact, gains_and_quadratures, stokes_response,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn op_at(power: f64) -> OperatingPoint {
    steady_state(&PhysicalParams::aspelmeyer().with_pump_power(power)).unwrap()
}

proptest! {
    // The two algebraic routes to the characteristic denominator agree.
    #[test]
    fn denominator_forms_agree(
        delta_wm in -5.0..5.0f64,
        power_mw in 0.0..40.0f64,
    ) {
        let op = op_at(power_mw * 1e-3);
        let delta = delta_wm * op.mech_freq;
        let a = char_denominator(delta, &op);
        let b = char_denominator_compact(delta, &op);
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(b.norm()));
    }

    // Unit reflection off the passive cavity: any gain requires coupling.
    #[test]
    fn zero_coupling_reflection_is_unity(delta_wm in -10.0..10.0f64) {
        let op = op_at(6.9e-3).with_zero_coupling();
        let delta = delta_wm * op.mech_freq;
        let sqrt2k = (2.0 * op.cavity_decay).sqrt();
        let g = (sqrt2k * stokes_response(delta, &op).unwrap()).norm_sqr();
        prop_assert!((g - 1.0).abs() < 1e-12);
    }

    // The two homodyne quadratures carry the full Stokes power.
    #[test]
    fn quadratures_sum_to_gain(
        delta_wm in -3.0..3.0f64,
        power_mw in 0.0..40.0f64,
    ) {
        let op = op_at(power_mw * 1e-3);
        let p = gains_and_quadratures(delta_wm * op.mech_freq, &op).unwrap();
        let sum = p.v_s * p.v_s + p.v_s_tilde * p.v_s_tilde;
        prop_assert!((sum - p.g_s).abs() <= 1e-12 * p.g_s.max(1.0));
    }

    // A far-detuned probe reflects unchanged.
    #[test]
    fn far_detuned_probe_is_untouched(power_mw in 0.0..40.0f64) {
        let op = op_at(power_mw * 1e-3);
        for sign in [-1.0, 1.0] {
            let p = gains_and_quadratures(sign * 100.0 * op.mech_freq, &op).unwrap();
            prop_assert!((p.g_s - 1.0).abs() < 1e-6);
            prop_assert!(p.g_as < 1e-6);
        }
    }

    // Quartic structure: mirror pairs {r, -r*}, Vieta sum, residual gate,
    // and the expansion agrees with the denominator pointwise.
    #[test]
    fn root_set_structure(power_mw in 0.0..40.0f64, probe_wm in -3.0..3.0f64) {
        let op = op_at(power_mw * 1e-3);
        let poly = expand_char_poly(&op);
        let wm = op.mech_freq;

        let probe = probe_wm * wm;
        let via_poly = poly.eval(Complex64::new(probe, 0.0));
        let direct = char_denominator(probe, &op);
        prop_assert!((via_poly - direct).norm() <= 1e-12 * via_poly.norm().max(direct.norm()));

        let set = find_roots(&poly).unwrap();
        for r in set.roots {
            let mirror = Complex64::new(-r.re, r.im);
            prop_assert!(set.roots.iter().any(|s| (s - mirror).norm() < 1e-6 * wm));
            let norm = poly.eval(r).norm()
                / (wm.powi(3) * op.cavity_decay.powi(2) * (r.norm() / wm).powi(4).max(1.0));
            prop_assert!(norm < 1e-8);
        }
        let sum: Complex64 = set.roots.iter().sum();
        let vieta = -poly.coeffs[3] / poly.coeffs[4];
        prop_assert!((sum - vieta).norm() <= 1e-9 * vieta.norm());
        prop_assert!(set.stable);
    }

    // The oscillatory transform is linear in the integrand.
    #[test]
    fn transform_linearity(
        a_re in -2.0..2.0f64, a_im in -2.0..2.0f64,
        b_re in -2.0..2.0f64, b_im in -2.0..2.0f64,
        tau in 0.0..5.0f64,
    ) {
        let spec = GridSpec { background: (-8.0, 8.0), background_points: 257, windows: vec![] };
        let xs = spec.build().unwrap();
        let f: Vec<Complex64> = xs.iter().map(|&x| Complex64::new((-x * x / 4.0).exp(), 0.1 * x)).collect();
        let g: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(1.0 / (1.0 + x * x), x.cos())).collect();
        let alpha = Complex64::new(a_re, a_im);
        let beta = Complex64::new(b_re, b_im);
        let combo: Vec<Complex64> = f.iter().zip(&g).map(|(fi, gi)| alpha * fi + beta * gi).collect();
        let taus = [tau];
        let tf = quad::oscillatory_transform(&xs, &f, &taus, Sign::Minus).unwrap()[0];
        let tg = quad::oscillatory_transform(&xs, &g, &taus, Sign::Minus).unwrap()[0];
        let tc = quad::oscillatory_transform(&xs, &combo, &taus, Sign::Minus).unwrap()[0];
        let expect = alpha * tf + beta * tg;
        let scale = tc.norm().max(expect.norm()).max(1e-12);
        prop_assert!((tc - expect).norm() <= 1e-12 * scale.max(1.0));
    }

    // Grid construction is idempotent under self-merge.
    #[test]
    fn grid_merge_idempotent(n in 3usize..40, w in 0.1..1.0f64) {
        let spec = GridSpec {
            background: (-2.0, 2.0),
            background_points: n,
            windows: vec![quad::Window { center: 0.5, width: w, points: n }],
        };
        let xs = spec.build().unwrap();
        let merged = quad::merge_sorted(xs.iter().cloned().chain(xs.iter().cloned()).collect());
        prop_assert_eq!(merged, xs);
    }
}

// Gaussian statistics put a hard floor of 2 under the zero-delay
// coincidence rate of any stable state at any temperature.
#[test]
fn g2_zero_floor_across_states() {
    let tau = [0.0, 0.5e-6, 1e-6];
    for power_mw in [0.3, 2.0, 8.0] {
        for temperature in [0.0, 300.0] {
            let op = op_at(power_mw * 1e-3);
            let series = correlators(&op, temperature, &tau, &NoiseConfig::default()).unwrap();
            assert!(
                series.g2_zero() >= 2.0,
                "g2(0) = {} at {power_mw} mW, T = {temperature}",
                series.g2_zero()
            );
        }
    }
}
