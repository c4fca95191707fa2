//! Physical parameters and the steady-state operating point.
//!
//! Everything downstream — stimulated response, normal-mode structure,
//! quantum noise — is a function of one [`OperatingPoint`]: the coupling
//! constant χ, the intracavity pump amplitude c₀, the static mirror
//! displacement Q₀ and the effective detuning Δ. This module owns the
//! laboratory inputs ([`PhysicalParams`]), the derived constants, and the
//! closed-form steady state.
//!
//! All frequencies are angular (rad/s) internally. The configuration layer
//! accepts linear frequencies in Hz and converts on input.
//!
//! ```
//! use fwmix::model::{PhysicalParams, steady_state};
//!
//! let params = PhysicalParams::aspelmeyer();
//! let op = steady_state(&params).unwrap();
//! assert!(op.coupling > 0.0);
//! assert_eq!(op.mirror_mom, 0.0); // the steady-state mirror momentum vanishes
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Laboratory inputs describing the driven optomechanical cavity.
///
/// The defaults of interest live in [`PhysicalParams::aspelmeyer`], the
/// parameter set of the Groeblacher et al. normal-mode-splitting experiment
/// (λ = 1064 nm, L = 25 mm, m = 145 ng, κ/2π = 215 kHz, ω_m/2π = 947 kHz,
/// γ_m/2π = 141 Hz, Δ = ω_m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Pump laser wavelength λ (m).
    pub laser_wavelength: f64,
    /// Cavity length L (m).
    pub cavity_length: f64,
    /// Movable mirror mass m (kg).
    pub mirror_mass: f64,
    /// Cavity amplitude decay rate κ (rad/s).
    pub cavity_decay: f64,
    /// Mechanical resonance frequency ω_m (rad/s).
    pub mech_freq: f64,
    /// Mechanical momentum damping rate γ_m (rad/s).
    pub mech_damping: f64,
    /// Effective cavity-pump detuning Δ (rad/s). This is an input, not a
    /// self-consistently solved quantity; see [`detuning_offset`] for the
    /// bare detuning the lab would have to set.
    pub eff_detuning: f64,
    /// Pump power ℘ (W).
    pub pump_power: f64,
    /// Injected Stokes power ℘_s (W). Normalization only — no computed
    /// quantity depends on it; gains are reported per unit Stokes input.
    pub stokes_power: f64,
    /// Temperature of the mechanical bath T (K).
    pub temperature: f64,
}

impl PhysicalParams {
    /// Parameter set of the normal-mode-splitting experiment used for every
    /// headline number in this crate.
    pub fn aspelmeyer() -> Self {
        let two_pi = std::f64::consts::TAU;
        PhysicalParams {
            laser_wavelength: 1064e-9,
            cavity_length: 25e-3,
            mirror_mass: 145e-12,
            cavity_decay: two_pi * 215e3,
            mech_freq: two_pi * 947e3,
            mech_damping: two_pi * 141.0,
            eff_detuning: two_pi * 947e3,
            pump_power: 6.9e-3,
            stokes_power: 0.0,
            temperature: 0.0,
        }
    }

    /// Same parameters with a different pump power (W).
    pub fn with_pump_power(mut self, power: f64) -> Self {
        self.pump_power = power;
        self
    }

    /// Pump laser angular frequency ω_l = 2πc/λ (rad/s).
    pub fn laser_freq(&self) -> f64 {
        std::f64::consts::TAU * SPEED_OF_LIGHT / self.laser_wavelength
    }

    /// Mechanical quality factor ω_m/γ_m.
    pub fn quality_factor(&self) -> f64 {
        self.mech_freq / self.mech_damping
    }

    /// Check all domain invariants.
    pub fn validate(&self) -> Result<()> {
        let positive: [(&'static str, f64); 6] = [
            ("laser_wavelength", self.laser_wavelength),
            ("cavity_length", self.cavity_length),
            ("mirror_mass", self.mirror_mass),
            ("cavity_decay", self.cavity_decay),
            ("mech_freq", self.mech_freq),
            ("mech_damping", self.mech_damping),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::invalid_param(
                    name,
                    format!("must be strictly positive and finite, got {value}"),
                ));
            }
        }
        let nonnegative: [(&'static str, f64); 3] = [
            ("pump_power", self.pump_power),
            ("stokes_power", self.stokes_power),
            ("temperature", self.temperature),
        ];
        for (name, value) in nonnegative {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::invalid_param(
                    name,
                    format!("must be nonnegative and finite, got {value}"),
                ));
            }
        }
        if !self.eff_detuning.is_finite() {
            return Err(Error::invalid_param("eff_detuning", "must be finite"));
        }
        Ok(())
    }
}

/// Steady-state operating point consumed by every downstream formula.
///
/// Immutable value type; cheap to copy and safe to share across threads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Optomechanical coupling constant χ (dimensionless).
    pub coupling: f64,
    /// Intracavity pump amplitude ε_l (s⁻¹ scale).
    pub pump_amp: f64,
    /// Steady-state cavity amplitude c₀ = ε_l/(κ + iΔ).
    pub cavity_amp: Complex64,
    /// Static mirror displacement Q₀ = 2χ|c₀|² (dimensionless).
    pub mirror_disp: f64,
    /// Static mirror momentum P₀. Identically zero in steady state.
    pub mirror_mom: f64,
    /// Effective detuning Δ (rad/s), copied from the input parameters.
    pub eff_detuning: f64,
    /// Cavity decay rate κ (rad/s).
    pub cavity_decay: f64,
    /// Mechanical frequency ω_m (rad/s).
    pub mech_freq: f64,
    /// Mechanical damping γ_m (rad/s).
    pub mech_damping: f64,
}

impl OperatingPoint {
    /// Intracavity pump photon number |c₀|².
    pub fn photon_number(&self) -> f64 {
        self.cavity_amp.norm_sqr()
    }

    /// Copy of this operating point with the coupling switched off.
    ///
    /// Useful for zero-coupling baselines: χ = 0 forces Q₀ = 0 while the
    /// cavity amplitude is left untouched.
    pub fn with_zero_coupling(mut self) -> Self {
        self.coupling = 0.0;
        self.mirror_disp = 0.0;
        self
    }
}

/// Optomechanical coupling constant χ = (1/ω_m)(ω_c/L)√(ħ/(2 m ω_m)).
///
/// The cavity mode frequency ω_c is taken at the optical carrier 2πc/λ;
/// the distinction between carrier and exact cavity resonance is O(ppm)
/// here and does not matter at this precision.
pub fn coupling_constant(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    let omega_c = params.laser_freq();
    let zpf = (HBAR / (2.0 * params.mirror_mass * params.mech_freq)).sqrt();
    Ok((omega_c / params.cavity_length) * zpf / params.mech_freq)
}

/// Drive amplitude ε = √(2κ·P/(ħω)) for a beam of power `power` (W) at
/// angular frequency `laser_freq` entering a cavity of decay rate `kappa`.
///
/// Serves both the pump (℘, ω_l) and the Stokes seed (℘_s, ω_s).
pub fn pump_amplitude(power: f64, kappa: f64, laser_freq: f64) -> Result<f64> {
    if !(power >= 0.0) || !power.is_finite() {
        return Err(Error::invalid_param(
            "power",
            format!("must be nonnegative and finite, got {power}"),
        ));
    }
    if !(kappa > 0.0) || !(laser_freq > 0.0) {
        return Err(Error::invalid_param(
            "kappa/laser_freq",
            "decay rate and laser frequency must be positive",
        ));
    }
    Ok((2.0 * kappa * power / (HBAR * laser_freq)).sqrt())
}

/// Solve the steady state: c₀ = ε_l/(κ + iΔ), Q₀ = 2χ|c₀|², P₀ = 0.
pub fn steady_state(params: &PhysicalParams) -> Result<OperatingPoint> {
    let coupling = coupling_constant(params)?;
    let pump_amp = pump_amplitude(params.pump_power, params.cavity_decay, params.laser_freq())?;
    let cavity_amp =
        Complex64::new(pump_amp, 0.0) / Complex64::new(params.cavity_decay, params.eff_detuning);
    let mirror_disp = 2.0 * coupling * cavity_amp.norm_sqr();
    Ok(OperatingPoint {
        coupling,
        pump_amp,
        cavity_amp,
        mirror_disp,
        mirror_mom: 0.0,
        eff_detuning: params.eff_detuning,
        cavity_decay: params.cavity_decay,
        mech_freq: params.mech_freq,
        mech_damping: params.mech_damping,
    })
}

/// Bare cavity-pump detuning ω_c − ω_l = Δ + ω_m χ Q₀.
///
/// Forward bookkeeping only: given the effective detuning the model is
/// parameterized by, report the bare detuning the lab would have to set to
/// realize it. The radiation-pressure shift ω_m χ Q₀ is the static
/// back-action of the displaced mirror.
pub fn detuning_offset(op: &OperatingPoint) -> f64 {
    op.eff_detuning + op.mech_freq * op.coupling * op.mirror_disp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Frozen reference numbers below were computed with an independent
    // 40-digit mpmath evaluation of the same closed forms.

    #[test]
    fn coupling_constant_reference_value() {
        let chi = coupling_constant(&PhysicalParams::aspelmeyer()).unwrap();
        assert_relative_eq!(chi, 2.9421393939311585e-6, max_relative = 1e-12);
    }

    #[test]
    fn coupling_scales_as_inverse_sqrt_mass() {
        let params = PhysicalParams::aspelmeyer();
        let chi = coupling_constant(&params).unwrap();
        let mut heavy = params;
        heavy.mirror_mass *= 4.0;
        let chi_heavy = coupling_constant(&heavy).unwrap();
        assert_eq!(chi_heavy, chi / 2.0);
    }

    #[test]
    fn coupling_scales_as_inverse_length() {
        let params = PhysicalParams::aspelmeyer();
        let chi = coupling_constant(&params).unwrap();
        let mut long = params;
        long.cavity_length *= 2.0;
        let chi_long = coupling_constant(&long).unwrap();
        assert_eq!(chi_long, chi / 2.0);
    }

    #[test]
    fn coupling_rejects_nonpositive_inputs() {
        let mut params = PhysicalParams::aspelmeyer();
        params.mirror_mass = -1.0;
        assert!(coupling_constant(&params).is_err());
        let mut params = PhysicalParams::aspelmeyer();
        params.cavity_length = 0.0;
        assert!(coupling_constant(&params).is_err());
        let mut params = PhysicalParams::aspelmeyer();
        params.mech_freq = f64::NAN;
        assert!(coupling_constant(&params).is_err());
    }

    #[test]
    fn pump_amplitude_reference_value() {
        let params = PhysicalParams::aspelmeyer();
        let eps = pump_amplitude(6.9e-3, params.cavity_decay, params.laser_freq()).unwrap();
        assert_relative_eq!(eps, 3.1599568719048305e11, max_relative = 1e-12);
    }

    #[test]
    fn pump_amplitude_zero_and_scaling() {
        let params = PhysicalParams::aspelmeyer();
        let kappa = params.cavity_decay;
        let wl = params.laser_freq();
        assert_eq!(pump_amplitude(0.0, kappa, wl).unwrap(), 0.0);
        let e1 = pump_amplitude(1e-3, kappa, wl).unwrap();
        let e4 = pump_amplitude(4e-3, kappa, wl).unwrap();
        assert_eq!(e4, 2.0 * e1);
        assert!(pump_amplitude(-1e-3, kappa, wl).is_err());
    }

    #[test]
    fn steady_state_reference_values() {
        let op = steady_state(&PhysicalParams::aspelmeyer()).unwrap();
        assert_relative_eq!(op.photon_number(), 2.6821015851411392e9, max_relative = 1e-12);
        assert_relative_eq!(op.cavity_amp.re, 11466.012102001013, max_relative = 1e-12);
        assert_relative_eq!(op.cavity_amp.im, -50503.783537650973, max_relative = 1e-12);
        assert_relative_eq!(op.mirror_disp, 15782.233464337901, max_relative = 1e-12);
        assert_eq!(op.mirror_mom, 0.0);
    }

    #[test]
    fn steady_state_dark_cavity() {
        let op = steady_state(&PhysicalParams::aspelmeyer().with_pump_power(0.0)).unwrap();
        assert_eq!(op.cavity_amp, Complex64::new(0.0, 0.0));
        assert_eq!(op.mirror_disp, 0.0);
        assert_eq!(op.mirror_mom, 0.0);
    }

    #[test]
    fn steady_state_is_deterministic() {
        let params = PhysicalParams::aspelmeyer();
        let a = steady_state(&params).unwrap();
        let b = steady_state(&params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn amplitude_balance_invariant() {
        // |c0|^2 (kappa^2 + Delta^2) = eps_l^2
        for power in [1e-6, 1e-3, 6.9e-3, 40e-3] {
            let op = steady_state(&PhysicalParams::aspelmeyer().with_pump_power(power)).unwrap();
            let lhs = op.photon_number()
                * (op.cavity_decay * op.cavity_decay + op.eff_detuning * op.eff_detuning);
            assert_relative_eq!(lhs, op.pump_amp * op.pump_amp, max_relative = 1e-12);
        }
    }

    #[test]
    fn detuning_offset_reference_values() {
        let op = steady_state(&PhysicalParams::aspelmeyer()).unwrap();
        assert_relative_eq!(detuning_offset(&op), 6.2264641890203991e6, max_relative = 1e-12);
        let op1 = steady_state(&PhysicalParams::aspelmeyer().with_pump_power(1e-3)).unwrap();
        assert_relative_eq!(detuning_offset(&op1), 5.9902181820036091e6, max_relative = 1e-12);
    }

    #[test]
    fn detuning_offset_dark_cavity_is_bare_detuning() {
        let op = steady_state(&PhysicalParams::aspelmeyer().with_pump_power(0.0)).unwrap();
        assert_eq!(detuning_offset(&op), op.eff_detuning);
    }

    #[test]
    fn detuning_shift_scales_as_coupling_squared() {
        let op = steady_state(&PhysicalParams::aspelmeyer()).unwrap();
        let shift = detuning_offset(&op) - op.eff_detuning;
        // Doubling chi at fixed c0 quadruples the shift term omega_m chi Q0.
        let mut doubled = op;
        doubled.coupling *= 2.0;
        doubled.mirror_disp = 2.0 * doubled.coupling * doubled.cavity_amp.norm_sqr();
        let shift2 = detuning_offset(&doubled) - doubled.eff_detuning;
        assert_relative_eq!(shift2, 4.0 * shift, max_relative = 1e-12);
    }

    #[test]
    fn preset_quality_factor_is_physical() {
        let params = PhysicalParams::aspelmeyer();
        let q = params.quality_factor();
        assert!(q.is_finite() && q > 1.0);
        assert_relative_eq!(q, 947e3 / 141.0, max_relative = 1e-12);
    }
}
