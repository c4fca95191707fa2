//! Flat key-value parameter files.
//!
//! The file format is one `key = value` pair per line, `#` starts a comment,
//! blank lines are ignored. Every key carries an explicit unit suffix and
//! overrides the corresponding field of a base parameter set (the
//! `aspelmeyer` preset unless stated otherwise). Frequencies are linear
//! (Hz, i.e. ω/2π) and converted to angular frequencies on input.
//!
//! | key               | unit | maps to                          |
//! |-------------------|------|----------------------------------|
//! | `lambda_nm`       | nm   | laser wavelength                 |
//! | `cavity_length_mm`| mm   | cavity length                    |
//! | `mirror_mass_ng`  | ng   | mirror mass                      |
//! | `kappa_hz`        | Hz   | cavity decay κ/2π                |
//! | `omega_m_hz`      | Hz   | mechanical frequency ω_m/2π      |
//! | `gamma_m_hz`      | Hz   | mechanical damping γ_m/2π        |
//! | `delta_hz`        | Hz   | effective detuning Δ/2π          |
//! | `pump_power_mw`   | mW   | pump power                       |
//! | `stokes_power_mw` | mW   | Stokes seed power                |
//! | `temperature_k`   | K    | bath temperature                 |
//!
//! ```
//! use fwmix::config;
//! use fwmix::model::PhysicalParams;
//!
//! let text = "\n# half the usual linewidth\nkappa_hz = 107.5e3\npump_power_mw = 1\n";
//! let params = config::apply_str(PhysicalParams::aspelmeyer(), text).unwrap();
//! assert_eq!(params.pump_power, 1e-3);
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::PhysicalParams;

/// Known preset names.
pub const PRESETS: &[&str] = &["aspelmeyer"];

/// Look up a named preset.
pub fn preset(name: &str) -> Result<PhysicalParams> {
    match name {
        "aspelmeyer" => Ok(PhysicalParams::aspelmeyer()),
        other => Err(Error::InvalidArgument(format!(
            "unknown preset `{other}`; available: {}",
            PRESETS.join(", ")
        ))),
    }
}

/// Apply the key-value overrides in `text` to `base` and validate the result.
pub fn apply_str(base: PhysicalParams, text: &str) -> Result<PhysicalParams> {
    let mut params = base;
    let two_pi = std::f64::consts::TAU;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!(
                "config line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!(
                "config line {}: `{}` is not a number",
                lineno + 1,
                value.trim()
            ))
        })?;
        match key {
            "lambda_nm" => params.laser_wavelength = value * 1e-9,
            "cavity_length_mm" => params.cavity_length = value * 1e-3,
            "mirror_mass_ng" => params.mirror_mass = value * 1e-12,
            "kappa_hz" => params.cavity_decay = two_pi * value,
            "omega_m_hz" => params.mech_freq = two_pi * value,
            "gamma_m_hz" => params.mech_damping = two_pi * value,
            "delta_hz" => params.eff_detuning = two_pi * value,
            "pump_power_mw" => params.pump_power = value * 1e-3,
            "stokes_power_mw" => params.stokes_power = value * 1e-3,
            "temperature_k" => params.temperature = value,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "config line {}: unknown key `{other}` (see the documented key table)",
                    lineno + 1
                )))
            }
        }
    }
    params.validate()?;
    Ok(params)
}

/// Load a config file and apply it onto `base`.
pub fn apply_file(base: PhysicalParams, path: impl AsRef<Path>) -> Result<PhysicalParams> {
    let text = std::fs::read_to_string(path)?;
    apply_str(base, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parses_documented_keys() {
        let text = "
            # comment line
            lambda_nm = 1064
            cavity_length_mm = 25
            mirror_mass_ng = 145
            kappa_hz = 215e3   # trailing comment
            omega_m_hz = 947e3
            gamma_m_hz = 141
            delta_hz = 947e3
            pump_power_mw = 6.9
            stokes_power_mw = 0
            temperature_k = 0
        ";
        let params = apply_str(PhysicalParams::aspelmeyer(), text).unwrap();
        let preset = PhysicalParams::aspelmeyer();
        assert_relative_eq!(params.cavity_decay, preset.cavity_decay, max_relative = 1e-15);
        assert_relative_eq!(params.pump_power, 6.9e-3, max_relative = 1e-15);
    }

    #[test]
    fn rejects_unknown_key() {
        let err = apply_str(PhysicalParams::aspelmeyer(), "kappa_khz = 215").unwrap_err();
        assert!(err.to_string().contains("unknown key"));
    }

    #[test]
    fn rejects_bad_syntax_and_bad_values() {
        assert!(apply_str(PhysicalParams::aspelmeyer(), "kappa_hz 215e3").is_err());
        assert!(apply_str(PhysicalParams::aspelmeyer(), "kappa_hz = fast").is_err());
        // validation catches domain errors after parsing
        assert!(apply_str(PhysicalParams::aspelmeyer(), "mirror_mass_ng = -5").is_err());
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(preset("garching").is_err());
        assert!(preset("aspelmeyer").is_ok());
    }
}
