//! Physical constants, CODATA 2018 values.
//!
//! Every derived number in this crate traces back to this table, so the
//! values are pinned here once instead of being scattered through the code.

/// Reduced Planck constant ħ (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum c (m/s). Exact by definition.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant k_B (J/K). Exact by definition.
pub const BOLTZMANN: f64 = 1.380_649e-23;
