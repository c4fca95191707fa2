//! Radiation-pressure four-wave mixing in cavity optomechanics.
//!
//! A pump and a weak Stokes seed drive a cavity with a movable end mirror.
//! Radiation pressure couples the field to the mirror's motion, and the
//! cavity output picks up a generated sideband at the mirrored (anti-Stokes)
//! frequency — a four-wave-mixing process whose strength, spectral shape
//! and photon statistics all encode the optomechanical coupling. This crate
//! computes the full pipeline at desk scale:
//!
//! * [`model`] — laboratory parameters, derived coupling constants and the
//!   steady-state operating point;
//! * [`response`] — stimulated Stokes/anti-Stokes amplitudes, power gains
//!   and homodyne quadratures per unit Stokes input;
//! * [`modes`] — the characteristic quartic, its complex normal-mode roots,
//!   branch tracking over pump-power sweeps and the splitting onset;
//! * [`noise`] — spontaneous-emission observables: transfer functions,
//!   noise spectra, two-time correlators and the coincidence rate g²(τ);
//! * [`quad`] — window-refined quadrature and Filon-type oscillatory
//!   transforms that make the correlators cheap;
//! * [`config`] — flat key-value parameter files and named presets.
//!
//! The companion mdbook under `book/` walks through the physics chapter by
//! chapter with runnable versions of the examples embedded in these docs.
//!
//! ```
//! use fwmix::model::{steady_state, PhysicalParams};
//! use fwmix::response::{default_offset_grid, sweep_response};
//!
//! // Stokes gain across the normal-mode doublet at 20 mW pump power
//! let params = PhysicalParams::aspelmeyer().with_pump_power(20e-3);
//! let op = steady_state(&params).unwrap();
//! let series = sweep_response(&op, &default_offset_grid(&op)).unwrap();
//! let (gain, at) = series.max_gain_s();
//! assert!(gain > 1.1 && gain < 1.2);
//! assert!(at > 0.5 && at < 1.0);
//! ```

#![deny(missing_docs)]

pub mod config;
pub mod constants;
pub mod error;
pub mod model;
pub mod modes;
pub mod noise;
pub mod quad;
pub mod response;

pub use error::{Error, Result};

// Every Rust snippet in the book compiles and runs as a doc-test, so the
// guide cannot drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/getting-started.md")]
    mod getting_started {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/response.md")]
    mod response {}
    #[doc = include_str!("../../../book/src/modes.md")]
    mod modes {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/numerics.md")]
    mod numerics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
}
