//! Numerical laboratory for the vortex-filament picture of the Klein-Gordon
//! equation.
//!
//! A filament directed along `x` carries a small transverse displacement
//! `φ(x, t) = y + i z`. The crate evolves that displacement under the three
//! linear equations (elastic wave, self-induction Schrödinger form, massive
//! Klein-Gordon), integrates the full nonlinear localized-induction dynamics
//! of the 3D curve, evaluates Biot-Savart induced velocities, and measures
//! the frequencies and speeds that tie the pictures together.
//!
//! Modules:
//! - [`model`]: physical constants, derived parameters, closed-form helices.
//! - [`fields`]: periodic 1D complex fields with spectral and finite-difference steppers.
//! - [`filament`]: discrete 3D curves, geometry, LIA time stepping, soliton construction.
//! - [`induction`]: Biot-Savart segment quadrature and the small-amplitude estimate.
//! - [`analysis`]: measurement harness (dispersion, rotation, group velocity, soliton speed).
//!
//! Data-parallel inner loops go through [`exec::Exec`]; with the `parallel`
//! feature disabled every loop runs sequentially.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod clock;
pub mod error;
pub mod exec;
pub mod fields;
pub mod filament;
pub mod induction;
mod linalg;
pub mod model;
mod spline;

pub use clock::Clock;
pub use error::{Error, Result};
pub use exec::Exec;

pub use num_complex::Complex64;

/// 3D vector type used for curve nodes and velocities.
pub type Vec3 = nalgebra::Vector3<f64>;
