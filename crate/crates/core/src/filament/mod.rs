//! Discrete 3D vortex filament and its localized-induction dynamics
//! `∂r/∂t = ν ∂r/∂l × ∂²r/∂l²`.

mod curve;
mod geometry;
mod lia;
mod resample;
mod soliton;

pub use curve::{make_circle_curve, make_helix_curve, make_straight_curve, Curve3D, Topology};
pub use geometry::{discrete_geometry, CurveGeometry};
pub use lia::{lia_velocity, lia_velocity_with, step_lia_rk4, LiaStepper, MAX_DIFFUSION_NUMBER};
pub use resample::resample_arclength;
pub use soliton::{hasimoto_closed_form, make_hasimoto_soliton_curve};
