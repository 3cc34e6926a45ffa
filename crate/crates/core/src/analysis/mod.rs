//! Measurements over recorded runs: mode frequencies, dispersion scans,
//! rotation rates, packet and soliton drift, and linearization checks.
//! Every fit reports its residual.

mod fit;
mod frequency;
mod linearization;
mod packet;
mod report;
mod rotation;
mod soliton;

pub use fit::{
    fit_line, fit_power_law, fit_proportional, unwrap_phases, LineFit, PowerLawFit, ProportionalFit,
};
pub use frequency::{
    dispersion_scan, measure_mode_frequency, DispersionSample, FrequencyMeasurement, ModeRun,
};
pub use linearization::{linearization_consistency, LinearizationReport, LinearizationSetup};
pub use packet::{measure_group_velocity, GroupVelocityMeasurement, PacketSetup};
pub use report::{MeasurementReport, RunMetadata};
pub use rotation::{
    helix_shape_deviation, measure_rotation_rate, measure_time_order, station_value,
    RotationMeasurement, TimeOrderMeasurement,
};
pub use soliton::{measure_soliton_speed, peak_position, SolitonMeasurement};
