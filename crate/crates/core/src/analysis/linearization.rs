use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Result};
use crate::exec::Exec;
use crate::fields::{make_grid, trig_interpolate, EquationKind, SpectralStepper};
use crate::filament::{make_helix_curve, LiaStepper};
use crate::model::{helix_field_snapshot, HelixSpec};

/// Largest `a/L` accepted.
const MAX_A_OVER_L: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizationSetup {
    pub length: f64,
    /// Nodes of the curve and points of the field grid.
    pub n: usize,
    pub tau: f64,
    pub nu: f64,
    /// LIA time step; the field is advanced exactly between comparisons.
    pub dt: f64,
    pub duration: f64,
    /// Comparison times after `t = 0`, evenly spaced.
    pub comparisons: usize,
}

impl LinearizationSetup {
    /// Validates the setup for amplitude `a_over_l` and returns the number
    /// of LIA steps between comparisons.
    pub fn check(&self, a_over_l: f64) -> Result<u64> {
        if !(0.0..=MAX_A_OVER_L).contains(&a_over_l) {
            return Err(invalid(
                "a_over_l",
                format!("must lie in [0, {MAX_A_OVER_L}], got {a_over_l}"),
            ));
        }
        require_positive("duration", self.duration)?;
        require_positive("dt", self.dt)?;
        if self.comparisons == 0 {
            return Err(invalid("comparisons", "need at least one comparison time"));
        }
        let total = self.duration / self.dt;
        let steps = total.round() as u64;
        let per = steps / self.comparisons as u64;
        if (total - steps as f64).abs() > 1e-9 * total
            || per == 0
            || per * self.comparisons as u64 != steps
        {
            return Err(invalid(
                "dt",
                "duration must be a whole number of steps divisible by the comparison count",
            ));
        }
        let spec = HelixSpec::new(a_over_l * self.length, self.tau, 0.0)?;
        let curve = make_helix_curve(&spec, self.length, self.n)?;
        make_grid(self.n, self.length)?;
        LiaStepper::new(self.nu, self.dt)?.check(&curve)?;
        Ok(per)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizationReport {
    pub a_over_l: f64,
    pub amplitude: f64,
    /// `max |φ_LIA − φ_field| / a` over nodes and comparison times.
    pub deviation: f64,
    /// Relative change of the curve length over the run.
    pub length_drift: f64,
}

/// Evolves the same helix with the full LIA integrator and with the
/// spectral Schrödinger propagator, comparing `y + iz` at the curve nodes.
pub fn linearization_consistency(
    a_over_l: f64,
    setup: &LinearizationSetup,
    exec: Exec,
) -> Result<LinearizationReport> {
    let per = setup.check(a_over_l)?;
    let amplitude = a_over_l * setup.length;
    let spec = HelixSpec::new(amplitude, setup.tau, 0.0)?;
    let mut curve = make_helix_curve(&spec, setup.length, setup.n)?;
    if amplitude == 0.0 {
        return Ok(LinearizationReport {
            a_over_l,
            amplitude,
            deviation: 0.0,
            length_drift: 0.0,
        });
    }
    let grid = make_grid(setup.n, setup.length)?;
    let mut field = helix_field_snapshot(&spec, 0.0, &grid, 0.0)?;
    let kind = EquationKind::Schrodinger { nu: setup.nu };
    let field_step = SpectralStepper::new(kind, grid, setup.dt * per as f64)?;
    let lia = LiaStepper::new(setup.nu, setup.dt)?.with_exec(exec);
    let length0 = curve.total_length();

    let mut deviation: f64 = 0.0;
    for _ in 0..setup.comparisons {
        for _ in 0..per {
            curve = lia.step(&curve)?;
        }
        field_step.step_field(&mut field)?;
        let xs: Vec<f64> = curve.nodes().iter().map(|r| r.x).collect();
        let reference = trig_interpolate(&field, &xs);
        for (r, f) in curve.nodes().iter().zip(reference) {
            deviation = deviation.max((Complex64::new(r.y, r.z) - f).norm() / amplitude);
        }
    }
    Ok(LinearizationReport {
        a_over_l,
        amplitude,
        deviation,
        length_drift: (curve.total_length() - length0).abs() / length0,
    })
}
