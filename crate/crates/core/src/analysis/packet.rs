use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};
use crate::fields::{ComplexField, EquationKind, Grid1D, SpectralStepper};

use super::fit::fit_line;

/// Minimum envelope width in grid cells.
const MIN_CELLS: f64 = 16.0;
/// Largest admissible relative growth of the envelope width.
const MAX_SPREADING: f64 = 0.5;
/// Mass fraction tolerated within `L/16` of the box edges.
const EDGE_MASS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSetup {
    pub grid: Grid1D,
    pub nu: f64,
    pub k0: f64,
    /// Envelope `exp(−(x − x₀)²/(2σ²))`.
    pub sigma: f64,
    pub duration: f64,
    /// Centroid samples after the initial one.
    pub samples: usize,
}

impl PacketSetup {
    /// Relative growth of the envelope width over the run.
    pub fn spreading(&self) -> f64 {
        (1.0 + (2.0 * self.nu * self.duration / (self.sigma * self.sigma)).powi(2)).sqrt() - 1.0
    }

    pub fn check(&self) -> Result<()> {
        let PacketSetup {
            grid,
            nu,
            sigma,
            duration,
            samples,
            ..
        } = *self;
        require_positive("nu", nu)?;
        require_positive("sigma", sigma)?;
        require_positive("duration", duration)?;
        if sigma < MIN_CELLS * grid.dx() {
            return Err(invalid(
                "sigma",
                format!(
                    "envelope spans {:.1} cells; need at least {MIN_CELLS}",
                    sigma / grid.dx()
                ),
            ));
        }
        let spreading = self.spreading();
        if spreading > MAX_SPREADING {
            return Err(invalid(
                "duration",
                format!(
                    "envelope would widen by {:.0}%; shorten the run",
                    100.0 * spreading
                ),
            ));
        }
        if samples < 2 {
            return Err(invalid("samples", "need at least 2 centroid samples"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupVelocityMeasurement {
    pub v: f64,
    /// RMS centroid-fit residual divided by the duration.
    pub residual: f64,
    /// Relative growth of the envelope width at the end of the run.
    pub spreading: f64,
    pub flagged: bool,
    pub times: Vec<f64>,
    pub centroids: Vec<f64>,
}

/// Drift speed of the `|φ|²` centroid of a Gaussian Schrödinger packet
/// centred on `k0`, evolved spectrally.
pub fn measure_group_velocity(setup: &PacketSetup) -> Result<GroupVelocityMeasurement> {
    let PacketSetup {
        grid,
        nu,
        k0,
        sigma,
        duration,
        samples,
    } = *setup;
    setup.check()?;
    let spreading = setup.spreading();
    let length = grid.length();
    let x0 = if k0 > 0.0 {
        0.25 * length
    } else if k0 < 0.0 {
        0.75 * length
    } else {
        0.5 * length
    };
    let mut field = ComplexField::from_fn(grid, 0.0, |x| {
        let d = (x - x0) / sigma;
        Complex64::from_polar((-0.5 * d * d).exp(), k0 * x)
    })?;
    let stepper = SpectralStepper::new(
        EquationKind::Schrodinger { nu },
        grid,
        duration / samples as f64,
    )?;

    let mut times = Vec::with_capacity(samples + 1);
    let mut centroids = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        if i > 0 {
            stepper.step_field(&mut field)?;
        }
        let (mut mass, mut moment, mut edge) = (0.0, 0.0, 0.0);
        for (x, v) in grid.nodes().zip(field.values()) {
            let w = v.norm_sqr();
            mass += w;
            moment += w * x;
            if x < length / 16.0 || x >= 15.0 * length / 16.0 {
                edge += w;
            }
        }
        if edge > EDGE_MASS_TOL * mass {
            return Err(Error::Measurement(format!(
                "packet reached the periodic boundary at t = {:.4}",
                field.t()
            )));
        }
        times.push(field.t());
        centroids.push(moment / mass);
    }
    let fit = fit_line(&times, &centroids)?;
    let residual = fit.residual_rms / duration;
    Ok(GroupVelocityMeasurement {
        v: fit.slope,
        residual,
        spreading,
        flagged: residual > 1e-3 * fit.slope.abs() + 1e-12,
        times,
        centroids,
    })
}
