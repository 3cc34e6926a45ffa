use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::filament::{Curve3D, LiaStepper, Topology};
use crate::model::HelixSpec;

use super::fit::{fit_line, unwrap_phases};

/// Amplitude spread above which a history is not treated as a rigid rotation.
const AMPLITUDE_FLAG: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationMeasurement {
    /// Positive for the `exp(−iωt)` sense, i.e. clockwise seen from `+x`.
    pub omega: f64,
    /// RMS phase-fit residual divided by the history duration.
    pub residual: f64,
    /// `(max − min) / mean` of the transverse amplitude at the station.
    pub amplitude_spread: f64,
    pub flagged: bool,
}

/// `y + iz` of an x-periodic curve at axial position `x`, by cubic
/// Lagrange interpolation over the four surrounding nodes.
pub fn station_value(curve: &Curve3D, x: f64) -> Result<Complex64> {
    let Topology::Periodic { shift } = curve.topology() else {
        return Err(invalid("curve", "station values need an x-periodic curve"));
    };
    let n = curve.len() as isize;
    let x0 = curve.nodes()[0].x;
    let xr = x0 + (x - x0).rem_euclid(shift);
    let j = (0..n)
        .find(|&j| curve.node(j).x <= xr && xr < curve.node(j + 1).x)
        .ok_or_else(|| {
            Error::Measurement(format!("station x = {x} not bracketed by monotone nodes"))
        })?;
    let pts: Vec<_> = (j - 1..=j + 2).map(|i| curve.node(i)).collect();
    if pts.windows(2).any(|w| w[1].x <= w[0].x) {
        return Err(Error::Measurement(
            "nodes are not monotone in x near the station".into(),
        ));
    }
    let mut value = Complex64::new(0.0, 0.0);
    for (a, pa) in pts.iter().enumerate() {
        let w: f64 = pts
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .map(|(_, pb)| (xr - pb.x) / (pa.x - pb.x))
            .product();
        value += Complex64::new(pa.y, pa.z) * w;
    }
    Ok(value)
}

/// Fits the unwrapped angle `atan2(z, y)` at a fixed station against time.
pub fn measure_rotation_rate(history: &[Curve3D], station: f64) -> Result<RotationMeasurement> {
    if history.len() < 3 {
        return Err(Error::Measurement(format!(
            "need at least 3 snapshots, got {}",
            history.len()
        )));
    }
    let values = history
        .iter()
        .map(|c| station_value(c, station))
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = history.iter().map(Curve3D::t).collect();
    let amps: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let mean = amps.iter().sum::<f64>() / amps.len() as f64;
    if mean == 0.0 {
        return Ok(RotationMeasurement {
            omega: 0.0,
            residual: 0.0,
            amplitude_spread: 0.0,
            flagged: false,
        });
    }
    let (lo, hi) = amps.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &a| {
        (lo.min(a), hi.max(a))
    });
    let spread = (hi - lo) / mean;
    let phases: Vec<f64> = values.iter().map(|v| v.arg()).collect();
    let fit = fit_line(&times, &unwrap_phases(&phases))?;
    Ok(RotationMeasurement {
        omega: -fit.slope,
        residual: fit.residual_rms / (times[times.len() - 1] - times[0]),
        amplitude_spread: spread,
        flagged: spread > AMPLITUDE_FLAG,
    })
}

/// `max_j |y_j + i z_j − a exp[i(τx_j + phase0)]|` at the nodes' current `x`.
pub fn helix_shape_deviation(curve: &Curve3D, spec: &HelixSpec) -> f64 {
    curve
        .nodes()
        .iter()
        .map(|r| {
            let ideal = Complex64::from_polar(spec.amplitude, spec.tau * r.x + spec.phase0);
            (Complex64::new(r.y, r.z) - ideal).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeOrderMeasurement {
    pub dts: Vec<f64>,
    /// Max node distance to the reference run at `t_end`.
    pub errors: Vec<f64>,
    /// `log2` of successive error ratios.
    pub orders: Vec<f64>,
    /// Mean of `orders`.
    pub order: f64,
}

/// Runs the LIA integrator to `t_end` with `dt`, `dt/2`, `dt/4` and compares
/// each with a `dt/32` reference run.
pub fn measure_time_order(
    curve: &Curve3D,
    nu: f64,
    dt: f64,
    t_end: f64,
) -> Result<TimeOrderMeasurement> {
    let steps_for = |h: f64| -> Result<u64> {
        let s = t_end / h;
        if (s - s.round()).abs() > 1e-9 * s || s < 1.0 {
            return Err(invalid(
                "dt",
                format!("t_end / dt = {s} is not a whole number of steps"),
            ));
        }
        Ok(s.round() as u64)
    };
    let run =
        |h: f64| -> Result<Curve3D> { LiaStepper::new(nu, h)?.run(curve, steps_for(h)?, |_| {}) };
    let reference = run(dt / 32.0)?;
    let dts = vec![dt, dt / 2.0, dt / 4.0];
    let errors = dts
        .iter()
        .map(|&h| {
            let c = run(h)?;
            Ok(c.nodes()
                .iter()
                .zip(reference.nodes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let order = orders.iter().sum::<f64>() / orders.len() as f64;
    Ok(TimeOrderMeasurement {
        dts,
        errors,
        orders,
        order,
    })
}
