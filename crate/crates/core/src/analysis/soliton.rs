use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filament::{discrete_geometry, Curve3D};

use super::fit::fit_line;

/// Closest approach of the peak to either end of the cell, in units of `1/η`.
const EDGE_WIDTHS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonMeasurement {
    /// Drift of the curvature peak along the filament.
    pub v: f64,
    /// RMS position-fit residual divided by the duration.
    pub residual: f64,
    /// `κ_max / 2` on the first snapshot.
    pub eta: f64,
    pub flagged: bool,
}

/// Arclength position and height of the curvature maximum, refined by a
/// parabola through the largest sample and its neighbours.
pub fn peak_position(curve: &Curve3D) -> (f64, f64) {
    let g = discrete_geometry(curve);
    let n = curve.len();
    let (j, _) = g
        .curvature
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |m, (j, &k)| if k > m.1 { (j, k) } else { m },
        );
    let (km, k0, kp) = (
        g.curvature[(j + n - 1) % n],
        g.curvature[j],
        g.curvature[(j + 1) % n],
    );
    let h = g.total_length / n as f64;
    let denom = km - 2.0 * k0 + kp;
    let offset = if denom < 0.0 {
        0.5 * (km - kp) / denom
    } else {
        0.0
    };
    let peak = k0 - 0.25 * (km - kp) * offset;
    (g.arclength[j] + offset * h, peak)
}

/// Fits the arclength drift of the curvature peak over a soliton history.
pub fn measure_soliton_speed(history: &[Curve3D]) -> Result<SolitonMeasurement> {
    if history.len() < 3 {
        return Err(Error::Measurement(format!(
            "need at least 3 snapshots, got {}",
            history.len()
        )));
    }
    let eta = 0.5 * peak_position(&history[0]).1;
    if !(eta > 0.0) {
        return Err(Error::Measurement(
            "no curvature peak in the first snapshot".into(),
        ));
    }
    let margin = EDGE_WIDTHS / eta;
    let mut times = Vec::with_capacity(history.len());
    let mut positions = Vec::with_capacity(history.len());
    for c in history {
        let (s, _) = peak_position(c);
        let total = c.total_length();
        if s < margin || s > total - margin {
            return Err(Error::Measurement(format!(
                "soliton peak at s = {s:.3} is within 5/η of the cell edge at t = {:.4}",
                c.t()
            )));
        }
        times.push(c.t());
        positions.push(s);
    }
    let fit = fit_line(&times, &positions)?;
    let residual = fit.residual_rms / (times[times.len() - 1] - times[0]);
    Ok(SolitonMeasurement {
        v: fit.slope,
        residual,
        eta,
        flagged: residual > 0.02 * fit.slope.abs() + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filament::{hasimoto_closed_form, make_hasimoto_soliton_curve, Topology};
    use crate::Vec3;

    #[test]
    fn parabolic_peak_recovers_off_node_maximum() {
        let (n, l) = (768, 24.0);
        let h = l / n as f64;
        let offset = 0.37 * h;
        let pts: Vec<Vec3> = (0..=n)
            .map(|j| hasimoto_closed_form(1.0, 0.5, (j as f64 - (n / 2) as f64) * h - offset))
            .collect();
        let chord = pts[n] - pts[0];
        let rot = nalgebra::Rotation3::rotation_between(&chord, &Vec3::x()).unwrap();
        let nodes = pts[..n].iter().map(|q| rot * (q - pts[0])).collect();
        let c = Curve3D::new(
            nodes,
            Topology::Periodic {
                shift: chord.norm(),
            },
            0.0,
        )
        .unwrap();
        let (s, k) = peak_position(&c);
        let expected = (n / 2) as f64 * h + offset;
        assert!((s - expected).abs() < 0.05 * h, "{s} vs {expected}");
        assert!((k - 2.0).abs() < 2e-3);
        let (s_node, _) = {
            let g = discrete_geometry(&c);
            (g.arclength[n / 2], ())
        };
        assert!((s_node - expected).abs() > 0.3 * h);
    }

    #[test]
    fn static_history_does_not_move() {
        let c = make_hasimoto_soliton_curve(1.0, 0.5, 24.0, 768).unwrap();
        let h: Vec<_> = (0..3)
            .map(|i| Curve3D::new(c.nodes().to_vec(), c.topology(), i as f64).unwrap())
            .collect();
        let m = measure_soliton_speed(&h).unwrap();
        assert!(m.v.abs() < 1e-12);
        assert!((m.eta - 1.0).abs() < 1e-3);
    }
}
