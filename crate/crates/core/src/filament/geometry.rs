use crate::Vec3;

use super::Curve3D;

/// Per-node discrete Frenet data.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGeometry {
    pub tangent: Vec<Vec3>,
    pub curvature: Vec<f64>,
    /// Signed; zero where the binormal is undefined.
    pub torsion: Vec<f64>,
    /// Cumulative chord length from node 0.
    pub arclength: Vec<f64>,
    pub total_length: f64,
}

/// Three-point first and second derivatives with respect to arclength at
/// node `j`, using the neighbouring chord lengths. Reduces to the centered
/// differences on equal spacing.
#[inline]
pub(crate) fn local_derivatives(prev: Vec3, here: Vec3, next: Vec3) -> (Vec3, Vec3) {
    let back = here - prev;
    let fwd = next - here;
    let hb = back.norm();
    let hf = fwd.norm();
    let d1 = (fwd * (hb * hb) + back * (hf * hf)) / (hf * hb * (hf + hb));
    let d2 = (fwd / hf - back / hb) * (2.0 / (hf + hb));
    (d1, d2)
}

/// Binormal below this `|t × r''| · h` is treated as undefined (straight run).
const STRAIGHT_TOL: f64 = 1e-9;

/// Tangent, curvature `|r''|`, torsion and arclength at every node.
///
/// Torsion is the signed rotation angle of the discrete binormal about the
/// tangent between nodes `j−1` and `j+1`, divided by the arclength between them.
pub fn discrete_geometry(curve: &Curve3D) -> CurveGeometry {
    let n = curve.len();
    let seg = curve.segment_lengths();
    let total_length: f64 = seg.iter().sum();
    let mut arclength = Vec::with_capacity(n);
    let mut acc = 0.0;
    for s in &seg {
        arclength.push(acc);
        acc += s;
    }

    let mut tangent = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    let mut binormal: Vec<Option<Vec3>> = Vec::with_capacity(n);
    for j in 0..n {
        let i = j as isize;
        let (d1, d2) = local_derivatives(curve.node(i - 1), curve.node(i), curve.node(i + 1));
        let t = d1.normalize();
        let b = t.cross(&d2);
        let h = 0.5 * (seg[j] + seg[(j + n - 1) % n]);
        binormal.push((b.norm() * h > STRAIGHT_TOL).then(|| b.normalize()));
        tangent.push(t);
        curvature.push(d2.norm());
    }

    let torsion = (0..n)
        .map(|j| {
            let (prev, next) = ((j + n - 1) % n, (j + 1) % n);
            match (binormal[prev], binormal[next]) {
                (Some(b0), Some(b1)) => {
                    let angle = b0.cross(&b1).dot(&tangent[j]).atan2(b0.dot(&b1));
                    angle / (seg[prev] + seg[j])
                }
                _ => 0.0,
            }
        })
        .collect();

    CurveGeometry {
        tangent,
        curvature,
        torsion,
        arclength,
        total_length,
    }
}
