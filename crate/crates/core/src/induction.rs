//! Biot–Savart velocity induced by a discretized filament, the straight-line
//! closed forms used to validate it, and the small-amplitude transverse estimate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, require_positive, Error, Result};
use crate::exec::Exec;
use crate::filament::{Curve3D, Topology};
use crate::Vec3;

/// Relative bound on the neglected image-copy tail.
pub const IMAGE_TAIL_TOL: f64 = 1e-8;
/// Hard ceiling on image copies per side.
const MAX_IMAGES: usize = 10_000_000;

/// Evaluation point and its least distance `h` to the unperturbed filament axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub position: Vec3,
    pub h: f64,
}

impl FieldPoint {
    /// `h` is the distance to the `x` axis.
    pub fn new(position: Vec3) -> Self {
        FieldPoint {
            position,
            h: position.y.hypot(position.z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedVelocity {
    pub u: Vec3,
    /// Image copies summed on each side of the central cell.
    pub images: usize,
}

impl InducedVelocity {
    /// `u_y + i u_z`
    pub fn transverse(&self) -> Complex64 {
        Complex64::new(self.u.y, self.u.z)
    }
}

/// Midpoint-rule contribution `Δr × s / |s|³` of an open polyline (unscaled).
fn polyline_kernel(nodes: impl Iterator<Item = (Vec3, Vec3)>, point: Vec3) -> Vec3 {
    let mut acc = Vec3::zeros();
    for (a, b) in nodes {
        let s = point - (a + b) * 0.5;
        let r = s.norm();
        acc += (b - a).cross(&s) / (r * r * r);
    }
    acc
}

/// Midpoint-rule Biot–Savart sum over the open polyline `nodes`.
pub fn polyline_velocity(nodes: &[Vec3], point: Vec3, gamma: f64) -> Vec3 {
    let pairs = nodes.windows(2).map(|w| (w[0], w[1]));
    polyline_kernel(pairs, point) * (gamma / (4.0 * PI))
}

/// Exact velocity of the straight segment `a → b`:
/// magnitude `Γ/(4πh)(cos θ₁ − cos θ₂)`, direction `(b − a) × (p − foot)`.
pub fn straight_segment_velocity(a: Vec3, b: Vec3, point: Vec3, gamma: f64) -> Vec3 {
    let axis = (b - a).normalize();
    let rel = point - a;
    let along = rel.dot(&axis);
    let perp = rel - axis * along;
    let h = perp.norm();
    let len = (b - a).norm();
    let cos1 = along / along.hypot(h);
    let cos2 = (along - len) / (along - len).hypot(h);
    axis.cross(&(perp / h)) * (gamma / (4.0 * PI * h) * (cos1 - cos2))
}

/// `Γ/(2πh)`
pub fn infinite_line_speed(gamma: f64, h: f64) -> f64 {
    gamma / (2.0 * PI * h)
}

/// One node spacing.
pub fn default_cutoff(curve: &Curve3D) -> f64 {
    curve.total_length() / curve.len() as f64
}

fn check_clearance(curve: &Curve3D, point: Vec3, cutoff: f64) -> Result<()> {
    require_positive("cutoff", cutoff)?;
    if let Topology::Periodic { shift } = curve.topology() {
        for r in curve.nodes() {
            let mut d = point - r;
            d.x -= shift * (d.x / shift).round();
            if d.norm() < cutoff {
                return Err(Error::PointOnFilament {
                    distance: d.norm(),
                    cutoff,
                });
            }
        }
    } else if let Some(d) = curve
        .nodes()
        .iter()
        .map(|r| (point - r).norm())
        .find(|&d| d < cutoff)
    {
        return Err(Error::PointOnFilament {
            distance: d,
            cutoff,
        });
    }
    Ok(())
}

fn cell_kernel(curve: &Curve3D, point: Vec3) -> Vec3 {
    let n = curve.len();
    polyline_kernel(
        (0..n).map(|j| (curve.nodes()[j], curve.node(j as isize + 1))),
        point,
    )
}

/// Sum of the central cell and `images` copies on each side, accumulated
/// outward in a fixed order.
fn sum_images(curve: &Curve3D, point: Vec3, images: usize) -> Vec3 {
    let shift = curve.wrap_shift();
    let mut acc = cell_kernel(curve, point);
    for m in 1..=images {
        let d = shift * m as f64;
        acc += cell_kernel(curve, point - d);
        acc += cell_kernel(curve, point + d);
    }
    acc
}

/// Largest transverse extent of the configuration seen from the axis.
fn transverse_reach(curve: &Curve3D, point: Vec3) -> f64 {
    curve
        .nodes()
        .iter()
        .map(|r| (point.y - r.y).hypot(point.z - r.z))
        .fold(0.0, f64::max)
}

/// Adds image pairs until `|Γ|ρ/(4πL²M²) ≤ tol·|u|`, the far-field bound on
/// everything beyond copy `M`.
fn converge_images(curve: &Curve3D, point: Vec3, gamma: f64) -> Result<(Vec3, usize)> {
    let Topology::Periodic { shift } = curve.topology() else {
        return Ok((cell_kernel(curve, point), 0));
    };
    let rho = transverse_reach(curve, point).max(f64::MIN_POSITIVE);
    let scale = gamma.abs() / (4.0 * PI);
    let mut acc = cell_kernel(curve, point);
    let shift_v = curve.wrap_shift();
    for m in 1..=MAX_IMAGES {
        let d = shift_v * m as f64;
        acc += cell_kernel(curve, point - d);
        acc += cell_kernel(curve, point + d);
        let tail = rho / (shift * shift * (m * m) as f64);
        if tail <= IMAGE_TAIL_TOL * acc.norm()
            || (acc.norm() == 0.0 && scale * tail < f64::MIN_POSITIVE)
        {
            return Ok((acc, m));
        }
    }
    Err(Error::Measurement(format!(
        "image sum not converged after {MAX_IMAGES} copies"
    )))
}

/// Velocity at `point` from the segment-midpoint Biot–Savart sum over `curve`,
/// including image copies for x-periodic curves.
pub fn biot_savart_segment_sum(
    curve: &Curve3D,
    point: &FieldPoint,
    gamma: f64,
    cutoff: f64,
) -> Result<InducedVelocity> {
    check_clearance(curve, point.position, cutoff)?;
    let (acc, images) = converge_images(curve, point.position, gamma)?;
    Ok(InducedVelocity {
        u: acc * (gamma / (4.0 * PI)),
        images,
    })
}

/// `δu = u[helix] − u[baseline]` with one quadrature and one image count
/// shared by both curves.
pub fn perturbation_velocity(
    helix: &Curve3D,
    baseline: &Curve3D,
    point: &FieldPoint,
    gamma: f64,
) -> Result<InducedVelocity> {
    if helix.len() != baseline.len() || helix.topology() != baseline.topology() {
        return Err(invalid(
            "baseline",
            "helix and baseline discretizations differ",
        ));
    }
    let same_stations = helix
        .nodes()
        .iter()
        .zip(baseline.nodes())
        .all(|(a, b)| (a.x - b.x).abs() <= 1e-12 * (1.0 + a.x.abs()));
    if !same_stations {
        return Err(invalid(
            "baseline",
            "helix and baseline have different x stations",
        ));
    }
    let cutoff = default_cutoff(baseline);
    check_clearance(helix, point.position, cutoff)?;
    check_clearance(baseline, point.position, cutoff)?;
    let (_, images) = converge_images(baseline, point.position, gamma)?;
    let du =
        sum_images(helix, point.position, images) - sum_images(baseline, point.position, images);
    Ok(InducedVelocity {
        u: du * (gamma / (4.0 * PI)),
        images,
    })
}

/// Order-of-magnitude transverse estimate `i Γk/(4πh) φ`.
pub fn small_amplitude_estimate(phi: Complex64, k: f64, h: f64, gamma: f64) -> Complex64 {
    Complex64::i() * (gamma * k / (4.0 * PI * h)) * phi
}

/// One row of a sampled velocity field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocitySample {
    pub position: Vec3,
    pub u: Vec3,
}

impl VelocitySample {
    /// `(x, y, z, u_x, u_y, u_z)`
    pub fn record(&self) -> [f64; 6] {
        let (p, u) = (self.position, self.u);
        [p.x, p.y, p.z, u.x, u.y, u.z]
    }
}

/// Evaluates [`biot_savart_segment_sum`] at many points.
pub fn velocity_field(
    curve: &Curve3D,
    points: &[Vec3],
    gamma: f64,
    cutoff: f64,
    exec: Exec,
) -> Result<Vec<VelocitySample>> {
    exec.map_items(points, |&p| {
        biot_savart_segment_sum(curve, &FieldPoint::new(p), gamma, cutoff).map(|v| VelocitySample {
            position: p,
            u: v.u,
        })
    })
    .into_iter()
    .collect()
}
