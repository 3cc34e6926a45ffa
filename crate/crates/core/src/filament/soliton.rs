use crate::error::{invalid, require_positive, Result};
use crate::Vec3;

use super::{resample_arclength, Curve3D, Topology};

/// Closed-form Hasimoto soliton at `t = 0`, centred at arclength `s = 0`:
/// `x = s − A tanh(ηs)`, `y + iz = A sech(ηs) e^{iτs}` with `A = 2η/(η² + τ²)`.
pub fn hasimoto_closed_form(eta: f64, tau0: f64, s: f64) -> Vec3 {
    let amp = 2.0 * eta / (eta * eta + tau0 * tau0);
    let sech = 1.0 / (eta * s).cosh();
    Vec3::new(
        s - amp * (eta * s).tanh(),
        amp * sech * (tau0 * s).cos(),
        amp * sech * (tau0 * s).sin(),
    )
}

#[derive(Clone, Copy)]
struct Frame {
    r: Vec3,
    t: Vec3,
    n: Vec3,
    b: Vec3,
}

impl Frame {
    fn axpy(&self, d: &Frame, h: f64) -> Frame {
        Frame {
            r: self.r + d.r * h,
            t: self.t + d.t * h,
            n: self.n + d.n * h,
            b: self.b + d.b * h,
        }
    }

    fn orthonormalize(mut self) -> Frame {
        self.t = self.t.normalize();
        self.n = (self.n - self.t * self.t.dot(&self.n)).normalize();
        self.b = self.t.cross(&self.n);
        self
    }
}

fn frenet_rhs(f: &Frame, kappa: f64, tau: f64) -> Frame {
    Frame {
        r: f.t,
        t: f.n * kappa,
        n: f.t * -kappa + f.b * tau,
        b: f.n * -tau,
    }
}

/// Integrates the Frenet–Serret equations with curvature `2η sech(ηs)` and
/// torsion `τ₀`, outward from the curvature peak, and returns an x-periodic
/// curve of one arclength period `length` with the peak in the middle.
/// Nodes are placed at equal chord spacing.
pub fn make_hasimoto_soliton_curve(eta: f64, tau0: f64, length: f64, n: usize) -> Result<Curve3D> {
    require_positive("eta", eta)?;
    require_positive("length", length)?;
    if !tau0.is_finite() {
        return Err(invalid("tau0", "must be finite"));
    }
    if eta * length < 20.0 {
        return Err(invalid(
            "length",
            format!(
                "η·L = {:.3} < 20; soliton is not contained in the box",
                eta * length
            ),
        ));
    }
    let needed = (32.0 * eta * length).ceil();
    if (n as f64) < needed || !n.is_multiple_of(2) {
        return Err(invalid(
            "n",
            format!("need an even n ≥ {needed} (32 nodes per 1/η), got {n}"),
        ));
    }

    let kappa = |s: f64| 2.0 * eta / (eta * s).cosh();
    let norm = eta * eta + tau0 * tau0;
    let t0 = Vec3::new(
        (tau0 * tau0 - eta * eta) / norm,
        0.0,
        2.0 * eta * tau0 / norm,
    );
    let n0 = Vec3::new(0.0, -1.0, 0.0);
    let start = Frame {
        r: hasimoto_closed_form(eta, tau0, 0.0),
        t: t0,
        n: n0,
        b: t0.cross(&n0),
    };

    let half = n / 2;
    let h = length / n as f64;
    let sweep = |dir: f64| {
        let mut out = Vec::with_capacity(half + 1);
        let mut f = start;
        out.push(f.r);
        let sub = 4;
        let dh = dir * h / sub as f64;
        for j in 0..half {
            for k in 0..sub {
                let s = dir * h * j as f64 + dh * k as f64;
                let k1 = frenet_rhs(&f, kappa(s), tau0);
                let k2 = frenet_rhs(&f.axpy(&k1, 0.5 * dh), kappa(s + 0.5 * dh), tau0);
                let k3 = frenet_rhs(&f.axpy(&k2, 0.5 * dh), kappa(s + 0.5 * dh), tau0);
                let k4 = frenet_rhs(&f.axpy(&k3, dh), kappa(s + dh), tau0);
                f = Frame {
                    r: f.r + (k1.r + (k2.r + k3.r) * 2.0 + k4.r) * (dh / 6.0),
                    t: f.t + (k1.t + (k2.t + k3.t) * 2.0 + k4.t) * (dh / 6.0),
                    n: f.n + (k1.n + (k2.n + k3.n) * 2.0 + k4.n) * (dh / 6.0),
                    b: f.b + (k1.b + (k2.b + k3.b) * 2.0 + k4.b) * (dh / 6.0),
                }
                .orthonormalize();
            }
            out.push(f.r);
        }
        out
    };
    let forward = sweep(1.0);
    let backward = sweep(-1.0);
    // points at s = (j − n/2) h for j = 0..=n
    let points: Vec<Vec3> = backward
        .iter()
        .rev()
        .chain(&forward[1..])
        .copied()
        .collect();

    let first = points[0];
    let chord = points[n] - first;
    let shift = chord.norm();
    let rotation = nalgebra::Rotation3::rotation_between(&chord, &Vec3::x())
        .unwrap_or_else(nalgebra::Rotation3::identity);
    let nodes = points[..n].iter().map(|p| rotation * (p - first)).collect();
    let curve = Curve3D::new(nodes, Topology::Periodic { shift }, 0.0)?;
    resample_arclength(&curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filament::discrete_geometry;

    #[test]
    fn closed_form_has_unit_speed_and_sech_curvature() {
        let (eta, tau) = (1.0, 0.5);
        let d = 1e-4;
        for s in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            let p = |s| hasimoto_closed_form(eta, tau, s);
            let d1 = (p(s + d) - p(s - d)) / (2.0 * d);
            let d2 = (p(s + d) - p(s) * 2.0 + p(s - d)) / (d * d);
            assert!((d1.norm() - 1.0).abs() < 1e-8);
            let k = 2.0 * eta / (eta * s).cosh();
            assert!((d2.norm() - k).abs() < 1e-5);
        }
    }

    #[test]
    fn frenet_construction_matches_closed_form() {
        let (eta, tau, l, n) = (1.0, 0.5, 24.0, 768);
        let c = make_hasimoto_soliton_curve(eta, tau, l, n).unwrap();
        let g = discrete_geometry(&c);
        let peak = g
            .curvature
            .iter()
            .enumerate()
            .fold((0, 0.0), |m, (j, &k)| if k > m.1 { (j, k) } else { m });
        assert!((peak.1 - 2.0).abs() < 1e-3, "peak curvature {}", peak.1);
        assert!((g.arclength[peak.0] - 0.5 * g.total_length).abs() < 2.0 * l / n as f64);
        // shape: compare against the closed form sampled at the same arclengths,
        // aligned at the peak node
        let s_peak = g.arclength[peak.0];
        let anchor = c.nodes()[peak.0] - hasimoto_closed_form(eta, tau, 0.0);
        let mut worst: f64 = 0.0;
        for j in (0..n).step_by(7) {
            let s = g.arclength[j] - s_peak;
            if s.abs() > 6.0 {
                continue;
            }
            let p = hasimoto_closed_form(eta, tau, s) + anchor;
            worst = worst.max((c.nodes()[j] - p).norm());
        }
        assert!(worst < 2e-3, "max deviation {worst}");
        for (j, t) in g.torsion.iter().enumerate() {
            if g.curvature[j] > 0.1 {
                assert!((t - tau).abs() < 2e-3, "torsion {t} at {j}");
            }
        }
    }

    #[test]
    fn zero_torsion_is_planar() {
        let c = make_hasimoto_soliton_curve(1.0, 0.0, 24.0, 768).unwrap();
        assert!(c.nodes().iter().all(|p| p.z.abs() < 1e-12));
    }

    #[test]
    fn tiny_eta_is_nearly_straight() {
        let c = make_hasimoto_soliton_curve(1e-6, 0.0, 2e7, 640).unwrap();
        let g = discrete_geometry(&c);
        assert!(g.curvature.iter().all(|&k| k < 1e-5));
    }

    #[test]
    fn containment_enforced() {
        assert!(make_hasimoto_soliton_curve(1.0, 0.5, 10.0, 512).is_err());
        assert!(make_hasimoto_soliton_curve(1.0, 0.5, 24.0, 512).is_err());
    }
}
