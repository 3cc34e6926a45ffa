use crate::error::{invalid, require_positive, Result};
use crate::exec::Exec;
use crate::Vec3;

use super::geometry::local_derivatives;
use super::{resample_arclength, Curve3D};

/// Largest admissible `ν·dt/dl²` for the explicit RK4 step.
pub const MAX_DIFFUSION_NUMBER: f64 = 0.2;

/// `v_j = ν t_j × r''_j` with the discrete derivatives of [`super::discrete_geometry`].
pub fn lia_velocity(curve: &Curve3D, nu: f64) -> Vec<Vec3> {
    lia_velocity_with(curve, nu, Exec::default())
}

pub fn lia_velocity_with(curve: &Curve3D, nu: f64, exec: Exec) -> Vec<Vec3> {
    exec.map(curve.len(), |j| {
        let i = j as isize;
        let (d1, d2) = local_derivatives(curve.node(i - 1), curve.node(i), curve.node(i + 1));
        d1.normalize().cross(&d2) * nu
    })
}

/// Fixed-step RK4 integrator for the localized-induction flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiaStepper {
    nu: f64,
    dt: f64,
    exec: Exec,
}

impl LiaStepper {
    pub fn new(nu: f64, dt: f64) -> Result<Self> {
        require_positive("nu", nu)?;
        require_positive("dt", dt)?;
        Ok(LiaStepper {
            nu,
            dt,
            exec: Exec::default(),
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Checks `ν·dt/dl² ≤ 0.2` against the shortest segment of `curve`.
    pub fn check(&self, curve: &Curve3D) -> Result<()> {
        let dl = curve
            .segment_lengths()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let number = self.nu * self.dt / (dl * dl);
        if number > MAX_DIFFUSION_NUMBER {
            return Err(invalid(
                "dt",
                format!(
                    "ν·dt/dl² = {number:.4} exceeds {MAX_DIFFUSION_NUMBER} (dl = {dl:.3e}); \
                     use dt ≤ {:.3e}",
                    MAX_DIFFUSION_NUMBER * dl * dl / self.nu
                ),
            ));
        }
        Ok(())
    }

    /// One classical RK4 step followed by arclength resampling.
    pub fn step(&self, curve: &Curve3D) -> Result<Curve3D> {
        self.check(curve)?;
        let dt = self.dt;
        let clock = curve.clock();
        let base = curve.nodes();
        let shifted = |k: &[Vec3], h: f64| {
            let nodes = base.iter().zip(k).map(|(r, v)| r + v * h).collect();
            curve.replace_nodes(nodes, clock)
        };
        let k1 = lia_velocity_with(curve, self.nu, self.exec);
        let k2 = lia_velocity_with(&shifted(&k1, 0.5 * dt), self.nu, self.exec);
        let k3 = lia_velocity_with(&shifted(&k2, 0.5 * dt), self.nu, self.exec);
        let k4 = lia_velocity_with(&shifted(&k3, dt), self.nu, self.exec);
        let nodes = (0..base.len())
            .map(|j| base[j] + (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * (dt / 6.0))
            .collect();
        let stepped = Curve3D::with_clock(nodes, curve.topology(), clock.advanced(dt))?;
        resample_arclength(&stepped)
    }

    /// Advances `steps` steps, calling `observe` on the initial curve and after every step.
    pub fn run(
        &self,
        curve: &Curve3D,
        steps: u64,
        mut observe: impl FnMut(&Curve3D),
    ) -> Result<Curve3D> {
        let mut c = curve.clone();
        observe(&c);
        for _ in 0..steps {
            c = self.step(&c)?;
            observe(&c);
        }
        Ok(c)
    }
}

/// One RK4 step of size `dt` with the default execution policy.
pub fn step_lia_rk4(curve: &Curve3D, nu: f64, dt: f64) -> Result<Curve3D> {
    LiaStepper::new(nu, dt)?.step(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filament::{
        discrete_geometry, make_circle_curve, make_helix_curve, make_straight_curve,
    };
    use crate::model::HelixSpec;
    use std::f64::consts::PI;

    #[test]
    fn straight_line_is_stationary() {
        let c = make_straight_curve(8.0, 64).unwrap();
        assert!(lia_velocity(&c, 0.5).iter().all(|v| v.norm() == 0.0));
        let s = step_lia_rk4(&c, 0.5, 1e-3).unwrap();
        assert_eq!(s.nodes(), c.nodes());
        assert!((s.t() - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn velocity_is_orthogonal_to_tangent() {
        let c = make_helix_curve(&HelixSpec::new(0.3, 2.0, 0.4).unwrap(), 2.0 * PI, 64).unwrap();
        let g = discrete_geometry(&c);
        for (v, t) in lia_velocity(&c, 0.5).iter().zip(&g.tangent) {
            assert!(v.dot(t).abs() < 1e-15);
        }
    }

    #[test]
    fn helix_nodes_move_azimuthally_at_expected_rate() {
        let (a, tau, nu) = (0.1, 1.0, 0.5);
        let c = make_helix_curve(&HelixSpec::new(a, tau, 0.0).unwrap(), 2.0 * PI, 256).unwrap();
        let rate = nu * tau * tau / (1.0 + a * a * tau * tau).powf(1.5);
        for (r, v) in c.nodes().iter().zip(lia_velocity(&c, nu)) {
            let radial = Vec3::new(0.0, r.y, r.z) / a;
            let azimuth = Vec3::new(0.0, -r.z, r.y) / a;
            assert!(v.dot(&radial).abs() < 1e-12 * v.norm());
            // clockwise rotation seen from +x, i.e. φ ∝ e^{-iωt}
            let w = -v.dot(&azimuth) / a;
            assert!((w - rate).abs() / rate < 2e-4, "{w} vs {rate}");
        }
    }

    #[test]
    fn circle_translates_along_binormal() {
        let c = make_circle_curve(2.0, 64).unwrap();
        for v in lia_velocity(&c, 1.0) {
            assert!((v - Vec3::new(0.5, 0.0, 0.0)).norm() < 1e-3);
        }
    }

    #[test]
    fn step_limit_enforced() {
        let c = make_straight_curve(8.0, 64).unwrap();
        let limit = 0.2 * (0.125f64).powi(2) / 0.5;
        assert!(step_lia_rk4(&c, 0.5, limit * 0.999).is_ok());
        assert!(step_lia_rk4(&c, 0.5, limit * 1.01).is_err());
    }

    #[test]
    fn policies_agree_bitwise() {
        let c = make_helix_curve(&HelixSpec::new(0.2, 3.0, 0.0).unwrap(), 2.0 * PI, 600).unwrap();
        assert_eq!(
            lia_velocity_with(&c, 0.5, Exec::Sequential),
            lia_velocity_with(&c, 0.5, Exec::Parallel)
        );
    }
}
