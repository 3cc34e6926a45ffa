use std::f64::consts::PI;

use proptest::prelude::*;
use vortex_kg::analysis::measure_rotation_rate;
use vortex_kg::filament::{lia_velocity, make_helix_curve, LiaStepper};
use vortex_kg::model::HelixSpec;
use vortex_kg::Vec3;

/// Continuum LIA velocity of the helix node at phase `θ`:
/// `ν/q³ (a²τ³, aτ² sin θ, −aτ² cos θ)` with `q = sqrt(1 + a²τ²)`.
fn continuum_velocity(a: f64, tau: f64, nu: f64, theta: f64) -> Vec3 {
    let q3 = (1.0 + a * a * tau * tau).powf(1.5);
    Vec3::new(
        a * a * tau.powi(3),
        a * tau * tau * theta.sin(),
        -a * tau * tau * theta.cos(),
    ) * (nu / q3)
}

#[test]
fn discrete_velocity_converges_to_continuum_at_second_order() {
    let (a, tau, nu) = (0.3, 2.0, 0.5);
    let spec = HelixSpec::new(a, tau, 0.0).unwrap();
    let errors: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&n| {
            let c = make_helix_curve(&spec, 2.0 * PI, n).unwrap();
            lia_velocity(&c, nu)
                .iter()
                .zip(c.nodes())
                .map(|(v, r)| (v - continuum_velocity(a, tau, nu, tau * r.x)).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.05, "{errors:?}");
    }
}

#[test]
fn station_rotation_rate_approaches_exact_helix_rate() {
    // nodes rotate at ντ²/q³ and drift along x at νa²τ³/q³; at a fixed
    // station the phase therefore turns at ντ²/q
    let (a, tau, nu): (f64, f64, f64) = (0.2, 1.0, 0.5);
    let exact = nu * tau * tau / (1.0 + a * a * tau * tau).sqrt();
    let spec = HelixSpec::new(a, tau, 0.0).unwrap();
    let rate = |n: usize| {
        let c = make_helix_curve(&spec, 2.0 * PI, n).unwrap();
        let h = 2.0 * PI / n as f64;
        let steps = 400u64;
        let dt = (0.2 * h * h / nu).min(1.0 / steps as f64);
        let mut history = Vec::new();
        let mut k = 0;
        LiaStepper::new(nu, dt)
            .unwrap()
            .run(&c, steps, |cv| {
                if k % 20 == 0 {
                    history.push(cv.clone());
                }
                k += 1;
            })
            .unwrap();
        measure_rotation_rate(&history, 0.5).unwrap().omega
    };
    let (r1, r2) = (rate(32), rate(64));
    let richardson = (4.0 * r2 - r1) / 3.0;
    assert!((r2 - exact).abs() < (r1 - exact).abs());
    assert!(
        (richardson - exact).abs() < 1e-4 * exact,
        "{r1} {r2} {richardson} vs {exact}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn uniform_helix_moves_as_a_screw(a in 0.0f64..0.5, turns in 1u32..4, phase in 0.0f64..6.3, n_per in 16usize..40) {
        let tau = turns as f64;
        let spec = HelixSpec::new(a, tau, phase).unwrap();
        let n = n_per * turns as usize;
        let c = make_helix_curve(&spec, 2.0 * PI, n).unwrap();
        let v = lia_velocity(&c, 0.5);
        let scale = v.iter().map(|u| u.norm()).fold(0.0, f64::max).max(1e-300);
        let axial = v[0].x;
        let azimuthal = |u: &Vec3, r: &Vec3| (r.y * u.z - r.z * u.y) / a.max(1e-300);
        let az0 = azimuthal(&v[0], &c.nodes()[0]);
        for (u, r) in v.iter().zip(c.nodes()) {
            prop_assert!((u.x - axial).abs() <= 1e-12 * scale);
            prop_assert!((r.y * u.y + r.z * u.z).abs() <= 1e-12 * scale * a.max(1e-300));
            prop_assert!((azimuthal(u, r) - az0).abs() <= 1e-12 * scale);
        }
    }
}
