//! Sequential and parallel execution must agree bit for bit.

use std::f64::consts::PI;

use vortex_kg::analysis::{dispersion_scan, ModeRun};
use vortex_kg::fields::{make_grid, Backend, EquationKind};
use vortex_kg::filament::{lia_velocity_with, make_helix_curve, LiaStepper};
use vortex_kg::induction::{default_cutoff, velocity_field};
use vortex_kg::model::HelixSpec;
use vortex_kg::{Exec, Vec3};

#[test]
fn lia_kernels_agree() {
    let spec = HelixSpec::new(0.1, 3.0, 0.2).unwrap();
    let c = make_helix_curve(&spec, 2.0 * PI, 1024).unwrap();
    assert_eq!(
        lia_velocity_with(&c, 0.5, Exec::Sequential),
        lia_velocity_with(&c, 0.5, Exec::Parallel)
    );
    let step = |exec| {
        LiaStepper::new(0.5, 1e-6)
            .unwrap()
            .with_exec(exec)
            .run(&c, 5, |_| {})
            .unwrap()
    };
    assert_eq!(step(Exec::Sequential), step(Exec::Parallel));
}

#[test]
fn velocity_field_agrees() {
    let c = make_helix_curve(&HelixSpec::new(0.05, 1.0, 0.0).unwrap(), 2.0 * PI, 64).unwrap();
    let points: Vec<Vec3> = (0..300)
        .map(|i| Vec3::new(i as f64 * 0.02, 1.0, 0.5))
        .collect();
    let cutoff = default_cutoff(&c);
    let a = velocity_field(&c, &points, 1.0, cutoff, Exec::Sequential).unwrap();
    let b = velocity_field(&c, &points, 1.0, cutoff, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dispersion_scan_agrees() {
    let run = ModeRun {
        grid: make_grid(64, 2.0 * PI).unwrap(),
        dt: 0.01,
        steps: 50,
        backend: Backend::Fd,
    };
    let kind = EquationKind::KleinGordon { c: 1.0, mu: 0.5 };
    let ks: Vec<f64> = (1..=12).map(f64::from).collect();
    assert_eq!(
        dispersion_scan(&kind, &ks, &run, Exec::Sequential).unwrap(),
        dispersion_scan(&kind, &ks, &run, Exec::Parallel).unwrap()
    );
}
