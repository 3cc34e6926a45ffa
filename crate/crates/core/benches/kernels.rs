use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vortex_kg::analysis::{dispersion_scan, ModeRun};
use vortex_kg::fields::{make_grid, Backend, EquationKind};
use vortex_kg::filament::{lia_velocity_with, make_helix_curve, LiaStepper};
use vortex_kg::induction::{default_cutoff, velocity_field};
use vortex_kg::model::HelixSpec;
use vortex_kg::{Exec, Vec3};

const POLICIES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn lia_velocity(c: &mut Criterion) {
    let mut group = c.benchmark_group("lia_velocity");
    let spec = HelixSpec::new(0.1, 4.0, 0.0).unwrap();
    for n in [1024usize, 16384] {
        let curve = make_helix_curve(&spec, 2.0 * PI, n).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &curve, |b, curve| {
                b.iter(|| lia_velocity_with(black_box(curve), 0.5, exec))
            });
        }
    }
    group.finish();
}

fn biot_savart_field(c: &mut Criterion) {
    let mut group = c.benchmark_group("biot_savart_field");
    group.sample_size(10);
    let curve = make_helix_curve(&HelixSpec::new(0.05, 1.0, 0.0).unwrap(), 2.0 * PI, 128).unwrap();
    let cutoff = default_cutoff(&curve);
    for points in [64usize, 512] {
        let pts: Vec<Vec3> = (0..points)
            .map(|i| Vec3::new(2.0 * PI * i as f64 / points as f64, 1.0, 0.0))
            .collect();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, points), &pts, |b, pts| {
                b.iter(|| velocity_field(&curve, black_box(pts), 1.0, cutoff, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn dispersion(c: &mut Criterion) {
    let mut group = c.benchmark_group("dispersion_scan");
    group.sample_size(10);
    let kind = EquationKind::KleinGordon { c: 1.0, mu: 0.5 };
    let ks: Vec<f64> = (1..=16).map(f64::from).collect();
    for backend in [Backend::Spectral, Backend::Fd] {
        let run = ModeRun {
            grid: make_grid(256, 2.0 * PI).unwrap(),
            dt: 0.005,
            steps: 200,
            backend,
        };
        for (name, exec) in POLICIES {
            group.bench_function(BenchmarkId::new(name, format!("{backend:?}")), |b| {
                b.iter(|| dispersion_scan(&kind, black_box(&ks), &run, exec).unwrap())
            });
        }
    }
    group.finish();
}

/// Helix amplitude sweep, each point a short LIA run.
fn amplitude_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("lia_amplitude_sweep");
    group.sample_size(10);
    let amplitudes: Vec<f64> = (1..=8).map(|i| 0.01 * i as f64).collect();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| {
                exec.map_items(&amplitudes, |&a| {
                    let curve =
                        make_helix_curve(&HelixSpec::new(a, 1.0, 0.0).unwrap(), 2.0 * PI, 256)
                            .unwrap();
                    LiaStepper::new(0.5, 1e-4)
                        .unwrap()
                        .with_exec(Exec::Sequential)
                        .run(&curve, 50, |_| {})
                        .unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    lia_velocity,
    biot_savart_field,
    dispersion,
    amplitude_sweep
);
criterion_main!(benches);
