use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;
use vortex_kg::analysis::{
    dispersion_scan, fit_power_law, helix_shape_deviation, linearization_consistency,
    measure_group_velocity, measure_rotation_rate, measure_soliton_speed, peak_position,
    LinearizationSetup, MeasurementReport, ModeRun, PacketSetup, RunMetadata,
};
use vortex_kg::fields::{
    make_grid, Backend, ComplexField, EquationKind, FieldSolver, FieldState, LinearState,
};
use vortex_kg::filament::{
    make_hasimoto_soliton_curve, make_helix_curve, make_straight_curve, Curve3D, LiaStepper,
    MAX_DIFFUSION_NUMBER,
};
use vortex_kg::induction::{
    default_cutoff, perturbation_velocity, small_amplitude_estimate, velocity_field, FieldPoint,
};
use vortex_kg::model::{
    derive_params, helix_field_snapshot, mass_coefficient_ledger, Closure, HelixSpec,
    PhysicalParams,
};
use vortex_kg::{Complex64, Exec, Vec3};

use crate::config::{Equation, Scenario, ScenarioConfig};
use crate::output::{emit_curve_series, emit_field_series, Cell, Manifest, RunDir, SeriesWriter};
use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Runs are written to `out_root/<name>/`.
    pub out_root: PathBuf,
    pub exec: Exec,
}

impl RunOptions {
    pub fn new(out_root: impl Into<PathBuf>) -> Self {
        RunOptions {
            out_root: out_root.into(),
            exec: Exec::default(),
        }
    }
}

/// Checks every precondition of the scenario without computing or writing anything.
pub fn validate_config(config: &ScenarioConfig) -> Result<()> {
    plan(config).map(|_| ())
}

/// Validates, executes, then writes `series/*.csv`, `report.json` and finally `manifest.json`.
pub fn run_config(config: &ScenarioConfig, options: &RunOptions) -> Result<Manifest> {
    let plan = plan(config)?;
    let start = Instant::now();
    let mut dir = RunDir::create(options.out_root.join(&config.name))?;
    let outcome = execute(plan, &config.params, options.exec)?;
    for (name, series) in outcome.series {
        dir.write(
            &format!("series/{name}.csv"),
            series.into_string().as_bytes(),
        )?;
    }
    let report = Report {
        name: &config.name,
        scenario: config.scenario.kind(),
        measurements: &outcome.measurements,
        details: &outcome.details,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    dir.write("report.json", text.as_bytes())?;
    dir.finish(config, start.elapsed().as_secs_f64())
}

#[derive(Serialize)]
struct Report<'a> {
    name: &'a str,
    scenario: &'a str,
    measurements: &'a [MeasurementReport],
    details: &'a serde_json::Value,
}

struct Outcome {
    series: Vec<(&'static str, SeriesWriter)>,
    measurements: Vec<MeasurementReport>,
    details: serde_json::Value,
}

/// A scenario with every precondition checked and its inputs built.
enum Plan {
    Ledger {
        m_count: u32,
    },
    FieldRun {
        solver: Box<FieldSolver>,
        steps: u64,
        cadence: u64,
        expected_omega: f64,
        meta: RunMetadata,
    },
    LiaRun {
        curve: Curve3D,
        stepper: LiaStepper,
        steps: u64,
        cadence: u64,
        spec: HelixSpec,
        station: f64,
        meta: RunMetadata,
    },
    Dispersion {
        kind: EquationKind,
        ks: Vec<f64>,
        run: ModeRun,
    },
    BiotSavart {
        helix: Curve3D,
        baseline: Curve3D,
        spec: HelixSpec,
        h: f64,
        points: Vec<Vec3>,
        cutoff: f64,
        meta: RunMetadata,
    },
    Soliton {
        curve: Curve3D,
        stepper: LiaStepper,
        steps: u64,
        every: u64,
        tau0: f64,
        meta: RunMetadata,
    },
    GroupVelocity {
        setup: PacketSetup,
    },
    Linearization {
        a_over_l: Vec<f64>,
        setup: LinearizationSetup,
    },
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn equation_kind(
    eq: Equation,
    mu: Option<f64>,
    p: &PhysicalParams,
    default_mu: f64,
) -> Result<EquationKind> {
    let kind = match eq {
        Equation::Wave => EquationKind::Wave { c: p.c },
        Equation::Schrodinger => EquationKind::Schrodinger { nu: p.nu },
        Equation::KleinGordon => EquationKind::KleinGordon {
            c: p.c,
            mu: mu.unwrap_or(default_mu),
        },
    };
    if mu.is_some() && eq != Equation::KleinGordon {
        return Err(invalid("mu only applies to the klein-gordon equation"));
    }
    kind.validate()?;
    Ok(kind)
}

fn backend_name(b: Backend) -> String {
    match b {
        Backend::Spectral => "spectral".into(),
        Backend::Fd => "fd".into(),
    }
}

/// `steps` must split into at least `min_blocks` blocks of `cadence` steps.
fn check_cadence(steps: u64, cadence: u64, min_blocks: u64) -> Result<()> {
    if cadence == 0 || !steps.is_multiple_of(cadence) || steps / cadence < min_blocks {
        return Err(invalid(format!(
            "steps = {steps} must be a positive multiple of cadence = {cadence} with at least {min_blocks} snapshots after t = 0"
        )));
    }
    Ok(())
}

/// Whole number of steps of `dt` in `duration`.
fn whole_steps(duration: f64, dt: f64) -> Result<u64> {
    let s = duration / dt;
    if !(s.is_finite() && s >= 1.0) || (s - s.round()).abs() > 1e-9 * s {
        return Err(invalid(format!(
            "duration / dt = {s} is not a whole number of steps"
        )));
    }
    Ok(s.round() as u64)
}

fn plan(config: &ScenarioConfig) -> Result<Plan> {
    let p = config.params;
    p.validate()?;
    Ok(match config.scenario.clone() {
        Scenario::Ledger { m_count } => {
            derive_params(&p, m_count)?;
            Plan::Ledger { m_count }
        }
        Scenario::FieldRun {
            equation,
            mu,
            backend,
            n,
            length,
            dt,
            steps,
            cadence,
            helix,
        } => {
            let kind = equation_kind(equation, mu, &p, p.nu * helix.tau * helix.tau)?;
            check_cadence(steps, cadence, 2)?;
            let grid = make_grid(n, length)?;
            let phi = helix_field_snapshot(&helix, 0.0, &grid, 0.0)?;
            let expected_omega = kind.dispersion(helix.tau);
            if expected_omega * dt * cadence as f64 >= std::f64::consts::FRAC_PI_2 {
                return Err(invalid(
                    "snapshots are too far apart to track the rotation phase; lower cadence or dt",
                ));
            }
            let initial = if kind.is_second_order() {
                let rate = Complex64::new(0.0, -expected_omega);
                let phi_t = ComplexField::new(
                    grid,
                    phi.values().iter().map(|v| rate * v).collect(),
                    phi.clock(),
                )?;
                LinearState::from(FieldState::new(phi, phi_t)?)
            } else {
                phi.into()
            };
            let solver = Box::new(FieldSolver::new(kind, backend, initial, dt)?);
            let meta = RunMetadata {
                n: Some(n),
                length: Some(length),
                dt: Some(dt),
                steps: Some(steps),
                backend: Some(backend_name(backend)),
            };
            Plan::FieldRun {
                solver,
                steps,
                cadence,
                expected_omega,
                meta,
            }
        }
        Scenario::LiaRun {
            n,
            length,
            dt,
            steps,
            cadence,
            helix,
            station,
        } => {
            check_cadence(steps, cadence, 2)?;
            if !station.is_finite() {
                return Err(invalid("station must be finite"));
            }
            let curve = make_helix_curve(&helix, length, n)?;
            let stepper = LiaStepper::new(p.nu, dt)?;
            stepper.check(&curve)?;
            let meta = RunMetadata {
                n: Some(n),
                length: Some(length),
                dt: Some(dt),
                steps: Some(steps),
                backend: None,
            };
            Plan::LiaRun {
                curve,
                stepper,
                steps,
                cadence,
                spec: helix,
                station,
                meta,
            }
        }
        Scenario::Dispersion {
            equation,
            mu,
            backend,
            ks,
            n,
            length,
            dt,
            steps,
        } => {
            let mu0 = derive_params(&p, 1)?.mu;
            let kind = equation_kind(equation, mu, &p, mu0)?;
            if ks.is_empty() {
                return Err(invalid("ks must list at least one wavenumber"));
            }
            let run = ModeRun {
                grid: make_grid(n, length)?,
                dt,
                steps,
                backend,
            };
            for &k in &ks {
                run.check(&kind, k)?;
            }
            Plan::Dispersion { kind, ks, run }
        }
        Scenario::BiotSavart {
            n,
            length,
            helix,
            h,
            stations,
            cutoff,
        } => {
            let curve = make_helix_curve(&helix, length, n)?;
            let baseline = make_straight_curve(length, n)?;
            let cutoff = cutoff.unwrap_or_else(|| default_cutoff(&curve));
            if !(cutoff.is_finite() && cutoff > 0.0) {
                return Err(invalid("cutoff must be finite and positive"));
            }
            if !(h.is_finite() && h - helix.amplitude > cutoff) {
                return Err(invalid(format!(
                    "h = {h} must exceed the helix amplitude plus the cutoff ({})",
                    helix.amplitude + cutoff
                )));
            }
            if stations == 0 {
                return Err(invalid("stations must be at least 1"));
            }
            let points = (0..stations)
                .map(|i| Vec3::new(length * i as f64 / stations as f64, h, 0.0))
                .collect();
            let meta = RunMetadata {
                n: Some(n),
                length: Some(length),
                ..RunMetadata::default()
            };
            Plan::BiotSavart {
                helix: curve,
                baseline,
                spec: helix,
                h,
                points,
                cutoff,
                meta,
            }
        }
        Scenario::Soliton {
            eta,
            tau0,
            length,
            n,
            dt,
            duration,
            snapshots,
        } => {
            if snapshots < 2 {
                return Err(invalid("snapshots must be at least 2"));
            }
            if !(duration.is_finite() && duration > 0.0) {
                return Err(invalid("duration must be finite and positive"));
            }
            let curve = make_hasimoto_soliton_curve(eta, tau0, length, n)?;
            let steps = match dt {
                Some(dt) => whole_steps(duration, dt)?,
                None => {
                    let dl = curve
                        .segment_lengths()
                        .into_iter()
                        .fold(f64::INFINITY, f64::min);
                    let max_dt = MAX_DIFFUSION_NUMBER * dl * dl / p.nu;
                    ((duration / max_dt).ceil() as u64).div_ceil(snapshots) * snapshots
                }
            };
            if steps % snapshots != 0 {
                return Err(invalid(format!(
                    "{steps} steps do not divide into {snapshots} snapshots"
                )));
            }
            let dt = duration / steps as f64;
            let stepper = LiaStepper::new(p.nu, dt)?;
            stepper.check(&curve)?;
            let meta = RunMetadata {
                n: Some(n),
                length: Some(length),
                dt: Some(dt),
                steps: Some(steps),
                backend: None,
            };
            Plan::Soliton {
                curve,
                stepper,
                steps,
                every: steps / snapshots,
                tau0,
                meta,
            }
        }
        Scenario::GroupVelocity {
            k0,
            sigma,
            n,
            length,
            duration,
            samples,
        } => {
            if !k0.is_finite() {
                return Err(invalid("k0 must be finite"));
            }
            let setup = PacketSetup {
                grid: make_grid(n, length)?,
                nu: p.nu,
                k0,
                sigma,
                duration,
                samples,
            };
            setup.check()?;
            let travel = 2.0 * p.nu * k0.abs() * duration;
            if travel > 0.5 * length - 4.0 * sigma {
                return Err(invalid(format!(
                    "packet travels {travel:.3} but only {:.3} fits before the boundary",
                    0.5 * length - 4.0 * sigma
                )));
            }
            Plan::GroupVelocity { setup }
        }
        Scenario::Linearization {
            a_over_l,
            tau,
            n,
            length,
            dt,
            duration,
            comparisons,
        } => {
            if a_over_l.is_empty() {
                return Err(invalid("a_over_l must list at least one amplitude"));
            }
            let setup = LinearizationSetup {
                length,
                n,
                tau,
                nu: p.nu,
                dt,
                duration,
                comparisons,
            };
            for &a in &a_over_l {
                setup.check(a)?;
            }
            Plan::Linearization { a_over_l, setup }
        }
    })
}

fn execute(plan: Plan, p: &PhysicalParams, exec: Exec) -> Result<Outcome> {
    match plan {
        Plan::Ledger { m_count } => run_ledger(p, m_count),
        Plan::FieldRun {
            solver,
            steps,
            cadence,
            expected_omega,
            meta,
        } => run_field(*solver, steps, cadence, expected_omega, meta),
        Plan::LiaRun {
            curve,
            stepper,
            steps,
            cadence,
            spec,
            station,
            meta,
        } => run_lia(
            curve,
            stepper.with_exec(exec),
            steps,
            cadence,
            spec,
            station,
            meta,
        ),
        Plan::Dispersion { kind, ks, run } => run_dispersion(kind, &ks, run, exec),
        Plan::BiotSavart {
            helix,
            baseline,
            spec,
            h,
            points,
            cutoff,
            meta,
        } => run_biot_savart(
            &helix, &baseline, spec, h, &points, cutoff, p.gamma, meta, exec,
        ),
        Plan::Soliton {
            curve,
            stepper,
            steps,
            every,
            tau0,
            meta,
        } => run_soliton(
            curve,
            stepper.with_exec(exec),
            steps,
            every,
            2.0 * p.nu * tau0,
            meta,
        ),
        Plan::GroupVelocity { setup } => run_group_velocity(setup),
        Plan::Linearization { a_over_l, setup } => run_linearization(&a_over_l, setup, exec),
    }
}

fn run_ledger(p: &PhysicalParams, m_count: u32) -> Result<Outcome> {
    let derived = derive_params(p, m_count)?;
    let mut w = SeriesWriter::new(&["closure", "tau", "lhs", "rhs", "ratio"]);
    let mut measurements = Vec::new();
    for (closure, name, expected) in [
        (Closure::GroupVelocity, "group_velocity", 0.25),
        (Closure::Frequency, "frequency", 1.0),
    ] {
        let r = mass_coefficient_ledger(p, closure)?;
        w.row(&[
            Cell::Text(name),
            r.tau.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.ratio.into(),
        ]);
        measurements.push(
            MeasurementReport::new("ledger", &format!("ratio_{name}"), r.ratio, 0.0)
                .expect(expected),
        );
    }
    Ok(Outcome {
        series: vec![("ledger", w)],
        measurements,
        details: json!({ "derived": derived }),
    })
}

fn run_field(
    mut solver: FieldSolver,
    steps: u64,
    cadence: u64,
    expected: f64,
    meta: RunMetadata,
) -> Result<Outcome> {
    let q0 = solver.conserved_quantity()?;
    let mut conserved = SeriesWriter::new(&["t", "value"]);
    let mut snapshots = Vec::new();
    let mut drift: f64 = 0.0;
    for step in 0..=steps {
        if step > 0 {
            solver.step()?;
        }
        if step % cadence == 0 {
            let q = solver.conserved_quantity()?;
            drift = drift.max(if q0 != 0.0 {
                ((q - q0) / q0).abs()
            } else {
                q.abs()
            });
            conserved.row(&[solver.t().into(), q.into()]);
            snapshots.push(solver.phi().clone());
        }
    }
    let curves = snapshots
        .iter()
        .map(Curve3D::from_field)
        .collect::<vortex_kg::Result<Vec<_>>>()?;
    let rot = measure_rotation_rate(&curves, 0.0)?;
    let measurements = vec![
        MeasurementReport::new("field-run", "omega", rot.omega, rot.residual)
            .expect(expected)
            .flag(rot.flagged)
            .with_metadata(meta.clone()),
        MeasurementReport::new("field-run", "conserved_drift", drift, 0.0).with_metadata(meta),
    ];
    Ok(Outcome {
        series: vec![
            ("field", emit_field_series(&snapshots)?),
            ("conserved", conserved),
        ],
        measurements,
        details: json!({ "equation": solver.kind(), "amplitude_spread": rot.amplitude_spread }),
    })
}

fn run_lia(
    curve: Curve3D,
    stepper: LiaStepper,
    steps: u64,
    cadence: u64,
    spec: HelixSpec,
    station: f64,
    meta: RunMetadata,
) -> Result<Outcome> {
    let length0 = curve.total_length();
    let mut lengths = SeriesWriter::new(&["t", "length"]);
    let mut history = Vec::new();
    let mut count = 0u64;
    stepper.run(&curve, steps, |c| {
        if count.is_multiple_of(cadence) {
            lengths.row(&[c.t().into(), c.total_length().into()]);
            history.push(c.clone());
        }
        count += 1;
    })?;
    let rot = measure_rotation_rate(&history, station)?;
    let scale = if spec.amplitude > 0.0 {
        spec.amplitude
    } else {
        1.0
    };
    let shape = |omega: f64| {
        history
            .iter()
            .map(|c| {
                let rotated = HelixSpec {
                    phase0: spec.phase0 - omega * c.t(),
                    ..spec
                };
                helix_shape_deviation(c, &rotated)
            })
            .fold(0.0, f64::max)
            / scale
    };
    let linear_rate = stepper.nu() * spec.tau * spec.tau;
    let drift = history
        .iter()
        .map(|c| ((c.total_length() - length0) / length0).abs())
        .fold(0.0, f64::max);
    let measurements = vec![
        MeasurementReport::new("lia-run", "omega", rot.omega, rot.residual)
            .expect(linear_rate)
            .flag(rot.flagged)
            .with_metadata(meta.clone()),
        MeasurementReport::new(
            "lia-run",
            "corotating_shape_deviation",
            shape(rot.omega),
            0.0,
        )
        .with_metadata(meta.clone()),
        MeasurementReport::new(
            "lia-run",
            "linear_phase_shape_deviation",
            shape(linear_rate),
            0.0,
        )
        .with_metadata(meta.clone()),
        MeasurementReport::new("lia-run", "length_drift", drift, 0.0).with_metadata(meta),
    ];
    Ok(Outcome {
        series: vec![("curve", emit_curve_series(&history)?), ("length", lengths)],
        measurements,
        details: json!({ "amplitude_spread": rot.amplitude_spread, "station": station }),
    })
}

fn run_dispersion(kind: EquationKind, ks: &[f64], run: ModeRun, exec: Exec) -> Result<Outcome> {
    let samples = dispersion_scan(&kind, ks, &run, exec)?;
    let mut w = SeriesWriter::new(&[
        "k",
        "omega_measured",
        "omega_predicted",
        "rel_err",
        "residual",
        "flagged",
    ]);
    for s in &samples {
        w.row(&[
            s.k.into(),
            s.omega_measured.into(),
            s.omega_predicted.into(),
            s.rel_err.into(),
            s.residual.into(),
            Cell::Int(s.flagged as u64),
        ]);
    }
    let max_err = samples.iter().map(|s| s.rel_err).fold(0.0, f64::max);
    let max_res = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let meta = RunMetadata {
        n: Some(run.grid.n()),
        length: Some(run.grid.length()),
        dt: Some(run.dt),
        steps: Some(run.steps as u64),
        backend: Some(backend_name(run.backend)),
    };
    let measurements = vec![
        MeasurementReport::new("dispersion", "max_rel_err", max_err, max_res)
            .flag(samples.iter().any(|s| s.flagged))
            .with_metadata(meta),
    ];
    Ok(Outcome {
        series: vec![("dispersion", w)],
        measurements,
        details: json!({ "equation": kind, "samples": samples }),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_biot_savart(
    helix: &Curve3D,
    baseline: &Curve3D,
    spec: HelixSpec,
    h: f64,
    points: &[Vec3],
    cutoff: f64,
    gamma: f64,
    meta: RunMetadata,
    exec: Exec,
) -> Result<Outcome> {
    let field = velocity_field(helix, points, gamma, cutoff, exec)?;
    let mut velocity = SeriesWriter::new(&["x", "y", "z", "ux", "uy", "uz"]);
    for s in &field {
        let r = s.record();
        velocity.row(&r.map(Cell::Float));
    }
    let perturbations = exec
        .map_items(points, |&q| {
            perturbation_velocity(helix, baseline, &FieldPoint::new(q), gamma)
        })
        .into_iter()
        .collect::<vortex_kg::Result<Vec<_>>>()?;
    let mut pert = SeriesWriter::new(&[
        "x",
        "dux",
        "duy",
        "duz",
        "estimate_re",
        "estimate_im",
        "ratio",
    ]);
    let mut ratios = Vec::with_capacity(points.len());
    for (q, du) in points.iter().zip(&perturbations) {
        let phi = Complex64::from_polar(spec.amplitude, spec.tau * q.x + spec.phase0);
        let est = small_amplitude_estimate(phi, spec.tau, h, gamma);
        let ratio = if est.norm() > 0.0 {
            du.transverse().norm() / est.norm()
        } else {
            0.0
        };
        ratios.push(ratio);
        pert.row(&[
            q.x.into(),
            du.u.x.into(),
            du.u.y.into(),
            du.u.z.into(),
            est.re.into(),
            est.im.into(),
            ratio.into(),
        ]);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
    let measurements = vec![
        MeasurementReport::new("biot-savart", "estimate_ratio", mean, spread).with_metadata(meta),
    ];
    Ok(Outcome {
        series: vec![("velocity", velocity), ("perturbation", pert)],
        measurements,
        details: json!({ "h": h, "cutoff": cutoff, "images": perturbations[0].images }),
    })
}

fn run_soliton(
    curve: Curve3D,
    stepper: LiaStepper,
    steps: u64,
    every: u64,
    expected: f64,
    meta: RunMetadata,
) -> Result<Outcome> {
    let mut history = Vec::new();
    let mut peaks = SeriesWriter::new(&["t", "s_peak", "kappa_peak"]);
    let mut count = 0u64;
    stepper.run(&curve, steps, |c| {
        if count.is_multiple_of(every) {
            let (s, kappa) = peak_position(c);
            peaks.row(&[c.t().into(), s.into(), kappa.into()]);
            history.push(c.clone());
        }
        count += 1;
    })?;
    let m = measure_soliton_speed(&history)?;
    let length0 = curve.total_length();
    let drift = history
        .iter()
        .map(|c| ((c.total_length() - length0) / length0).abs())
        .fold(0.0, f64::max);
    let measurements = vec![
        MeasurementReport::new("soliton", "speed", m.v, m.residual)
            .expect(expected)
            .flag(m.flagged)
            .with_metadata(meta.clone()),
        MeasurementReport::new("soliton", "length_drift", drift, 0.0).with_metadata(meta),
    ];
    Ok(Outcome {
        series: vec![("curve", emit_curve_series(&history)?), ("peak", peaks)],
        measurements,
        details: json!({ "eta_measured": m.eta }),
    })
}

fn run_group_velocity(setup: PacketSetup) -> Result<Outcome> {
    let m = measure_group_velocity(&setup)?;
    let mut w = SeriesWriter::new(&["t", "centroid"]);
    for (t, x) in m.times.iter().zip(&m.centroids) {
        w.row(&[(*t).into(), (*x).into()]);
    }
    let meta = RunMetadata {
        n: Some(setup.grid.n()),
        length: Some(setup.grid.length()),
        dt: Some(setup.duration / setup.samples as f64),
        steps: Some(setup.samples as u64),
        backend: Some("spectral".into()),
    };
    let measurements = vec![
        MeasurementReport::new("group-velocity", "v", m.v, m.residual)
            .expect(2.0 * setup.nu * setup.k0)
            .flag(m.flagged)
            .with_metadata(meta),
    ];
    Ok(Outcome {
        series: vec![("centroid", w)],
        measurements,
        details: json!({ "spreading": m.spreading }),
    })
}

fn run_linearization(a_over_l: &[f64], setup: LinearizationSetup, exec: Exec) -> Result<Outcome> {
    let reports = exec
        .map_items(a_over_l, |&a| linearization_consistency(a, &setup, exec))
        .into_iter()
        .collect::<vortex_kg::Result<Vec<_>>>()?;
    let mut w = SeriesWriter::new(&["a_over_l", "amplitude", "deviation", "length_drift"]);
    for r in &reports {
        w.row(&[
            r.a_over_l.into(),
            r.amplitude.into(),
            r.deviation.into(),
            r.length_drift.into(),
        ]);
    }
    let meta = RunMetadata {
        n: Some(setup.n),
        length: Some(setup.length),
        dt: Some(setup.dt),
        steps: Some((setup.duration / setup.dt).round() as u64),
        backend: None,
    };
    let mut measurements: Vec<MeasurementReport> = reports
        .iter()
        .map(|r| {
            MeasurementReport::new(
                "linearization",
                &format!("deviation@{}", r.a_over_l),
                r.deviation,
                0.0,
            )
            .with_metadata(meta.clone())
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = reports
        .iter()
        .filter(|r| r.deviation > 0.0)
        .map(|r| (r.a_over_l, r.deviation))
        .unzip();
    if xs.len() >= 2 {
        let fit = fit_power_law(&xs, &ys)?;
        measurements.push(
            MeasurementReport::new(
                "linearization",
                "deviation_exponent",
                fit.exponent,
                fit.log_residual_rms,
            )
            .expect(2.0)
            .with_metadata(meta),
        );
    }
    Ok(Outcome {
        series: vec![("linearization", w)],
        measurements,
        details: json!({ "reports": reports }),
    })
}
