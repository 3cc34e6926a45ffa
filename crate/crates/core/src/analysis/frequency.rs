use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exec::Exec;
use crate::fields::{Backend, EquationKind, FieldSolver, Grid1D, LinearState};

use super::fit::{fit_line, unwrap_phases};

/// Flag threshold on the phase-fit residual, relative to `|ω|`.
const RESIDUAL_FLAG: f64 = 1e-3;

/// Grid, step and length of a single-mode run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRun {
    pub grid: Grid1D,
    pub dt: f64,
    pub steps: usize,
    pub backend: Backend,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyMeasurement {
    /// In the `exp[i(kx − ωt)]` convention.
    pub omega: f64,
    /// RMS phase-fit residual divided by the run duration.
    pub residual: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionSample {
    pub k: f64,
    pub omega_measured: f64,
    pub omega_predicted: f64,
    /// Relative to `|ω_predicted|`, absolute when the prediction is 0.
    pub rel_err: f64,
    pub residual: f64,
    pub flagged: bool,
}

impl ModeRun {
    /// Preconditions of [`measure_mode_frequency`] for mode `k`.
    pub fn check(&self, kind: &EquationKind, k: f64) -> Result<()> {
        kind.validate()?;
        let grid = self.grid;
        let bin = grid.bin_of(k)?;
        let m = grid.mode_number(bin).unsigned_abs() as usize;
        if m > grid.n() / 4 {
            return Err(invalid(
                "k",
                format!(
                    "mode number {m} is not resolved; need |m| ≤ n/4 = {}",
                    grid.n() / 4
                ),
            ));
        }
        if self.steps < 2 {
            return Err(invalid(
                "steps",
                "need at least 2 steps to fit a phase slope",
            ));
        }
        let predicted = kind.dispersion(k);
        if predicted.abs() * self.dt >= std::f64::consts::FRAC_PI_2 {
            return Err(invalid(
                "dt",
                format!(
                    "ω·dt = {:.3} is too coarse to unwrap the phase",
                    predicted.abs() * self.dt
                ),
            ));
        }
        let init = LinearState::forward_mode(kind, grid, 1.0, k)?;
        FieldSolver::new(*kind, self.backend, init, self.dt).map(|_| ())
    }
}

/// Evolves the forward-branch mode `exp(ikx)` and least-squares fits the
/// unwrapped phase of its Fourier coefficient against time.
pub fn measure_mode_frequency(
    kind: &EquationKind,
    k: f64,
    run: &ModeRun,
) -> Result<FrequencyMeasurement> {
    run.check(kind, k)?;
    let grid = run.grid;
    let init = LinearState::forward_mode(kind, grid, 1.0, k)?;
    let mut solver = FieldSolver::new(*kind, run.backend, init, run.dt)?;
    let mut times = Vec::with_capacity(run.steps + 1);
    let mut phases = Vec::with_capacity(run.steps + 1);
    for step in 0..=run.steps {
        if step > 0 {
            solver.step()?;
        }
        times.push(solver.t());
        phases.push(solver.phi().mode_amplitude(k).arg());
    }
    let fit = fit_line(&times, &unwrap_phases(&phases))?;
    let omega = -fit.slope;
    let residual = fit.residual_rms / (times[run.steps] - times[0]);
    Ok(FrequencyMeasurement {
        omega,
        residual,
        flagged: residual > RESIDUAL_FLAG * omega.abs(),
    })
}

/// [`measure_mode_frequency`] for each `k`, with the closed-form prediction alongside.
pub fn dispersion_scan(
    kind: &EquationKind,
    ks: &[f64],
    run: &ModeRun,
    exec: Exec,
) -> Result<Vec<DispersionSample>> {
    exec.map_items(ks, |&k| {
        let m = measure_mode_frequency(kind, k, run)?;
        let predicted = kind.dispersion(k);
        let err = (m.omega - predicted).abs();
        Ok(DispersionSample {
            k,
            omega_measured: m.omega,
            omega_predicted: predicted,
            rel_err: if predicted != 0.0 {
                err / predicted.abs()
            } else {
                err
            },
            residual: m.residual,
            flagged: m.flagged,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_grid;
    use std::f64::consts::PI;

    fn spectral(n: usize, dt: f64, steps: usize) -> ModeRun {
        ModeRun {
            grid: make_grid(n, 2.0 * PI).unwrap(),
            dt,
            steps,
            backend: Backend::Spectral,
        }
    }

    #[test]
    fn spectral_examples() {
        let run = spectral(64, 0.01, 500);
        let w = measure_mode_frequency(&EquationKind::Wave { c: 1.0 }, 2.0, &run).unwrap();
        assert!((w.omega - 2.0).abs() < 1e-10 && !w.flagged);
        let s = measure_mode_frequency(&EquationKind::Schrodinger { nu: 0.5 }, 1.0, &run).unwrap();
        assert!((s.omega - 0.5).abs() < 1e-10);
        let kg = EquationKind::KleinGordon { c: 1.0, mu: 0.5 };
        let g = measure_mode_frequency(&kg, 2.0, &run).unwrap();
        assert!((g.omega - 4.25f64.sqrt()).abs() < 1e-10);
        assert!((4.25f64.sqrt() - 2.0615528).abs() < 1e-7);
    }

    #[test]
    fn backward_wavenumber_rotates_the_other_way() {
        let run = spectral(32, 0.01, 100);
        let w = measure_mode_frequency(&EquationKind::Wave { c: 1.0 }, -3.0, &run).unwrap();
        assert!((w.omega - 3.0).abs() < 1e-10);
        let s = measure_mode_frequency(&EquationKind::Schrodinger { nu: 0.5 }, -2.0, &run).unwrap();
        assert!((s.omega - 2.0).abs() < 1e-10);
    }

    #[test]
    fn unresolved_mode_and_coarse_step_rejected() {
        let kind = EquationKind::Wave { c: 1.0 };
        assert!(measure_mode_frequency(&kind, 9.0, &spectral(32, 0.01, 10)).is_err());
        assert!(measure_mode_frequency(&kind, 1.5, &spectral(32, 0.01, 10)).is_err());
        assert!(measure_mode_frequency(&kind, 4.0, &spectral(32, 0.5, 10)).is_err());
    }

    #[test]
    fn wave_scan_and_massless_degeneracy() {
        let run = spectral(64, 0.01, 400);
        let ks: Vec<f64> = (1..=8).map(f64::from).collect();
        let wave =
            dispersion_scan(&EquationKind::Wave { c: 1.0 }, &ks, &run, Exec::default()).unwrap();
        assert!(wave.iter().all(|s| s.rel_err <= 1e-10));
        let kg = EquationKind::KleinGordon { c: 1.0, mu: 0.0 };
        let massless = dispersion_scan(&kg, &ks, &run, Exec::Sequential).unwrap();
        for (a, b) in wave.iter().zip(&massless) {
            assert!((a.omega_measured - b.omega_measured).abs() <= 1e-12);
        }
    }

    #[test]
    fn fd_klein_gordon_converges_at_second_order() {
        let kind = EquationKind::KleinGordon { c: 1.0, mu: 0.5 };
        let errs: Vec<f64> = [32, 64, 128]
            .iter()
            .map(|&n| {
                let grid = make_grid(n, 2.0 * PI).unwrap();
                let dt = 0.5 * grid.dx();
                let steps = (4.0 / dt).round() as usize;
                let run = ModeRun {
                    grid,
                    dt,
                    steps,
                    backend: Backend::Fd,
                };
                let s = dispersion_scan(&kind, &[2.0], &run, Exec::Sequential).unwrap();
                s[0].rel_err
            })
            .collect();
        for w in errs.windows(2) {
            assert!((w[0] / w[1] - 4.0).abs() < 0.2, "{errs:?}");
        }
    }
}
