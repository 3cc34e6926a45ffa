//! Exact per-mode evolution on the periodic grid.
//!
//! All three equations have constant coefficients, so every Fourier mode
//! evolves in closed form: a phase rotation for the Schrödinger form and a
//! harmonic-oscillator rotation of `(φ̂, φ̂_t)` for the second-order ones.
//! The Nyquist bin is zeroed on every application.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::{ComplexField, EquationKind, FieldState, Grid1D, LinearState};
use crate::error::Result;
use crate::Complex64;

#[derive(Clone)]
enum Propagator {
    Phase(Vec<Complex64>),
    /// Per bin `(cos ωdt, sin(ωdt)/ω, −ω sin ωdt)`.
    Oscillator(Vec<(f64, f64, f64)>),
}

/// Reusable spectral propagator for a fixed equation, grid and step.
#[derive(Clone)]
pub struct SpectralStepper {
    kind: EquationKind,
    grid: Grid1D,
    dt: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    propagator: Propagator,
}

impl SpectralStepper {
    pub fn new(kind: EquationKind, grid: Grid1D, dt: f64) -> Result<Self> {
        kind.validate()?;
        if !dt.is_finite() {
            return Err(crate::error::invalid("dt", "must be finite"));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n());
        let inverse = planner.plan_fft_inverse(grid.n());
        let propagator = match kind {
            EquationKind::Schrodinger { nu } => Propagator::Phase(
                (0..grid.n())
                    .map(|j| {
                        let k = grid.wavenumber(j);
                        Complex64::from_polar(1.0, -nu * k * k * dt)
                    })
                    .collect(),
            ),
            _ => Propagator::Oscillator(
                (0..grid.n())
                    .map(|j| {
                        let omega = kind.dispersion(grid.wavenumber(j));
                        let (s, c) = (omega * dt).sin_cos();
                        let sinc = if omega == 0.0 { dt } else { s / omega };
                        (c, sinc, -omega * s)
                    })
                    .collect(),
            ),
        };
        Ok(SpectralStepper {
            kind,
            grid,
            dt,
            forward,
            inverse,
            propagator,
        })
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn to_spectrum(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf[self.grid.nyquist_bin()] = Complex64::new(0.0, 0.0);
        buf
    }

    fn to_physical(&self, mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
        self.inverse.process(&mut spectrum);
        let scale = 1.0 / self.grid.n() as f64;
        spectrum.iter_mut().for_each(|v| *v *= scale);
        spectrum
    }

    fn check_grid(&self, grid: &Grid1D) -> Result<()> {
        if *grid != self.grid {
            return Err(crate::Error::GridMismatch(
                "state grid differs from the stepper grid".into(),
            ));
        }
        Ok(())
    }

    /// Advances a bare field by one step (Schrödinger form).
    pub fn step_field(&self, field: &mut ComplexField) -> Result<()> {
        self.check_grid(field.grid())?;
        let Propagator::Phase(factors) = &self.propagator else {
            return LinearState::Field(field.clone()).check_order(&self.kind);
        };
        let mut spec = self.to_spectrum(field.values());
        spec.iter_mut().zip(factors).for_each(|(v, f)| *v *= f);
        *field.values_mut() = self.to_physical(spec);
        field.clock_mut().advance(self.dt);
        Ok(())
    }

    /// Advances a `(φ, φ_t)` state by one step.
    pub fn step_state(&self, state: &mut FieldState) -> Result<()> {
        self.check_grid(state.grid())?;
        let Propagator::Oscillator(rot) = &self.propagator else {
            return LinearState::State(state.clone()).check_order(&self.kind);
        };
        let mut p = self.to_spectrum(state.phi.values());
        let mut q = self.to_spectrum(state.phi_t.values());
        for ((pv, qv), &(c, sinc, ms)) in p.iter_mut().zip(q.iter_mut()).zip(rot) {
            let (p0, q0) = (*pv, *qv);
            *pv = p0 * c + q0 * sinc;
            *qv = p0 * ms + q0 * c;
        }
        *state.phi.values_mut() = self.to_physical(p);
        *state.phi_t.values_mut() = self.to_physical(q);
        state.phi.clock_mut().advance(self.dt);
        state.phi_t.clock = state.phi.clock;
        Ok(())
    }

    pub fn step(&self, state: &mut LinearState) -> Result<()> {
        state.check_order(&self.kind)?;
        match state {
            LinearState::Field(f) => self.step_field(f),
            LinearState::State(s) => self.step_state(s),
        }
    }
}

/// Evolves `state` by `dt` with the exact per-mode propagator.
pub fn evolve_spectral(kind: EquationKind, state: &LinearState, dt: f64) -> Result<LinearState> {
    state.check_order(&kind)?;
    let stepper = SpectralStepper::new(kind, *state.grid(), dt)?;
    let mut out = state.clone();
    stepper.step(&mut out)?;
    Ok(out)
}

/// Evaluates the trigonometric interpolant of `field` at arbitrary `x`.
/// The Nyquist coefficient is split symmetrically between `±n/2`.
pub fn trig_interpolate(field: &ComplexField, xs: &[f64]) -> Vec<Complex64> {
    let grid = *field.grid();
    let n = grid.n();
    let mut spec = field.values().to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut spec);
    let scale = 1.0 / n as f64;
    let nyq = grid.nyquist_bin();
    let k_nyq = grid.wavenumber(nyq);
    xs.iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, c) in spec.iter().enumerate() {
                if j == nyq {
                    acc += c * (k_nyq * x).cos();
                } else {
                    acc += c * Complex64::from_polar(1.0, grid.wavenumber(j) * x);
                }
            }
            acc * scale
        })
        .collect()
}
