//! Periodic 1D complex displacement fields `φ = y + i z` and their linear
//! evolution.
//!
//! Three equations are supported ([`EquationKind`]):
//! - `Wave`: `φ_tt = c² φ_xx`
//! - `Schrodinger`: `φ_t = i ν φ_xx` (the helix `a exp[i(τx − ντ²t)]` is exact)
//! - `KleinGordon`: `φ_tt = c² φ_xx − μ² φ`
//!
//! Each has a spectral backend ([`evolve_spectral`], exact per Fourier mode)
//! and a finite-difference backend ([`step_fd`]).

mod energy;
mod fd;
mod grid;
mod solver;
mod spectral;

use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::error::{require_positive, Error, Result};
use crate::Complex64;

pub use energy::{conserved_quantity, spectral_derivative};
pub use fd::{step_fd, FdState, FdStepper, Leapfrog};
pub(crate) use grid::commensurate_turns;
pub use grid::{make_grid, Grid1D};
pub use solver::FieldSolver;
pub use spectral::{evolve_spectral, trig_interpolate, SpectralStepper};

/// Which discretization a run or a conserved functional refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Spectral,
    Fd,
}

/// Linear equation governing the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "equation", rename_all = "kebab-case")]
pub enum EquationKind {
    Wave { c: f64 },
    Schrodinger { nu: f64 },
    KleinGordon { c: f64, mu: f64 },
}

impl EquationKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EquationKind::Wave { c } => require_positive("c", c),
            EquationKind::Schrodinger { nu } => require_positive("nu", nu),
            EquationKind::KleinGordon { c, mu } => {
                require_positive("c", c)?;
                if mu.is_finite() && mu >= 0.0 {
                    Ok(())
                } else {
                    Err(crate::error::invalid(
                        "mu",
                        format!("must be finite and >= 0, got {mu}"),
                    ))
                }
            }
        }
    }

    pub fn is_second_order(&self) -> bool {
        !matches!(self, EquationKind::Schrodinger { .. })
    }

    /// Closed-form angular frequency of mode `k` on the forward branch
    /// `exp[i(kx − ωt)]`: `c|k|`, `νk²`, or `sqrt(c²k² + μ²)`.
    pub fn dispersion(&self, k: f64) -> f64 {
        match *self {
            EquationKind::Wave { c } => c * k.abs(),
            EquationKind::Schrodinger { nu } => nu * k * k,
            EquationKind::KleinGordon { c, mu } => (c * c * k * k + mu * mu).sqrt(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EquationKind::Wave { .. } => "wave",
            EquationKind::Schrodinger { .. } => "schrodinger",
            EquationKind::KleinGordon { .. } => "klein-gordon",
        }
    }
}

/// Complex displacement sampled on a periodic grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid1D,
    values: Vec<Complex64>,
    clock: Clock,
}

impl ComplexField {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, clock: Clock) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.n()
            )));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(crate::error::invalid(
                "values",
                "field contains non-finite entries",
            ));
        }
        Ok(ComplexField {
            grid,
            values,
            clock,
        })
    }

    pub fn zeros(grid: Grid1D, t: f64) -> Self {
        ComplexField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
            clock: Clock::at(t),
        }
    }

    /// Samples `f(x_j)` on the grid.
    pub fn from_fn(grid: Grid1D, t: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        ComplexField::new(grid, values, Clock::at(t))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn t(&self) -> f64 {
        self.clock.time()
    }

    pub fn clock(&self) -> Clock {
        self.clock
    }

    /// `Σ |φ_j|² dx`.
    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    /// Discrete Fourier coefficient `(1/n) Σ φ_j exp(−i k x_j)`.
    pub fn mode_amplitude(&self, k: f64) -> Complex64 {
        let n = self.grid.n() as f64;
        self.grid
            .nodes()
            .zip(&self.values)
            .map(|(x, v)| v * Complex64::from_polar(1.0, -k * x))
            .sum::<Complex64>()
            / n
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>, clock: Clock) -> Self {
        ComplexField {
            grid: self.grid,
            values,
            clock,
        }
    }

    pub(crate) fn values_mut(&mut self) -> &mut Vec<Complex64> {
        &mut self.values
    }

    pub(crate) fn clock_mut(&mut self) -> &mut Clock {
        &mut self.clock
    }
}

/// `(φ, ∂φ/∂t)` for the second-order equations.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    phi: ComplexField,
    phi_t: ComplexField,
}

impl FieldState {
    pub fn new(phi: ComplexField, phi_t: ComplexField) -> Result<Self> {
        if phi.grid != phi_t.grid {
            return Err(Error::GridMismatch(
                "phi and phi_t live on different grids".into(),
            ));
        }
        if phi.t() != phi_t.t() {
            return Err(Error::GridMismatch(format!(
                "phi at t={} but phi_t at t={}",
                phi.t(),
                phi_t.t()
            )));
        }
        let phi_t = ComplexField {
            clock: phi.clock,
            ..phi_t
        };
        Ok(FieldState { phi, phi_t })
    }

    /// Single travelling mode `a exp[i(kx − ωt)]` on the forward branch,
    /// i.e. `φ_t = −iωφ` with `ω = kind.dispersion(k)`.
    pub fn forward_mode(kind: &EquationKind, grid: Grid1D, amplitude: f64, k: f64) -> Result<Self> {
        let omega = kind.dispersion(k);
        let phi = ComplexField::from_fn(grid, 0.0, |x| Complex64::from_polar(amplitude, k * x))?;
        let phi_t = phi.with_values(
            phi.values
                .iter()
                .map(|v| Complex64::new(0.0, -omega) * v)
                .collect(),
            phi.clock,
        );
        FieldState::new(phi, phi_t)
    }

    pub fn zeros(grid: Grid1D, t: f64) -> Self {
        FieldState {
            phi: ComplexField::zeros(grid, t),
            phi_t: ComplexField::zeros(grid, t),
        }
    }

    pub fn phi(&self) -> &ComplexField {
        &self.phi
    }

    pub fn phi_t(&self) -> &ComplexField {
        &self.phi_t
    }

    pub fn grid(&self) -> &Grid1D {
        &self.phi.grid
    }

    pub fn t(&self) -> f64 {
        self.phi.t()
    }

    pub(crate) fn from_parts(phi: ComplexField, phi_t: ComplexField) -> Self {
        FieldState { phi, phi_t }
    }
}

/// Either a bare field (first-order Schrödinger form) or a `(φ, φ_t)` state.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearState {
    Field(ComplexField),
    State(FieldState),
}

impl LinearState {
    pub fn phi(&self) -> &ComplexField {
        match self {
            LinearState::Field(f) => f,
            LinearState::State(s) => s.phi(),
        }
    }

    pub fn t(&self) -> f64 {
        self.phi().t()
    }

    pub fn grid(&self) -> &Grid1D {
        self.phi().grid()
    }

    pub(crate) fn check_order(&self, kind: &EquationKind) -> Result<()> {
        match (kind.is_second_order(), self) {
            (true, LinearState::State(_)) | (false, LinearState::Field(_)) => Ok(()),
            (true, LinearState::Field(_)) => Err(Error::OrderMismatch(format!(
                "{} needs a (phi, phi_t) state",
                kind.name()
            ))),
            (false, LinearState::State(_)) => Err(Error::OrderMismatch(
                "schrodinger evolves a bare field, not a (phi, phi_t) state".into(),
            )),
        }
    }
}

impl From<ComplexField> for LinearState {
    fn from(f: ComplexField) -> Self {
        LinearState::Field(f)
    }
}

impl From<FieldState> for LinearState {
    fn from(s: FieldState) -> Self {
        LinearState::State(s)
    }
}
