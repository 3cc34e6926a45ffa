use num_complex::Complex64;

use crate::error::Result;

use super::{
    conserved_quantity, Backend, ComplexField, EquationKind, FdState, FdStepper, FieldState,
    Grid1D, LinearState, SpectralStepper,
};

/// A linear-equation run on either backend behind one stepping interface.
#[derive(Clone)]
pub enum FieldSolver {
    Spectral {
        stepper: SpectralStepper,
        state: LinearState,
    },
    Fd {
        stepper: FdStepper,
        state: FdState,
        kind: EquationKind,
    },
}

impl FieldSolver {
    pub fn new(
        kind: EquationKind,
        backend: Backend,
        initial: LinearState,
        dt: f64,
    ) -> Result<Self> {
        kind.validate()?;
        initial.check_order(&kind)?;
        let grid = *initial.grid();
        Ok(match backend {
            Backend::Spectral => FieldSolver::Spectral {
                stepper: SpectralStepper::new(kind, grid, dt)?,
                state: initial,
            },
            Backend::Fd => FieldSolver::Fd {
                stepper: FdStepper::new(kind, grid, dt)?,
                state: FdState::start(&kind, &initial, dt)?,
                kind,
            },
        })
    }

    pub fn step(&mut self) -> Result<()> {
        match self {
            FieldSolver::Spectral { stepper, state } => stepper.step(state),
            FieldSolver::Fd { stepper, state, .. } => stepper.step(state),
        }
    }

    pub fn phi(&self) -> &ComplexField {
        match self {
            FieldSolver::Spectral { state, .. } => state.phi(),
            FieldSolver::Fd { state, .. } => state.phi(),
        }
    }

    pub fn t(&self) -> f64 {
        self.phi().t()
    }

    pub fn kind(&self) -> EquationKind {
        match self {
            FieldSolver::Spectral { stepper, .. } => stepper.kind(),
            FieldSolver::Fd { kind, .. } => *kind,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            FieldSolver::Spectral { .. } => Backend::Spectral,
            FieldSolver::Fd { .. } => Backend::Fd,
        }
    }

    /// Norm for Schrödinger, energy for the second-order equations, each in
    /// the form the backend conserves.
    pub fn conserved_quantity(&self) -> Result<f64> {
        match self {
            FieldSolver::Spectral { stepper, state } => {
                conserved_quantity(&stepper.kind(), state, Backend::Spectral)
            }
            FieldSolver::Fd { state, kind, .. } => Ok(state.conserved_quantity(kind)),
        }
    }
}

impl LinearState {
    /// `a exp(ikx)` on the forward branch, shaped for `kind`'s order.
    pub fn forward_mode(kind: &EquationKind, grid: Grid1D, amplitude: f64, k: f64) -> Result<Self> {
        if kind.is_second_order() {
            Ok(FieldState::forward_mode(kind, grid, amplitude, k)?.into())
        } else {
            Ok(
                ComplexField::from_fn(grid, 0.0, |x| Complex64::from_polar(amplitude, k * x))?
                    .into(),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn both_backends_track_a_schrodinger_mode() {
        let kind = EquationKind::Schrodinger { nu: 0.5 };
        let grid = make_grid(64, 2.0 * PI).unwrap();
        for backend in [Backend::Spectral, Backend::Fd] {
            let init = LinearState::forward_mode(&kind, grid, 1.0, 1.0).unwrap();
            let mut s = FieldSolver::new(kind, backend, init, 0.01).unwrap();
            let q0 = s.conserved_quantity().unwrap();
            for _ in 0..100 {
                s.step().unwrap();
            }
            assert!((s.t() - 1.0).abs() < 1e-12);
            assert!((s.conserved_quantity().unwrap() - q0).abs() < 1e-12 * q0);
            let expected = Complex64::from_polar(1.0, -0.5);
            assert!((s.phi().mode_amplitude(1.0) - expected).norm() < 1e-3);
            assert_eq!(s.backend(), backend);
        }
    }

    #[test]
    fn order_checked() {
        let grid = make_grid(16, 2.0 * PI).unwrap();
        let init = LinearState::Field(ComplexField::zeros(grid, 0.0));
        assert!(
            FieldSolver::new(EquationKind::Wave { c: 1.0 }, Backend::Spectral, init, 0.1).is_err()
        );
    }
}
