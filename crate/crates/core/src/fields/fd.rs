//! Finite-difference backend.
//!
//! - Schrödinger: Crank-Nicolson with the 3-point Laplacian, solved as a
//!   cyclic tridiagonal system. Unitary, unconditionally stable.
//! - Wave / Klein-Gordon: three-level leapfrog
//!   `φ^{n+1} = 2φ^n − φ^{n−1} + dt² (c² Lφ^n − μ² φ^n)`.
//!
//! A leapfrog run is started from `(φ, φ_t)` by evolving the state back one
//! step with the exact spectral propagator; with `c dt = dx` this makes the
//! scheme transport travelling waves exactly.

use super::{evolve_spectral, ComplexField, EquationKind, FieldState, Grid1D, LinearState};
use crate::error::{Error, Result};
use crate::linalg::solve_cyclic;
use crate::Complex64;

/// Two stored time levels of a leapfrog run.
#[derive(Debug, Clone, PartialEq)]
pub struct Leapfrog {
    prev: Vec<Complex64>,
    current: ComplexField,
    dt: f64,
}

impl Leapfrog {
    pub fn current(&self) -> &ComplexField {
        &self.current
    }

    pub fn previous(&self) -> &[Complex64] {
        &self.prev
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `(φ^n, φ_t^n)` with `φ_t^n = (φ^{n+1} − φ^{n−1}) / 2dt`, where the next
    /// level is the one the scheme would produce.
    pub fn field_state(&self, kind: &EquationKind) -> FieldState {
        let dt = self.dt;
        let accel = acceleration(kind, &self.current);
        let phi_t = self
            .current
            .values()
            .iter()
            .zip(&self.prev)
            .zip(&accel)
            .map(|((u, p), a)| (u - p) / dt + a * (0.5 * dt))
            .collect();
        FieldState::from_parts(
            self.current.clone(),
            self.current.with_values(phi_t, self.current.clock()),
        )
    }

    /// Discrete energy conserved exactly (to round-off) by the leapfrog:
    /// `Σ [ |φ^n − φ^{n−1}|²/dt² + c² Re(D₊φ^n · conj D₊φ^{n−1}) + μ² Re(φ^n conj φ^{n−1}) ] dx`
    /// with `D₊` the forward difference. Positive under the stability bound.
    pub fn energy(&self, kind: &EquationKind) -> f64 {
        let (c, mu) = second_order_coefficients(kind);
        let grid = self.current.grid();
        let dx = grid.dx();
        let n = grid.n();
        let u = self.current.values();
        let p = &self.prev;
        let mut sum = 0.0;
        for j in 0..n {
            let jp = (j + 1) % n;
            let vel = (u[j] - p[j]) / self.dt;
            let du = (u[jp] - u[j]) / dx;
            let dp = (p[jp] - p[j]) / dx;
            sum += vel.norm_sqr() + c * c * (du * dp.conj()).re + mu * mu * (u[j] * p[j].conj()).re;
        }
        sum * dx
    }
}

/// State carried by a finite-difference run.
#[derive(Debug, Clone, PartialEq)]
pub enum FdState {
    First(ComplexField),
    Second(Leapfrog),
}

impl FdState {
    /// Prepares an FD run from a snapshot.
    pub fn start(kind: &EquationKind, state: &LinearState, dt: f64) -> Result<Self> {
        state.check_order(kind)?;
        match state {
            LinearState::Field(f) => Ok(FdState::First(f.clone())),
            LinearState::State(s) => {
                let back = evolve_spectral(*kind, state, -dt)?;
                Ok(FdState::Second(Leapfrog {
                    prev: back.phi().values().to_vec(),
                    current: s.phi().clone(),
                    dt,
                }))
            }
        }
    }

    pub fn phi(&self) -> &ComplexField {
        match self {
            FdState::First(f) => f,
            FdState::Second(l) => &l.current,
        }
    }

    pub fn t(&self) -> f64 {
        self.phi().t()
    }

    pub fn to_linear(&self, kind: &EquationKind) -> LinearState {
        match self {
            FdState::First(f) => LinearState::Field(f.clone()),
            FdState::Second(l) => LinearState::State(l.field_state(kind)),
        }
    }

    /// Conserved functional of the FD backend: `Σ|φ|² dx` for Schrödinger,
    /// [`Leapfrog::energy`] otherwise.
    pub fn conserved_quantity(&self, kind: &EquationKind) -> f64 {
        match self {
            FdState::First(f) => f.norm_squared(),
            FdState::Second(l) => l.energy(kind),
        }
    }
}

fn second_order_coefficients(kind: &EquationKind) -> (f64, f64) {
    match *kind {
        EquationKind::Wave { c } => (c, 0.0),
        EquationKind::KleinGordon { c, mu } => (c, mu),
        EquationKind::Schrodinger { .. } => (0.0, 0.0),
    }
}

/// `c² Lφ − μ² φ` with the 3-point periodic Laplacian.
fn acceleration(kind: &EquationKind, field: &ComplexField) -> Vec<Complex64> {
    let (c, mu) = second_order_coefficients(kind);
    let u = field.values();
    let n = u.len();
    let inv_dx2 = 1.0 / (field.grid().dx() * field.grid().dx());
    (0..n)
        .map(|j| {
            let lap = (u[(j + 1) % n] - u[j] * 2.0 + u[(j + n - 1) % n]) * inv_dx2;
            lap * (c * c) - u[j] * (mu * mu)
        })
        .collect()
}

#[derive(Clone)]
enum Scheme {
    CrankNicolson {
        sub: Vec<Complex64>,
        diag: Vec<Complex64>,
        sup: Vec<Complex64>,
        /// `i ν dt / (2 dx²)`
        half_alpha: Complex64,
    },
    Leapfrog,
}

/// Reusable FD stepper for a fixed equation, grid and step.
#[derive(Clone)]
pub struct FdStepper {
    kind: EquationKind,
    grid: Grid1D,
    dt: f64,
    scheme: Scheme,
}

impl FdStepper {
    pub fn new(kind: EquationKind, grid: Grid1D, dt: f64) -> Result<Self> {
        kind.validate()?;
        crate::error::require_positive("dt", dt)?;
        let dx = grid.dx();
        let scheme = match kind {
            EquationKind::Schrodinger { nu } => {
                let half_alpha = Complex64::new(0.0, nu * dt / (2.0 * dx * dx));
                let n = grid.n();
                Scheme::CrankNicolson {
                    sub: vec![-half_alpha; n],
                    diag: vec![Complex64::new(1.0, 0.0) + half_alpha * 2.0; n],
                    sup: vec![-half_alpha; n],
                    half_alpha,
                }
            }
            EquationKind::Wave { c } | EquationKind::KleinGordon { c, .. } => {
                let (_, mu) = second_order_coefficients(&kind);
                let cfl = c * dt / dx;
                // Highest grid mode: dt² (4c²/dx² + μ²) ≤ 4.
                let bound = dt * dt * (4.0 * c * c / (dx * dx) + mu * mu);
                if bound > 4.0 * (1.0 + 1e-12) {
                    return Err(Error::Stability(format!(
                        "leapfrog needs dt²(4c²/dx² + μ²) ≤ 4; c·dt/dx = {cfl:.6}, μ·dt = {:.6}, \
                         dt²(4c²/dx² + μ²) = {bound:.6}",
                        mu * dt
                    )));
                }
                Scheme::Leapfrog
            }
        };
        Ok(FdStepper {
            kind,
            grid,
            dt,
            scheme,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, state: &mut FdState) -> Result<()> {
        if *state.phi().grid() != self.grid {
            return Err(Error::GridMismatch(
                "state grid differs from the stepper grid".into(),
            ));
        }
        match (&self.scheme, state) {
            (
                Scheme::CrankNicolson {
                    sub,
                    diag,
                    sup,
                    half_alpha,
                },
                FdState::First(field),
            ) => {
                let u = field.values();
                let n = u.len();
                let rhs: Vec<Complex64> = (0..n)
                    .map(|j| {
                        let lap = u[(j + 1) % n] - u[j] * 2.0 + u[(j + n - 1) % n];
                        u[j] + half_alpha * lap
                    })
                    .collect();
                *field.values_mut() = solve_cyclic(sub, diag, sup, &rhs);
                field.clock_mut().advance(self.dt);
                Ok(())
            }
            (Scheme::Leapfrog, FdState::Second(lf)) => {
                if lf.dt != self.dt {
                    return Err(Error::Stability(format!(
                        "leapfrog state was started with dt = {} but stepped with dt = {}",
                        lf.dt, self.dt
                    )));
                }
                let accel = acceleration(&self.kind, &lf.current);
                let dt2 = self.dt * self.dt;
                let next: Vec<Complex64> = lf
                    .current
                    .values()
                    .iter()
                    .zip(&lf.prev)
                    .zip(&accel)
                    .map(|((u, p), a)| u * 2.0 - p + a * dt2)
                    .collect();
                let cur = std::mem::replace(lf.current.values_mut(), next);
                lf.prev = cur;
                lf.current.clock_mut().advance(self.dt);
                Ok(())
            }
            (_, state) => state.to_linear(&self.kind).check_order(&self.kind),
        }
    }
}

/// One finite-difference step of `state`.
pub fn step_fd(kind: EquationKind, state: &FdState, dt: f64) -> Result<FdState> {
    let stepper = FdStepper::new(kind, *state.phi().grid(), dt)?;
    let mut out = state.clone();
    stepper.step(&mut out)?;
    Ok(out)
}
