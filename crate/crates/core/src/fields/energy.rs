use rustfft::FftPlanner;

use super::{Backend, ComplexField, EquationKind, LinearState};
use crate::error::Result;
use crate::Complex64;

/// `∂φ/∂x` through the FFT, Nyquist bin dropped.
pub fn spectral_derivative(field: &ComplexField) -> Vec<Complex64> {
    let grid = *field.grid();
    let n = grid.n();
    let mut planner = FftPlanner::new();
    let mut buf = field.values().to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (j, v) in buf.iter_mut().enumerate() {
        *v *= if j == grid.nyquist_bin() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, grid.wavenumber(j))
        };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Forward difference `(φ_{j+1} − φ_j)/dx`, centered at the half node.
fn half_node_derivative(field: &ComplexField) -> Vec<Complex64> {
    let u = field.values();
    let n = u.len();
    let dx = field.grid().dx();
    (0..n).map(|j| (u[(j + 1) % n] - u[j]) / dx).collect()
}

/// Energy or norm functional of a snapshot.
///
/// - Schrödinger: `N = Σ|φ|² dx`
/// - Wave: `E = Σ(|φ_t|² + c²|Dφ|²) dx`
/// - Klein-Gordon: `E = Σ(|φ_t|² + c²|Dφ|² + μ²|φ|²) dx`
///
/// `D` is the spectral derivative for [`Backend::Spectral`] and the
/// half-node difference for [`Backend::Fd`]. For a running leapfrog use
/// [`super::FdState::conserved_quantity`], which is exactly conserved.
pub fn conserved_quantity(
    kind: &EquationKind,
    state: &LinearState,
    backend: Backend,
) -> Result<f64> {
    state.check_order(kind)?;
    let (c, mu) = match *kind {
        EquationKind::Schrodinger { .. } => return Ok(state.phi().norm_squared()),
        EquationKind::Wave { c } => (c, 0.0),
        EquationKind::KleinGordon { c, mu } => (c, mu),
    };
    let LinearState::State(s) = state else {
        unreachable!("order checked above")
    };
    let d = match backend {
        Backend::Spectral => spectral_derivative(s.phi()),
        Backend::Fd => half_node_derivative(s.phi()),
    };
    let sum: f64 = s
        .phi()
        .values()
        .iter()
        .zip(s.phi_t().values())
        .zip(&d)
        .map(|((p, pt), dp)| pt.norm_sqr() + c * c * dp.norm_sqr() + mu * mu * p.norm_sqr())
        .sum();
    Ok(sum * s.grid().dx())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_grid, FieldState};
    use crate::model::{helix_field_snapshot, HelixSpec};
    use std::f64::consts::PI;

    #[test]
    fn zero_state_has_zero_energy() {
        let grid = make_grid(16, 2.0 * PI).unwrap();
        let s = LinearState::State(FieldState::zeros(grid, 0.0));
        let kg = EquationKind::KleinGordon { c: 1.0, mu: 1.0 };
        assert_eq!(conserved_quantity(&kg, &s, Backend::Spectral).unwrap(), 0.0);
        assert_eq!(conserved_quantity(&kg, &s, Backend::Fd).unwrap(), 0.0);
    }

    #[test]
    fn schrodinger_helix_norm() {
        for n in [16, 64, 256] {
            let grid = make_grid(n, 2.0 * PI).unwrap();
            let f = helix_field_snapshot(&HelixSpec::new(1.0, 1.0, 0.0).unwrap(), 0.5, &grid, 0.0)
                .unwrap();
            let q = conserved_quantity(
                &EquationKind::Schrodinger { nu: 0.5 },
                &f.into(),
                Backend::Spectral,
            )
            .unwrap();
            assert!((q - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn klein_gordon_helix_energy_matches_direct_sum() {
        // ω² = c²τ² + μ² = 2, E = 2π (ω² + c²τ² + μ²) = 8π.
        let grid = make_grid(64, 2.0 * PI).unwrap();
        let kind = EquationKind::KleinGordon { c: 1.0, mu: 1.0 };
        let s = FieldState::forward_mode(&kind, grid, 1.0, 1.0).unwrap();
        // Oracle: |φ_t|² = ω², |φ_x|² = τ², |φ|² = 1 at every node.
        let oracle: f64 = (0..64).map(|_| 2.0 + 1.0 + 1.0).sum::<f64>() * grid.dx();
        let e = conserved_quantity(&kind, &s.into(), Backend::Spectral).unwrap();
        assert!((e - oracle).abs() < 1e-12);
        assert!((e - 8.0 * PI).abs() < 1e-12);
    }
}
