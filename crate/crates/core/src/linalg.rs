//! Cyclic tridiagonal solves (periodic Crank-Nicolson, periodic splines).

use num_traits::Num;

/// Solves the tridiagonal system `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`
/// with `sub[0]` and `sup[n-1]` ignored. Thomas algorithm without pivoting;
/// callers guarantee diagonal dominance.
fn solve_tridiagonal<T: Num + Copy>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    let mut c_prime = vec![T::zero(); n];
    let mut x = vec![T::zero(); n];
    let mut denom = diag[0];
    c_prime[0] = sup[0] / denom;
    x[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c_prime[i - 1];
        c_prime[i] = sup[i] / denom;
        x[i] = (rhs[i] - sub[i] * x[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        x[i] = x[i] - c_prime[i] * x[i + 1];
    }
    x
}

/// Solves a periodic tridiagonal system where row 0 couples to `x[n-1]`
/// through `sub[0]` and row `n-1` couples to `x[0]` through `sup[n-1]`.
/// Sherman-Morrison correction on top of the Thomas algorithm.
pub(crate) fn solve_cyclic<T: Num + Copy>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    assert!(n >= 3 && sub.len() == n && sup.len() == n && rhs.len() == n);
    let corner_top = sub[0]; // row 0, column n-1
    let corner_bottom = sup[n - 1]; // row n-1, column 0
    let gamma = T::zero() - diag[0];
    let mut modified = diag.to_vec();
    modified[0] = diag[0] - gamma;
    modified[n - 1] = diag[n - 1] - corner_bottom * corner_top / gamma;

    let x = solve_tridiagonal(sub, &modified, sup, rhs);
    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = corner_bottom;
    let z = solve_tridiagonal(sub, &modified, sup, &u);

    let fact =
        (x[0] + corner_top * x[n - 1] / gamma) / (T::one() + z[0] + corner_top * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(&xi, &zi)| xi - fact * zi).collect()
}
