use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};

/// Uniform periodic grid `x_j = j * L / n`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n: usize,
    length: f64,
}

/// Builds a periodic grid. `n` must be even and at least 8.
pub fn make_grid(n: usize, length: f64) -> Result<Grid1D> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(invalid(
            "n",
            format!("node count must be even and >= 8, got {n}"),
        ));
    }
    require_positive("length", length)?;
    Ok(Grid1D { n, length })
}

impl Grid1D {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.x(j))
    }

    /// Signed mode number of FFT bin `j` (`j > n/2` maps to `j - n`).
    /// The Nyquist bin `n/2` is reported as `+n/2`.
    pub fn mode_number(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Angular wavenumber of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        2.0 * PI * self.mode_number(j) as f64 / self.length
    }

    pub fn nyquist_bin(&self) -> usize {
        self.n / 2
    }

    /// FFT bin holding wavenumber `k`; errors if `k L / 2π` is not an integer
    /// or the mode is not representable.
    pub fn bin_of(&self, k: f64) -> Result<usize> {
        let turns = commensurate_turns(k, self.length)?;
        let m = turns.round() as i64;
        let half = (self.n / 2) as i64;
        if m.abs() >= half {
            return Err(invalid(
                "k",
                format!("mode number {m} is at or beyond Nyquist ({half})"),
            ));
        }
        Ok(if m >= 0 {
            m as usize
        } else {
            (m + self.n as i64) as usize
        })
    }
}

/// Returns `k L / 2π` if it is an integer to within 1e-9 relative.
pub(crate) fn commensurate_turns(k: f64, length: f64) -> Result<f64> {
    let turns = k * length / (2.0 * PI);
    if !turns.is_finite() || (turns - turns.round()).abs() > 1e-9 * turns.abs().max(1.0) {
        return Err(Error::Incommensurate {
            tau: k,
            length,
            turns,
        });
    }
    Ok(turns.round())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_nodes() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        assert!((g.dx() - PI / 4.0).abs() < 1e-15);
        assert_eq!(g.x(0), 0.0);
        assert!((g.x(7) - (2.0 * PI - g.dx())).abs() < 1e-15);
        let g = make_grid(256, 2.0 * PI).unwrap();
        assert!((g.x(128) - PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(make_grid(7, 1.0).is_err());
        assert!(make_grid(6, 1.0).is_err());
        assert!(make_grid(9, 1.0).is_err());
        assert!(make_grid(16, 0.0).is_err());
        assert!(make_grid(16, -1.0).is_err());
        assert!(make_grid(16, f64::NAN).is_err());
    }

    #[test]
    fn signed_wavenumbers() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let ks: Vec<i64> = (0..8).map(|j| g.mode_number(j)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.bin_of(2.0).unwrap(), 2);
        assert_eq!(g.bin_of(-1.0).unwrap(), 7);
        assert!(g.bin_of(4.0).is_err());
        assert!(g.bin_of(1.5).is_err());
    }
}
