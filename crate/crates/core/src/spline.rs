//! Periodic cubic spline through curve nodes, parameterized by cumulative
//! chord length. For an x-periodic curve the linear ramp `shift · t / T` is
//! removed before fitting so the interpolated part is genuinely periodic.

use crate::error::{Error, Result};
use crate::linalg::solve_cyclic;
use crate::Vec3;

pub(crate) struct PeriodicSpline {
    /// `n + 1` knots, `knots[0] = 0`, `knots[n] = period`.
    knots: Vec<f64>,
    /// Periodic part at each knot.
    values: Vec<Vec3>,
    /// Second derivatives of the periodic part.
    second: Vec<Vec3>,
    shift: Vec3,
}

impl PeriodicSpline {
    /// `nodes[n]` is implied as `nodes[0] + shift`.
    pub fn through(nodes: &[Vec3], shift: Vec3) -> Result<Self> {
        let n = nodes.len();
        let mut knots = Vec::with_capacity(n + 1);
        knots.push(0.0);
        for j in 0..n {
            let next = if j + 1 < n {
                nodes[j + 1]
            } else {
                nodes[0] + shift
            };
            let h = (next - nodes[j]).norm();
            if !(h > 0.0) {
                return Err(Error::DegenerateCurve(format!(
                    "nodes {j} and {} coincide",
                    (j + 1) % n
                )));
            }
            knots.push(knots[j] + h);
        }
        let period = knots[n];
        let values: Vec<Vec3> = nodes
            .iter()
            .zip(&knots)
            .map(|(r, &t)| r - shift * (t / period))
            .collect();

        let h: Vec<f64> = (0..n).map(|i| knots[i + 1] - knots[i]).collect();
        let sub: Vec<f64> = (0..n).map(|i| h[(i + n - 1) % n]).collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * (h[(i + n - 1) % n] + h[i])).collect();
        let sup = h.clone();
        let mut second = vec![Vec3::zeros(); n];
        for axis in 0..3 {
            let rhs: Vec<f64> = (0..n)
                .map(|i| {
                    let prev = (i + n - 1) % n;
                    let next = (i + 1) % n;
                    6.0 * ((values[next][axis] - values[i][axis]) / h[i]
                        - (values[i][axis] - values[prev][axis]) / h[prev])
                })
                .collect();
            for (m, v) in second.iter_mut().zip(solve_cyclic(&sub, &diag, &sup, &rhs)) {
                m[axis] = v;
            }
        }
        Ok(PeriodicSpline {
            knots,
            values,
            second,
            shift,
        })
    }

    pub fn period(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    /// Position and first derivative at parameter `t` (any real value).
    pub fn eval(&self, t: f64) -> (Vec3, Vec3) {
        let n = self.values.len();
        let period = self.period();
        let tw = t.rem_euclid(period);
        let i = (self.knots.partition_point(|&k| k <= tw).max(1) - 1).min(n - 1);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - tw) / h;
        let b = 1.0 - a;
        let (d0, d1) = (self.values[i], self.values[(i + 1) % n]);
        let (m0, m1) = (self.second[i], self.second[(i + 1) % n]);
        let pos = d0 * a + d1 * b + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0);
        let der = (d1 - d0) / h - m0 * ((3.0 * a * a - 1.0) * h / 6.0)
            + m1 * ((3.0 * b * b - 1.0) * h / 6.0);
        (pos + self.shift * (t / period), der + self.shift / period)
    }
}
