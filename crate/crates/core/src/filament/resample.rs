use crate::error::{Error, Result};
use crate::spline::PeriodicSpline;
use crate::Vec3;

use super::Curve3D;

/// Chord lengths within this relative spread are already uniform.
const UNIFORM_TOL: f64 = 1e-12;
const MAX_ITER: usize = 60;

/// Redistributes the nodes to equal chord spacing along a periodic cubic
/// spline through the current nodes. Node 0 stays fixed.
///
/// Returns the input unchanged when it is already uniformly spaced.
pub fn resample_arclength(curve: &Curve3D) -> Result<Curve3D> {
    let seg = curve.segment_lengths();
    let (lo, hi) = seg.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| {
        (lo.min(s), hi.max(s))
    });
    if hi - lo <= UNIFORM_TOL * hi {
        return Ok(curve.clone());
    }
    let n = curve.len();
    let spline = PeriodicSpline::through(curve.nodes(), curve.wrap_shift())?;
    let period = spline.period();

    // s_n(h) is close to proportional to h, so a secant iteration on the
    // closing mismatch converges in a handful of passes.
    let mut h0 = period / n as f64;
    let (mut nodes, mut end0) = march(&spline, n, h0)?;
    if (end0 - period).abs() > 1e-14 * period {
        let mut h1 = h0 * period / end0;
        let mut converged = false;
        for _ in 0..MAX_ITER {
            let (next, end1) = march(&spline, n, h1)?;
            nodes = next;
            let f1 = end1 - period;
            if f1.abs() <= 1e-14 * period {
                converged = true;
                break;
            }
            let f0 = end0 - period;
            let h2 = if f1 != f0 {
                h1 - f1 * (h1 - h0) / (f1 - f0)
            } else {
                h1 * period / end1
            };
            h0 = h1;
            end0 = end1;
            h1 = h2;
        }
        if !converged {
            return Err(Error::DegenerateCurve(
                "equal-chord resampling did not converge".into(),
            ));
        }
    }
    Curve3D::with_clock(nodes, curve.topology(), curve.clock())
}

/// Walks `n` chords of length `h` along the spline from parameter 0 and
/// returns the first `n` points and the parameter reached by the last chord.
fn march(spline: &PeriodicSpline, n: usize, h: f64) -> Result<(Vec<Vec3>, f64)> {
    let mut points = Vec::with_capacity(n);
    let (mut p, _) = spline.eval(0.0);
    let mut s = 0.0;
    points.push(p);
    for k in 1..=n {
        let mut u = s + h;
        for iter in 0.. {
            let (q, dq) = spline.eval(u);
            let d = q - p;
            let g = d.norm_squared() - h * h;
            let dg = 2.0 * d.dot(&dq);
            if !(dg > 0.0) {
                return Err(Error::DegenerateCurve(format!(
                    "curve folds back near node {k}; cannot place equal chords"
                )));
            }
            let step = g / dg;
            u -= step;
            if step.abs() <= 1e-15 * (1.0 + u.abs()) || iter >= MAX_ITER {
                break;
            }
        }
        if !(u > s) || u - s > 4.0 * h {
            return Err(Error::DegenerateCurve(format!(
                "chord search failed near node {k}"
            )));
        }
        s = u;
        if k < n {
            p = spline.eval(s).0;
            points.push(p);
        }
    }
    Ok((points, s))
}
