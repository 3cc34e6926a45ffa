use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::error::{invalid, require_positive, Error, Result};
use crate::fields::{commensurate_turns, ComplexField};
use crate::model::HelixSpec;
use crate::Vec3;

/// How the last node connects back to the first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Topology {
    /// Infinite filament along `x`: node `n` is node `0` shifted by `(shift, 0, 0)`.
    Periodic { shift: f64 },
    /// Closed loop (node `n` is node `0`).
    Closed,
}

/// Ordered filament nodes with a time stamp.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve3D {
    nodes: Vec<Vec3>,
    topology: Topology,
    clock: Clock,
}

impl Curve3D {
    pub fn new(nodes: Vec<Vec3>, topology: Topology, t: f64) -> Result<Self> {
        Curve3D::with_clock(nodes, topology, Clock::at(t))
    }

    pub fn with_clock(nodes: Vec<Vec3>, topology: Topology, clock: Clock) -> Result<Self> {
        if nodes.len() < 8 {
            return Err(invalid(
                "nodes",
                format!("need at least 8 nodes, got {}", nodes.len()),
            ));
        }
        if let Topology::Periodic { shift } = topology {
            require_positive("shift", shift)?;
        }
        if nodes.iter().any(|r| !r.iter().all(|v| v.is_finite())) {
            return Err(invalid("nodes", "non-finite coordinates"));
        }
        let curve = Curve3D {
            nodes,
            topology,
            clock,
        };
        for j in 0..curve.len() {
            if curve.segment(j).norm() == 0.0 {
                return Err(Error::DegenerateCurve(format!(
                    "nodes {j} and {} coincide",
                    (j + 1) % curve.len()
                )));
            }
        }
        Ok(curve)
    }

    /// Unchecked constructor for intermediate stages of a time step.
    pub(crate) fn from_parts(nodes: Vec<Vec3>, topology: Topology, clock: Clock) -> Self {
        Curve3D {
            nodes,
            topology,
            clock,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn t(&self) -> f64 {
        self.clock.time()
    }

    pub fn clock(&self) -> Clock {
        self.clock
    }

    /// Translation applied when wrapping past the last node.
    pub fn wrap_shift(&self) -> Vec3 {
        match self.topology {
            Topology::Periodic { shift } => Vec3::new(shift, 0.0, 0.0),
            Topology::Closed => Vec3::zeros(),
        }
    }

    /// Node `j` for any integer index, unrolling the topology.
    pub fn node(&self, j: isize) -> Vec3 {
        let n = self.nodes.len() as isize;
        let wraps = j.div_euclid(n);
        self.nodes[j.rem_euclid(n) as usize] + self.wrap_shift() * wraps as f64
    }

    /// `r_{j+1} − r_j`, including the wrap segment for `j = n − 1`.
    pub fn segment(&self, j: usize) -> Vec3 {
        self.node(j as isize + 1) - self.nodes[j]
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.segment(j).norm()).collect()
    }

    /// Polygon length of one period (or of the closed loop).
    pub fn total_length(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    /// `(index, x, y, z)` rows for tabular export.
    pub fn records(&self) -> impl Iterator<Item = (usize, f64, f64, f64)> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .map(|(j, r)| (j, r.x, r.y, r.z))
    }

    /// Renders `φ = y + i z` on its grid as the curve `(x_j, Re φ_j, Im φ_j)`.
    pub fn from_field(field: &ComplexField) -> Result<Self> {
        let nodes = field
            .grid()
            .nodes()
            .zip(field.values())
            .map(|(x, v)| Vec3::new(x, v.re, v.im))
            .collect();
        Curve3D::with_clock(
            nodes,
            Topology::Periodic {
                shift: field.grid().length(),
            },
            field.clock(),
        )
    }

    pub(crate) fn replace_nodes(&self, nodes: Vec<Vec3>, clock: Clock) -> Self {
        Curve3D::from_parts(nodes, self.topology, clock)
    }
}

/// `r_j = (x_j, a cos(τx_j + phase0), a sin(τx_j + phase0))` on `x_j = jL/n`.
/// Requires an integer number of turns in `L` and at least 16 nodes per turn.
pub fn make_helix_curve(spec: &HelixSpec, length: f64, n: usize) -> Result<Curve3D> {
    spec.validate()?;
    require_positive("length", length)?;
    let turns = commensurate_turns(spec.tau, length)?.abs();
    if (n as f64) < 16.0 * turns || n < 16 {
        return Err(invalid(
            "n",
            format!("{n} nodes for {turns} turns; need at least 16 per turn"),
        ));
    }
    let nodes = (0..n)
        .map(|j| {
            let x = length * j as f64 / n as f64;
            let th = spec.tau * x + spec.phase0;
            Vec3::new(x, spec.amplitude * th.cos(), spec.amplitude * th.sin())
        })
        .collect();
    Curve3D::new(nodes, Topology::Periodic { shift: length }, 0.0)
}

/// Straight filament along `x`.
pub fn make_straight_curve(length: f64, n: usize) -> Result<Curve3D> {
    require_positive("length", length)?;
    let nodes = (0..n)
        .map(|j| Vec3::new(length * j as f64 / n as f64, 0.0, 0.0))
        .collect();
    Curve3D::new(nodes, Topology::Periodic { shift: length }, 0.0)
}

/// Circle of `radius` in the `y`-`z` plane (closed-loop fixture).
pub fn make_circle_curve(radius: f64, n: usize) -> Result<Curve3D> {
    require_positive("radius", radius)?;
    let nodes = (0..n)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / n as f64;
            Vec3::new(0.0, radius * th.cos(), radius * th.sin())
        })
        .collect();
    Curve3D::new(nodes, Topology::Closed, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helix_examples() {
        let straight =
            make_helix_curve(&HelixSpec::new(0.0, 1.0, 0.0).unwrap(), 2.0 * PI, 32).unwrap();
        assert!(straight.nodes().iter().all(|r| r.y == 0.0 && r.z == 0.0));
        let h = make_helix_curve(&HelixSpec::new(0.1, 1.0, 0.0).unwrap(), 2.0 * PI, 64).unwrap();
        let mid = h.nodes()[32];
        assert!((mid.x - PI).abs() < 1e-15);
        assert!((mid.y + 0.1).abs() < 1e-15 && mid.z.abs() < 1e-15);
        assert!((h.node(64) - Vec3::new(2.0 * PI, 0.1, 0.0)).norm() < 1e-14);
        assert!((h.node(-1) - h.nodes()[63] + Vec3::new(2.0 * PI, 0.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn helix_preconditions() {
        let spec = HelixSpec::new(0.1, 1.5, 0.0).unwrap();
        assert!(make_helix_curve(&spec, 2.0 * PI, 64).is_err());
        let spec = HelixSpec::new(0.1, 3.0, 0.0).unwrap();
        assert!(make_helix_curve(&spec, 2.0 * PI, 32).is_err());
        assert!(make_helix_curve(&spec, 2.0 * PI, 48).is_ok());
    }

    #[test]
    fn rejects_degenerate_nodes() {
        let mut nodes: Vec<Vec3> = (0..8).map(|j| Vec3::new(j as f64, 0.0, 0.0)).collect();
        nodes[3] = nodes[2];
        assert!(matches!(
            Curve3D::new(nodes, Topology::Periodic { shift: 8.0 }, 0.0),
            Err(Error::DegenerateCurve(_))
        ));
        let nodes: Vec<Vec3> = (0..4).map(|j| Vec3::new(j as f64, 0.0, 0.0)).collect();
        assert!(Curve3D::new(nodes, Topology::Periodic { shift: 4.0 }, 0.0).is_err());
    }

    #[test]
    fn field_renders_as_curve() {
        let grid = crate::fields::make_grid(16, 2.0 * PI).unwrap();
        let spec = HelixSpec::new(0.2, 1.0, 0.0).unwrap();
        let f = crate::model::helix_field_snapshot(&spec, 1.0, &grid, 0.0).unwrap();
        let c = Curve3D::from_field(&f).unwrap();
        let h = make_helix_curve(&spec, 2.0 * PI, 16).unwrap();
        for (a, b) in c.nodes().iter().zip(h.nodes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(c.records().count(), 16);
    }
}
