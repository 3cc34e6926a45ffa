//! Physical constants of the filament model and the relations between them.
//!
//! A filament with elastic wave speed `c`, self-induction coefficient `ν`,
//! linear fluid density `ζ` and circulation `Γ` yields:
//!
//! ```text
//! a₀ = 2ν/c          minimal helix amplitude
//! m₀ = ζ a₀          elementary mass
//! ħ  = 2ν ζ a₀       model Planck constant
//! μ  = m₀ c²/ħ       mass frequency (= c²/2ν)
//! m_ε = m ζ a₀       mass of m elementary helices
//! ```

use serde::{Deserialize, Serialize};

use crate::clock::Clock;
use crate::error::{invalid, require_positive, Result};
use crate::fields::{commensurate_turns, ComplexField, Grid1D};
use crate::Complex64;

/// Model constants. Units are caller-chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalParams {
    /// Elastic (transverse) wave speed.
    pub c: f64,
    /// Self-induction coefficient `ν` [length²/time].
    pub nu: f64,
    /// Linear fluid density along the filament.
    pub zeta: f64,
    /// Circulation `Γ` around the filament.
    pub gamma: f64,
}

impl Default for PhysicalParams {
    /// `c = 1, ζ = 1, ν = 1/2` (so `a₀ = 1`), `Γ = 1`.
    fn default() -> Self {
        PhysicalParams {
            c: 1.0,
            nu: 0.5,
            zeta: 1.0,
            gamma: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(c: f64, nu: f64, zeta: f64, gamma: f64) -> Result<Self> {
        let p = PhysicalParams { c, nu, zeta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("c", self.c)?;
        require_positive("nu", self.nu)?;
        require_positive("zeta", self.zeta)?;
        if !self.gamma.is_finite() || self.gamma == 0.0 {
            return Err(invalid(
                "gamma",
                format!("must be finite and non-zero, got {}", self.gamma),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub a0: f64,
    pub m0: f64,
    pub hbar: f64,
    pub mu: f64,
    pub m_count: u32,
    pub m_eps: f64,
}

/// Evaluates the derived quantities for `m_count` elementary helices.
pub fn derive_params(p: &PhysicalParams, m_count: u32) -> Result<DerivedParams> {
    p.validate()?;
    if m_count == 0 {
        return Err(invalid("m_count", "must be at least 1"));
    }
    let a0 = 2.0 * p.nu / p.c;
    let m0 = p.zeta * a0;
    let hbar = 2.0 * p.nu * p.zeta * a0;
    let mu = m0 * p.c * p.c / hbar;
    let m_eps = m_count as f64 * p.zeta * a0;
    Ok(DerivedParams {
        a0,
        m0,
        hbar,
        mu,
        m_count,
        m_eps,
    })
}

/// How the helix torsion is fixed when matching the self-induction
/// coefficient `ν²τ⁴` against the mass term `m₀²c⁴/ħ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    /// Soliton speed `2ντ` set to `c`: `τ = c/(2ν)`.
    GroupVelocity,
    /// Rotation frequency `ντ²` set to `μ`: `τ = c/(√2 ν)`.
    Frequency,
}

impl Closure {
    pub const ALL: [Closure; 2] = [Closure::GroupVelocity, Closure::Frequency];
}

/// Both sides of the mass-term identification for one closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub closure: Closure,
    pub tau: f64,
    /// `ν²τ⁴`
    pub lhs: f64,
    /// `μ² = m₀²c⁴/ħ²`
    pub rhs: f64,
    /// `lhs / rhs`; reported, not forced to 1.
    pub ratio: f64,
}

/// Evaluates both sides in double-double arithmetic so the reported ratio
/// carries a single final rounding.
pub fn mass_coefficient_ledger(p: &PhysicalParams, closure: Closure) -> Result<LedgerReport> {
    p.validate()?;
    let (c, nu, zeta) = (Dd::from(p.c), Dd::from(p.nu), Dd::from(p.zeta));
    let two_nu = nu * Dd::from(2.0);
    let tau_sq = match closure {
        Closure::GroupVelocity => (c * c) / (two_nu * two_nu),
        Closure::Frequency => (c * c) / (two_nu * nu),
    };
    let rotation = nu * tau_sq;
    let lhs = rotation * rotation;
    let a0 = two_nu / c;
    let m0 = zeta * a0;
    let hbar = two_nu * zeta * a0;
    let mass = m0 * c * c / hbar;
    let rhs = mass * mass;
    Ok(LedgerReport {
        closure,
        tau: tau_sq.hi.sqrt(),
        lhs: lhs.hi,
        rhs: rhs.hi,
        ratio: (lhs / rhs).hi,
    })
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn renorm(a: f64, b: f64) -> Dd {
        let hi = a + b;
        Dd {
            hi,
            lo: b - (hi - a),
        }
    }
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let p = self.hi * b.hi;
        let e = self.hi.mul_add(b.hi, -p) + (self.hi * b.lo + self.lo * b.hi);
        Dd::renorm(p, e)
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let prod = b * Dd::from(q1);
        // remainder self − q1·b, exact leading part via two-sum
        let s = self.hi - prod.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (-prod.hi - bb);
        let r = s + (err + self.lo - prod.lo);
        Dd::renorm(q1, r / b.hi)
    }
}

/// Circular helix `φ = a exp[i(τx + phase0)]` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelixSpec {
    pub amplitude: f64,
    pub tau: f64,
    #[serde(default)]
    pub phase0: f64,
}

impl HelixSpec {
    pub fn new(amplitude: f64, tau: f64, phase0: f64) -> Result<Self> {
        let h = HelixSpec {
            amplitude,
            tau,
            phase0,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(invalid(
                "amplitude",
                format!("must be finite and >= 0, got {}", self.amplitude),
            ));
        }
        if !self.tau.is_finite() || self.tau == 0.0 {
            return Err(invalid(
                "tau",
                format!("must be finite and non-zero, got {}", self.tau),
            ));
        }
        if !self.phase0.is_finite() {
            return Err(invalid("phase0", "must be finite"));
        }
        Ok(())
    }

    /// Exact-helix curvature `aτ²/(1 + a²τ²)`.
    pub fn curvature(&self) -> f64 {
        let at = self.amplitude * self.tau;
        self.amplitude * self.tau * self.tau / (1.0 + at * at)
    }

    /// Exact-helix torsion `τ/(1 + a²τ²)`.
    pub fn torsion(&self) -> f64 {
        let at = self.amplitude * self.tau;
        self.tau / (1.0 + at * at)
    }

    /// `a exp[i(τx − ωt + phase0)]`.
    pub fn value(&self, omega: f64, x: f64, t: f64) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.tau * x - omega * t + self.phase0)
    }
}

/// Samples the rotating helix `a exp[i(τx − ωt + phase0)]` on `grid`.
/// `τ` must fit an integer number of turns in the grid period.
pub fn helix_field_snapshot(
    spec: &HelixSpec,
    omega: f64,
    grid: &Grid1D,
    t: f64,
) -> Result<ComplexField> {
    spec.validate()?;
    commensurate_turns(spec.tau, grid.length())?;
    if !omega.is_finite() || !t.is_finite() {
        return Err(invalid("omega/t", "must be finite"));
    }
    let values = grid.nodes().map(|x| spec.value(omega, x, t)).collect();
    ComplexField::new(*grid, values, Clock::at(t))
}
