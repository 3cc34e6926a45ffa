use std::path::Path;

use serde::{Deserialize, Serialize};
use vortex_kg::fields::Backend;
use vortex_kg::model::{HelixSpec, PhysicalParams};

use crate::{CliError, Result};

/// Current config dialect.
pub const SCHEMA_VERSION: u32 = 1;

/// Top-level TOML document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    /// Output subdirectory under the `--out` root.
    pub name: String,
    #[serde(default)]
    pub params: PhysicalParams,
    pub scenario: Scenario,
}

/// Which linear equation a field scenario uses; coefficients come from `[params]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    Wave,
    Schrodinger,
    KleinGordon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Scenario {
    /// Derived parameters and both mass-coefficient closures.
    Ledger {
        #[serde(default = "one")]
        m_count: u32,
    },
    /// Helix initial condition evolved by one linear equation.
    FieldRun {
        equation: Equation,
        /// Klein-Gordon mass frequency; defaults to `ν τ²`.
        mu: Option<f64>,
        backend: Backend,
        n: usize,
        length: f64,
        dt: f64,
        steps: u64,
        /// Snapshot every `cadence` steps.
        cadence: u64,
        helix: HelixSpec,
    },
    /// Helix evolved by the localized-induction integrator.
    LiaRun {
        n: usize,
        length: f64,
        dt: f64,
        steps: u64,
        cadence: u64,
        helix: HelixSpec,
        /// Axial position where the rotation rate is measured.
        #[serde(default)]
        station: f64,
    },
    Dispersion {
        equation: Equation,
        mu: Option<f64>,
        backend: Backend,
        ks: Vec<f64>,
        n: usize,
        length: f64,
        dt: f64,
        steps: usize,
    },
    /// Velocity induced by a periodic helix along a line at distance `h`.
    BiotSavart {
        n: usize,
        length: f64,
        helix: HelixSpec,
        h: f64,
        /// Evaluation stations along `x`, evenly spaced over one period.
        stations: usize,
        cutoff: Option<f64>,
    },
    Soliton {
        eta: f64,
        tau0: f64,
        length: f64,
        n: usize,
        /// Defaults to the largest step the stability limit allows.
        dt: Option<f64>,
        duration: f64,
        /// Snapshots after `t = 0`.
        snapshots: u64,
    },
    GroupVelocity {
        k0: f64,
        sigma: f64,
        n: usize,
        length: f64,
        duration: f64,
        samples: usize,
    },
    Linearization {
        a_over_l: Vec<f64>,
        tau: f64,
        n: usize,
        length: f64,
        dt: f64,
        duration: f64,
        comparisons: usize,
    },
}

fn one() -> u32 {
    1
}

impl Scenario {
    pub const KINDS: [&'static str; 8] = [
        "ledger",
        "field-run",
        "lia-run",
        "dispersion",
        "biot-savart",
        "soliton",
        "group-velocity",
        "linearization",
    ];

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Ledger { .. } => "ledger",
            Scenario::FieldRun { .. } => "field-run",
            Scenario::LiaRun { .. } => "lia-run",
            Scenario::Dispersion { .. } => "dispersion",
            Scenario::BiotSavart { .. } => "biot-savart",
            Scenario::Soliton { .. } => "soliton",
            Scenario::GroupVelocity { .. } => "group-velocity",
            Scenario::Linearization { .. } => "linearization",
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ScenarioConfig = toml::from_str(text)?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Invalid(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        let name_ok = !config.name.is_empty()
            && config
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            && !config.name.starts_with('.');
        if !name_ok {
            return Err(CliError::Invalid(format!(
                "name {:?} must be a plain directory name ([A-Za-z0-9._-], not starting with '.')",
                config.name
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.display().to_string(),
            source,
        })?;
        ScenarioConfig::from_toml(&text)
    }
}
