//! Config-driven scenario runner for `vortex-kg`.
//!
//! A run reads one TOML document, validates every precondition, executes the
//! scenario and writes `<out>/<name>/series/*.csv`, `report.json` and, last,
//! `manifest.json`.

pub mod config;
pub mod output;
pub mod runner;

pub use config::{Scenario, ScenarioConfig, SCHEMA_VERSION};
pub use output::{emit_curve_series, emit_field_series, Manifest, ManifestEntry, SeriesWriter};
pub use runner::{run_config, validate_config, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] vortex_kg::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CliError>;
