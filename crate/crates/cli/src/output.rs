use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vortex_kg::fields::ComplexField;
use vortex_kg::filament::Curve3D;

use crate::config::ScenarioConfig;
use crate::{CliError, Result};

/// One CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell<'a> {
    Int(u64),
    /// Printed with 17 significant digits, which round-trips binary64.
    Float(f64),
    Text(&'a str),
}

impl From<f64> for Cell<'_> {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell<'_> {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

/// In-memory comma-separated table with a header row.
#[derive(Debug, Clone)]
pub struct SeriesWriter {
    buf: String,
    columns: usize,
    rows: usize,
}

impl SeriesWriter {
    pub fn new(header: &[&str]) -> Self {
        SeriesWriter {
            buf: format!("{}\n", header.join(",")),
            columns: header.len(),
            rows: 0,
        }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        assert_eq!(cells.len(), self.columns, "row width does not match header");
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            match cell {
                Cell::Int(v) => write!(self.buf, "{v}"),
                Cell::Float(v) => write!(self.buf, "{v:.16e}"),
                Cell::Text(s) => write!(self.buf, "{s}"),
            }
            .expect("writing to a String cannot fail");
        }
        self.buf.push('\n');
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

/// `t,j,x,re,im` rows for every snapshot.
pub fn emit_field_series(history: &[ComplexField]) -> Result<SeriesWriter> {
    if history.is_empty() {
        return Err(CliError::Invalid(
            "cannot emit an empty field history".into(),
        ));
    }
    let mut w = SeriesWriter::new(&["t", "j", "x", "re", "im"]);
    for f in history {
        for (j, (x, v)) in f.grid().nodes().zip(f.values()).enumerate() {
            w.row(&[f.t().into(), j.into(), x.into(), v.re.into(), v.im.into()]);
        }
    }
    Ok(w)
}

/// `t,j,x,y,z` rows for every snapshot.
pub fn emit_curve_series(history: &[Curve3D]) -> Result<SeriesWriter> {
    if history.is_empty() {
        return Err(CliError::Invalid(
            "cannot emit an empty curve history".into(),
        ));
    }
    let mut w = SeriesWriter::new(&["t", "j", "x", "y", "z"]);
    for c in history {
        for (j, x, y, z) in c.records() {
            w.row(&[c.t().into(), j.into(), x.into(), y.into(), z.into()]);
        }
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the run directory, `/`-separated.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Written last; its presence marks a complete run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    pub config: ScenarioConfig,
    pub wall_clock_seconds: f64,
    pub files: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Run directory that records a digest for every file it writes.
pub(crate) struct RunDir {
    root: PathBuf,
    files: Vec<ManifestEntry>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

impl RunDir {
    /// Creates `root/series`, removing any manifest left by an earlier run.
    pub fn create(root: PathBuf) -> Result<Self> {
        let series = root.join("series");
        std::fs::create_dir_all(&series).map_err(io_err(&series))?;
        let manifest = root.join(MANIFEST_FILE);
        if manifest.exists() {
            std::fs::remove_file(&manifest).map_err(io_err(&manifest))?;
        }
        Ok(RunDir {
            root,
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, rel: &str, contents: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        std::fs::write(&path, contents).map_err(io_err(&path))?;
        self.files.push(ManifestEntry {
            path: rel.to_string(),
            bytes: contents.len() as u64,
            sha256: hex::encode(Sha256::digest(contents)),
        });
        Ok(())
    }

    pub fn finish(self, config: &ScenarioConfig, wall_clock_seconds: f64) -> Result<Manifest> {
        let manifest = Manifest {
            artifact: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            wall_clock_seconds,
            files: self.files,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        let path = self.root.join(MANIFEST_FILE);
        std::fs::write(&path, text + "\n").map_err(io_err(&path))?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vortex_kg::fields::make_grid;
    use vortex_kg::filament::make_straight_curve;

    #[test]
    fn floats_round_trip() {
        let mut w = SeriesWriter::new(&["a", "b"]);
        let v = 0.1 + 0.2;
        w.row(&[Cell::Int(3), v.into()]);
        let s = w.into_string();
        let cell = s.lines().nth(1).unwrap().split(',').nth(1).unwrap();
        assert_eq!(cell.parse::<f64>().unwrap(), v);
        assert_eq!(cell, "3.0000000000000004e-1");
    }

    #[test]
    fn one_field_snapshot_has_header_plus_n_rows() {
        let grid = make_grid(16, 1.0).unwrap();
        let f = ComplexField::zeros(grid, 0.0);
        let s = emit_field_series(&[f]).unwrap().into_string();
        assert_eq!(s.lines().count(), 17);
        assert!(emit_field_series(&[]).is_err());
    }

    #[test]
    fn curve_history_blocks() {
        let c = make_straight_curve(1.0, 8).unwrap();
        let w = emit_curve_series(&vec![c; 11]).unwrap();
        assert_eq!(w.rows(), 88);
    }
}
