use std::fs;
use std::path::Path;
use std::process::Command;

use vortex_kg_cli::{run_config, validate_config, CliError, RunOptions, ScenarioConfig};

fn config(text: &str) -> ScenarioConfig {
    ScenarioConfig::from_toml(text).unwrap()
}

fn read_report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn measurement(report: &serde_json::Value, quantity: &str) -> f64 {
    report["measurements"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["quantity"] == quantity)
        .unwrap_or_else(|| panic!("no {quantity} in report"))["value"]
        .as_f64()
        .unwrap()
}

const DISPERSION: &str = r#"
schema_version = 1
name = "wave-scan"
[params]
c = 1.0
[scenario]
kind = "dispersion"
equation = "wave"
backend = "spectral"
ks = [1.0, 2.0, 3.0, 4.0]
n = 32
length = 6.283185307179586
dt = 0.01
steps = 200
"#;

#[test]
fn ledger_report_carries_both_ratios() {
    let out = tempfile::tempdir().unwrap();
    let c = config("schema_version = 1\nname = \"ledger\"\n[params]\nc = 1.0\nnu = 0.5\n[scenario]\nkind = \"ledger\"\n");
    let manifest = run_config(&c, &RunOptions::new(out.path())).unwrap();
    let report = read_report(&out.path().join("ledger"));
    assert_eq!(measurement(&report, "ratio_group_velocity"), 0.25);
    assert_eq!(measurement(&report, "ratio_frequency"), 1.0);
    assert_eq!(report["details"]["derived"]["a0"], 1.0);
    let paths: Vec<&str> = manifest.files.iter().map(|f| f.path.as_str()).collect();
    assert_eq!(paths, ["series/ledger.csv", "report.json"]);
    assert!(out.path().join("ledger/manifest.json").exists());
}

#[test]
fn wave_dispersion_scan_rows() {
    let out = tempfile::tempdir().unwrap();
    run_config(&config(DISPERSION), &RunOptions::new(out.path())).unwrap();
    let csv = fs::read_to_string(out.path().join("wave-scan/series/dispersion.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for (i, r) in rows.iter().enumerate() {
        let k = (i + 1) as f64;
        assert_eq!(r[0], k);
        assert!((r[1] - k).abs() <= 1e-10 * k, "{r:?}");
        assert!(r[3] <= 1e-10);
    }
}

#[test]
fn odd_n_fails_before_writing() {
    let out = tempfile::tempdir().unwrap();
    let bad = DISPERSION.replace("n = 32", "n = 31");
    let c = config(&bad);
    assert!(matches!(validate_config(&c), Err(CliError::Model(_))));
    assert!(run_config(&c, &RunOptions::new(out.path())).is_err());
    assert_eq!(fs::read_dir(out.path()).unwrap().count(), 0);
}

#[test]
fn snapshot_cadence_gives_block_counts() {
    let out = tempfile::tempdir().unwrap();
    let lia = r#"
schema_version = 1
name = "lia"
[scenario]
kind = "lia-run"
n = 32
length = 6.283185307179586
dt = 0.001
steps = 100
cadence = 10
helix = { amplitude = 0.05, tau = 1.0 }
"#;
    run_config(&config(lia), &RunOptions::new(out.path())).unwrap();
    let csv = fs::read_to_string(out.path().join("lia/series/curve.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,j,x,y,z");
    assert_eq!(csv.lines().count(), 1 + 11 * 32);
    let lengths = fs::read_to_string(out.path().join("lia/series/length.csv")).unwrap();
    assert_eq!(lengths.lines().count(), 12);

    let field = r#"
schema_version = 1
name = "field"
[scenario]
kind = "field-run"
equation = "schrodinger"
backend = "fd"
n = 16
length = 6.283185307179586
dt = 0.01
steps = 100
cadence = 10
helix = { amplitude = 0.1, tau = 1.0 }
"#;
    run_config(&config(field), &RunOptions::new(out.path())).unwrap();
    let csv = fs::read_to_string(out.path().join("field/series/field.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 11 * 16);
    let report = read_report(&out.path().join("field"));
    assert!((measurement(&report, "omega") - 0.5).abs() < 0.05);
    assert!(measurement(&report, "conserved_drift") < 1e-12);
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = config(DISPERSION);
    let ma = run_config(&c, &RunOptions::new(a.path())).unwrap();
    let mb = run_config(
        &c,
        &RunOptions {
            out_root: b.path().into(),
            exec: vortex_kg::Exec::Sequential,
        },
    )
    .unwrap();
    assert_eq!(ma.files, mb.files);
    // a second run into the same directory replaces the first
    let mc = run_config(&c, &RunOptions::new(a.path())).unwrap();
    assert_eq!(ma.files, mc.files);
}

#[test]
fn manifest_digests_match_files() {
    use sha2::{Digest, Sha256};
    let out = tempfile::tempdir().unwrap();
    let m = run_config(&config(DISPERSION), &RunOptions::new(out.path())).unwrap();
    for f in &m.files {
        let bytes = fs::read(out.path().join("wave-scan").join(&f.path)).unwrap();
        assert_eq!(bytes.len() as u64, f.bytes);
        assert_eq!(hex::encode(Sha256::digest(&bytes)), f.sha256);
    }
}

#[test]
fn binary_verbs_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_vortex-kg");
    let out = tempfile::tempdir().unwrap();
    let cfg = out.path().join("scan.toml");
    fs::write(&cfg, DISPERSION).unwrap();

    let list = Command::new(bin).arg("list-scenarios").output().unwrap();
    assert!(list.status.success());
    let kinds = String::from_utf8(list.stdout).unwrap();
    assert_eq!(kinds.lines().count(), 8);
    assert!(kinds.contains("biot-savart"));

    assert!(Command::new(bin)
        .arg("validate")
        .arg(&cfg)
        .status()
        .unwrap()
        .success());
    let run = Command::new(bin)
        .args(["run", cfg.to_str().unwrap(), "--out"])
        .arg(out.path().join("runs"))
        .status()
        .unwrap();
    assert!(run.success());
    assert!(out.path().join("runs/wave-scan/manifest.json").exists());

    let bad = out.path().join("bad.toml");
    fs::write(&bad, DISPERSION.replace("n = 32", "n = 31")).unwrap();
    let failed = Command::new(bin)
        .arg("validate")
        .arg(&bad)
        .output()
        .unwrap();
    assert!(!failed.status.success());
    assert!(String::from_utf8(failed.stderr).unwrap().contains("even"));
    assert!(!Command::new(bin)
        .args(["run", "/nonexistent.toml"])
        .status()
        .unwrap()
        .success());
}

#[test]
fn every_scenario_kind_validates() {
    let configs = [
        DISPERSION.to_string(),
        r#"schema_version = 1
name = "bs"
[scenario]
kind = "biot-savart"
n = 64
length = 6.283185307179586
helix = { amplitude = 0.01, tau = 1.0 }
h = 2.0
stations = 8
"#
        .into(),
        r#"schema_version = 1
name = "sol"
[scenario]
kind = "soliton"
eta = 1.0
tau0 = 0.5
length = 24.0
n = 768
duration = 2.0
snapshots = 50
"#
        .into(),
        r#"schema_version = 1
name = "gv"
[scenario]
kind = "group-velocity"
k0 = 1.0
sigma = 2.0
n = 512
length = 64.0
duration = 4.0
samples = 40
"#
        .into(),
        r#"schema_version = 1
name = "lin"
[scenario]
kind = "linearization"
a_over_l = [0.001, 0.002]
tau = 1.0
n = 128
length = 6.283185307179586
dt = 0.0009636787280950285
duration = 12.566370614359172
comparisons = 16
"#
        .into(),
    ];
    for text in &configs {
        validate_config(&config(text)).unwrap_or_else(|e| panic!("{e}\n{text}"));
    }
    let too_far = configs[3].replace("duration = 4.0", "duration = 9.0");
    assert!(validate_config(&config(&too_far)).is_err());
}

#[test]
fn biot_savart_run_records_estimate_ratio() {
    let out = tempfile::tempdir().unwrap();
    let text = r#"schema_version = 1
name = "bs"
[scenario]
kind = "biot-savart"
n = 64
length = 6.283185307179586
helix = { amplitude = 0.01, tau = 1.0 }
h = 2.0
stations = 8
"#;
    run_config(&config(text), &RunOptions::new(out.path())).unwrap();
    let report = read_report(&out.path().join("bs"));
    let ratio = measurement(&report, "estimate_ratio");
    assert!(ratio > 0.0 && ratio < 1.0, "{ratio}");
    let pert = fs::read_to_string(out.path().join("bs/series/perturbation.csv")).unwrap();
    assert_eq!(pert.lines().count(), 9);
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut kinds = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let c = ScenarioConfig::load(&path).unwrap();
        validate_config(&c).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        kinds.push(c.scenario.kind());
    }
    kinds.sort_unstable();
    let mut all = vortex_kg_cli::Scenario::KINDS.to_vec();
    all.sort_unstable();
    assert_eq!(kinds, all);
}
