mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use faraday_qed::cli::{self, Method, Overrides};
use serde_json::{json, Value};

fn faraday(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faraday")).args(args).output().unwrap()
}

/// The JSON error record is the last line on stderr; log output may precede it.
fn error_record(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

fn sample(name: &str) -> String {
    samples_dir().join(name).display().to_string()
}

fn base_config(model: &Path) -> Value {
    json!({
        "model": model,
        "field": {
            "k_direction": [0, 0, 1], "e1": [1, 0, 0], "e2": [0, 1, 0],
            "photon_energy_ev": 2.0, "n_photons": 1, "volume": 1e-7
        },
        "experiment": {"b": [0, 0, 1.0], "length": 0.1, "density": 2.5e25, "n_molecules": 2500000000000000000u64},
        "method": "b_term"
    })
}

fn write_config(dir: &Path, name: &str, config: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn csv_header_and_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = faraday(&["run", &sample("three_level_scan.json"), "--output", out.to_str().unwrap(), "--points", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some(cli::CSV_HEADER));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 7);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], i.to_string());
        let b_term: f64 = row[3].parse().unwrap();
        let via: f64 = row[4].parse().unwrap();
        assert!(rel(via, b_term) < 1e-2, "row {i}: {via} vs {b_term}");
    }
}

#[test]
fn transverse_field_gives_zero_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = base_config(&samples_dir().join("three_level.json"));
    config["experiment"]["b"] = json!([1.0, 0, 0]);
    config["scan"] = json!({"variable": "omega", "start": 3.0e15, "stop": 3.1e15, "points": 1});
    let path = write_config(dir.path(), "c.json", &config);
    let o = faraday(&["run", path.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn malformed_model_reports_parse_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("broken.json");
    std::fs::write(&model, "{\"levels\": [").unwrap();
    let out = dir.path().join("out.csv");
    let path = write_config(dir.path(), "c.json", &base_config(&model));
    let o = faraday(&["run", path.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let record: Value = error_record(&o);
    assert_eq!(record["error"], "ParseError");
    assert!(!out.exists());
}

#[test]
fn bad_config_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, "{\"model\": 3}").unwrap();
    let o = faraday(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let record: Value = error_record(&o);
    assert_eq!(record["error"], "ConfigError");
}

#[test]
fn numerical_failure_names_the_scan_point() {
    // A zero-photon field has no rotation to report.
    let dir = tempfile::tempdir().unwrap();
    let mut config = base_config(&samples_dir().join("three_level.json"));
    config["field"]["n_photons"] = json!(0);
    config["method"] = json!("via_amplitude");
    let path = write_config(dir.path(), "c.json", &config);
    let out = dir.path().join("out.csv");
    let o = faraday(&["run", path.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let record: Value = error_record(&o);
    assert_eq!(record["error"], "NoPhotons");
    assert_eq!(record["scan_index"], 0);
    assert!(!out.exists());
}

#[test]
fn resonant_points_become_nulls_with_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = base_config(&samples_dir().join("three_level.json"));
    let resonance = omega_ev(3.0);
    config["scan"] = json!({"variable": "omega", "start": resonance * 0.9, "stop": resonance * 1.1, "points": 3});
    config["method"] = json!("all");
    let path = write_config(dir.path(), "c.json", &config);
    let o = faraday(&["run", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 3);
    assert!(rows[1][3].is_empty() && rows[1][4].is_empty());
    assert!(rows[1].last().unwrap().contains("NearResonance"));
    assert!(!rows[0][3].is_empty() && !rows[2][3].is_empty());
}

#[test]
fn validate_passes_on_samples() {
    for name in ["three_level_scan.json", "three_level_field_scan.json", "oracle_two_level.json"] {
        let o = faraday(&["validate", &sample(name)]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stdout));
        assert!(String::from_utf8(o.stdout).unwrap().trim_end().ends_with("pass"));
    }
}

#[test]
fn validate_names_degenerate_pair() {
    let dir = tempfile::tempdir().unwrap();
    let mut model: Value = serde_json::from_str(&std::fs::read_to_string(samples_dir().join("three_level.json")).unwrap()).unwrap();
    model["levels"][2]["energy"] = json!(3.0);
    let model_path = dir.path().join("degenerate.json");
    std::fs::write(&model_path, model.to_string()).unwrap();
    let path = write_config(dir.path(), "c.json", &base_config(&model_path));
    let o = faraday(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("(e1, e2)"), "{text}");
    assert!(text.contains("Faraday A and C terms are unsupported"), "{text}");
}

#[test]
fn validate_lists_resonant_scan_indices() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = base_config(&samples_dir().join("three_level.json"));
    // 11 points from 2.5 to 3.5 eV; the 3.0 eV transition sits on index 5,
    // and 3.6 eV is outside the range.
    config["scan"] = json!({"variable": "omega", "start": omega_ev(2.5), "stop": omega_ev(3.5), "points": 11});
    let path = write_config(dir.path(), "c.json", &config);
    let report = cli::validate(&path, &Overrides::default());
    assert!(!report.pass);
    assert_eq!(report.resonant_indices(), vec![5]);
    assert_eq!(report.resonances.len(), 1);
    assert_eq!(report.resonances[0].transition, "g->e1");

    // A crossing between grid points is still reported at the nearest index.
    config["scan"] = json!({"variable": "omega", "start": omega_ev(2.0), "stop": omega_ev(3.9), "points": 4});
    let path = write_config(dir.path(), "c2.json", &config);
    let report = cli::validate(&path, &Overrides::default());
    let indices = report.resonant_indices();
    assert!(indices.contains(&2), "{indices:?}");

    let o = faraday(&["validate", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let parsed: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(parsed["pass"], false);
}

#[test]
fn scan_points_equal_single_point_runs() {
    let resolved = cli::load_config(&samples_dir().join("three_level_scan.json"), &Overrides {
        method: Some(Method::BTerm),
        points: Some(5),
        ..Overrides::default()
    })
    .unwrap();
    let scan = cli::run(&resolved).unwrap();
    for row in &scan.rows {
        let mut single = resolved.clone();
        single.config.scan = None;
        single.config.field.photon_energy_ev = None;
        single.config.field.omega = Some(row.scan_value);
        let point = cli::run(&single).unwrap();
        assert_eq!(point.rows[0].theta_b_term, row.theta_b_term);
        assert_eq!(point.rows[0].amplitude_abs, row.amplitude_abs);
    }
}

#[test]
fn json_output_and_field_scan() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    let o = faraday(&["run", &sample("three_level_field_scan.json"), "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = parsed["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(parsed["scan_variable"], "b_magnitude");
    let first = rows[0]["theta_b_term"].as_f64().unwrap() / rows[0]["scan_value"].as_f64().unwrap();
    for row in rows {
        let slope = row["theta_b_term"].as_f64().unwrap() / row["scan_value"].as_f64().unwrap();
        assert!(rel(slope, first) < 1e-12);
    }
}

#[test]
fn oracle_report_is_json() {
    let o = faraday(&["oracle-report", &sample("oracle_two_level.json")]);
    assert!(o.status.success());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["parameters", "theta_oracle", "theta_perturbative", "relative_deviation", "leakage", "norm_drift"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert!(report["relative_deviation"].as_f64().unwrap() < 0.05);
}

#[test]
fn oracle_column_scales_with_molecule_count() {
    let resolved = cli::load_config(&samples_dir().join("oracle_two_level.json"), &Overrides::default()).unwrap();
    let one = cli::run(&resolved).unwrap().rows[0].clone();
    let mut doubled = resolved.clone();
    doubled.config.experiment.n_molecules = 2;
    let two = cli::run(&doubled).unwrap().rows[0].clone();
    assert_eq!(two.theta_oracle.unwrap(), 2.0 * one.theta_oracle.unwrap());
    assert!(one.leakage.unwrap() < 0.05);
}

#[test]
fn tolerance_profile_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_faraday"))
        .args(["validate", &sample("three_level_scan.json")])
        .env("FARADAY_TOLERANCE_PROFILE", "nonsense")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stdout).unwrap().contains("unknown tolerance profile"));
}
