//! End-to-end tests of the `gaugefield` binary: exit codes, output formats,
//! schema strictness against the frozen config corpus, and byte determinism.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gaugefield_cli::config::RunConfig;
use gaugefield_cli::table::FieldTable;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaugefield"))
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gaugefield_cli_tests_{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = scratch_dir().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn potential_solenoid_matches_analytic() {
    let out = run(&["potential", "--config", bundled("potential_solenoid.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let table = FieldTable::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(table.columns, ["x", "y", "z", "t", "A_x", "A_y", "A_z"]);
    assert_eq!(table.rows.len(), 5);
    // probe (2, 0, 0): A = Phi/(2 pi rho) along +y
    let row = &table.rows[0];
    let expected = 1.0 / (4.0 * PI);
    assert!((row[5] - expected).abs() / expected < 1e-2, "A_y = {}", row[5]);
    assert!(row[4].abs() < 1e-6);
    // interior probe (0.5, 0, 0): Phi rho/(2 pi R^2)
    let row = &table.rows[3];
    let expected = 0.5 / (2.0 * PI);
    assert!((row[5] - expected).abs() / expected < 1e-2);
    // on the axis the potential vanishes
    let row = &table.rows[4];
    assert!(row[4].abs() < 1e-8 && row[5].abs() < 1e-8);
}

#[test]
fn potential_rejects_empty_probes() {
    let cfg = write_config(
        "empty_probes.json",
        r#"{
  "source": { "kind": "solenoid", "flux": 1.0, "radius": 1.0 },
  "quantity": "vector_potential",
  "quadrature": {
    "domain": { "kind": "cylinder", "rho_max": 1.0, "z_half": 10.0 },
    "cells": [8, 8, 8]
  },
  "probes": { "kind": "points", "points": [] }
}"#,
    );
    let out = run(&["potential", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no probes"));
}

#[test]
fn malformed_source_kind_names_the_key() {
    let cfg = write_config(
        "bad_kind.json",
        r#"{ "source": { "kind": "solenoiid", "flux": 1.0, "radius": 1.0 } }"#,
    );
    let out = run(&["solenoid", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("solenoiid") || err.contains("kind"), "{err}");
}

#[test]
fn unknown_top_level_key_rejected() {
    let cfg = write_config(
        "unknown_key.json",
        r#"{ "source": { "kind": "solenoid", "flux": 1.0, "radius": 1.0 }, "extra_knob": 3 }"#,
    );
    let out = run(&["solenoid", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra_knob"));
}

#[test]
fn determinism_flag_cannot_be_disabled() {
    let cfg = write_config(
        "nondeterministic.json",
        r#"{ "source": { "kind": "solenoid", "flux": 1.0, "radius": 1.0 }, "deterministic": false }"#,
    );
    let out = run(&["solenoid", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn abphase_enclosing_circle() {
    let out = run(&["abphase", "--config", bundled("abphase_circle.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["circulation"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert_eq!(v["winding"].as_i64().unwrap(), 1);
    assert!((v["phase"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert!((v["enclosed_flux"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(v["units_note"].as_str().unwrap().contains("Heaviside-Lorentz"));
}

#[test]
fn abphase_non_enclosing_and_reversed() {
    let non_enclosing = write_config(
        "abphase_outside.json",
        r#"{
  "source": { "kind": "solenoid", "flux": 1.0, "radius": 1.0 },
  "charge": 1.0,
  "loop": { "center": [3.0, 0.0, 0.0], "radius": 0.4, "segments_per_turn": 720 }
}"#,
    );
    let out = run(&["abphase", "--config", non_enclosing.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["phase"].as_f64().unwrap().abs() < 1e-3);
    assert_eq!(v["winding"].as_i64().unwrap(), 0);

    let reversed = write_config(
        "abphase_reversed.json",
        r#"{
  "source": { "kind": "solenoid", "flux": 1.0, "radius": 1.0 },
  "charge": 1.0,
  "loop": { "center": [0.0, 0.0, 0.0], "radius": 2.0, "segments_per_turn": 720, "winding": -1 }
}"#,
    );
    let out = run(&["abphase", "--config", reversed.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["phase"].as_f64().unwrap() + 1.0).abs() < 1e-3);
    assert_eq!(v["winding"].as_i64().unwrap(), -1);
}

#[test]
fn solenoid_table_has_wall_kink() {
    let out = run(&["solenoid", "--config", bundled("solenoid_table.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let table = FieldTable::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(table.columns, ["rho", "A_theta"]);
    // A_theta peaks at the wall rho = R = 1
    let (peak_rho, _) = table
        .rows
        .iter()
        .map(|r| (r[0], r[1]))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((peak_rho - 1.0).abs() < 0.15, "peak at {peak_rho}");
    for row in &table.rows {
        let expected =
            if row[0] <= 1.0 { row[0] / (2.0 * PI) } else { 1.0 / (2.0 * PI * row[0]) };
        assert!((row[1] - expected).abs() < 1e-12);
    }
}

#[test]
fn solenoid_zero_flux_and_bad_radius() {
    let zero = write_config(
        "solenoid_zero.json",
        r#"{
  "source": { "kind": "solenoid", "flux": 0.0, "radius": 1.0 },
  "probes": { "kind": "rho_sweep", "start": 0.1, "stop": 3.0, "count": 10 }
}"#,
    );
    let out = run(&["solenoid", "--config", zero.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let table = FieldTable::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(table.rows.iter().all(|r| r[1] == 0.0));

    let bad = write_config(
        "solenoid_bad_radius.json",
        r#"{
  "source": { "kind": "solenoid", "flux": 1.0, "radius": -1.0 },
  "probes": { "kind": "rho_sweep", "start": 0.1, "stop": 3.0, "count": 10 }
}"#,
    );
    let out = run(&["solenoid", "--config", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_default_battery_passes() {
    let out = run(&["verify", "--config", bundled("verify_battery.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["version"].is_string());
    assert!(v["config_echo"].is_object());
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["pass"].as_bool().unwrap()));
    assert!(!v["traces"].as_array().unwrap().is_empty());
}

#[test]
fn verify_subset_and_unknown_check() {
    let subset = write_config(
        "verify_subset.json",
        r#"{ "checks": ["angular_kernel", "decay"] }"#,
    );
    let out = run(&["verify", "--config", subset.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 3 + 4);

    let unknown = write_config("verify_unknown.json", r#"{ "checks": ["eq99"] }"#);
    let out = run(&["verify", "--config", unknown.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn out_flag_writes_file_and_is_deterministic() {
    let target = scratch_dir().join("table_a.csv");
    let target2 = scratch_dir().join("table_b.csv");
    let cfg = bundled("solenoid_table.json");
    let out = run(&["solenoid", "--config", cfg.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let out = run(&["solenoid", "--config", cfg.to_str().unwrap(), "--out", target2.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let a = fs::read(&target).unwrap();
    let b = fs::read(&target2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "identical configs must produce byte-identical files");
}

#[test]
fn potential_output_is_byte_deterministic() {
    let cfg = bundled("potential_solenoid.json");
    let a = run(&["potential", "--config", cfg.to_str().unwrap()]);
    let b = run(&["potential", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn frozen_config_corpus_still_parses() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/configs");
    let mut seen = 0;
    for entry in fs::read_dir(&corpus).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if !name.ends_with(".json") {
            continue;
        }
        seen += 1;
        let text = fs::read_to_string(&path).unwrap();
        let parsed = RunConfig::parse(&text);
        if name.starts_with("valid_") {
            assert!(parsed.is_ok(), "{name}: {parsed:?}");
        } else if name.starts_with("invalid_") {
            assert!(parsed.is_err(), "{name} unexpectedly parsed");
        } else {
            panic!("corpus file {name} must be valid_* or invalid_*");
        }
    }
    assert!(seen >= 6, "corpus went missing ({seen} files)");
}

#[test]
fn scalar_potential_of_point_charge_via_cli() {
    let cfg = write_config(
        "point_charge_v.json",
        r#"{
  "source": { "kind": "point_charge", "charge": 12.566370614359172, "position": [0.0, 0.0, 0.0] },
  "quantity": "scalar_potential",
  "quadrature": {
    "domain": { "kind": "cylinder", "rho_max": 64.0, "z_half": 64.0 },
    "cells": [512, 4, 1024]
  },
  "probes": { "kind": "points", "points": [[0.0, 0.0, 2.0]] }
}"#,
    );
    let out = run(&["potential", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let table = FieldTable::parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(table.columns, ["x", "y", "z", "t", "V"]);
    // q = 4 pi at distance 2 -> 0.5; the small box (W = 64) costs ~1.5% tail
    assert!((table.rows[0][4] - 0.5).abs() / 0.5 < 3e-2, "V = {}", table.rows[0][4]);
}

#[test]
fn quantity_source_mismatch_is_config_error() {
    let cfg = write_config(
        "mismatch.json",
        r#"{
  "source": { "kind": "point_charge", "charge": 1.0, "position": [0.0, 0.0, 0.0] },
  "quantity": "vector_potential",
  "quadrature": {
    "domain": { "kind": "box", "bounds": [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]] },
    "cells": [8, 8, 8]
  },
  "probes": { "kind": "points", "points": [[2.0, 0.0, 0.0]] }
}"#,
    );
    let out = run(&["potential", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("scalar_potential"));
}
