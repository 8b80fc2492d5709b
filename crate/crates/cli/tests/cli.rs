use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cmc_cli::io::{Cell, CsvTable};
use cmc_cli::{CliError, ScenarioConfig};
use proptest::prelude::*;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn cmc(sub: &str, config: &str, dir: &Path) -> (Output, PathBuf) {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    let output = Command::new(env!("CARGO_BIN_EXE_cmc"))
        .args([sub, "--quiet", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    (output, out)
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Header and rows of a schema-1 CSV file.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("schema_version=1"), "{}", path.display());
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k]).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn small_mesh(extra: &str) -> String {
    format!(r#"{{"mesh": {{"R_max": 3.0, "n_r": 32, "n_theta": 64}}{extra}}}"#)
}

#[test]
fn maximal_plane_has_zero_heights() {
    let tmp = tempfile::tempdir().unwrap();
    let (o, out) = cmc("solve", r#"{"boundary": {"family": "identity"}, "H_grid": [0.0]}"#, tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out.join("surface.csv"));
    assert_eq!(rows.len(), 1 + 64 * 128);
    assert!(column(&header, &rows, "u").iter().all(|u| u.abs() <= 1e-10));
    let m = manifest(&out);
    assert_eq!(m["leaves"][0]["status"], "converged");
    assert_eq!(m["leaves"][0]["iterations"], 1);
    assert_eq!(m["config"]["mesh"]["n_r"], 64);
    assert_eq!(m["config"]["tolerances"]["tol_newton"], 1e-10);
}

#[test]
fn umbilic_leaf_matches_closed_form() {
    let rho: f64 = 0.3;
    let tmp = tempfile::tempdir().unwrap();
    let cfg = format!(r#"{{"H_grid": [{}]}}"#, -rho.tan());
    let (o, out) = cmc("solve", &cfg, tmp.path());
    assert_eq!(code(&o), 0);
    let (header, rows) = read_csv(&out.join("surface.csv"));
    let (re, im, u) = (column(&header, &rows, "z_re"), column(&header, &rows, "z_im"), column(&header, &rows, "u"));
    let mut err: f64 = 0.0;
    for k in 0..rows.len() {
        let s = re[k] * re[k] + im[k] * im[k];
        let chi = (1.0 + s) / (1.0 - s);
        err = err.max((u[k] + (rho.sin() / chi).asin()).abs());
    }
    assert!(err <= 5e-4, "{err}");
    // lambda vanishes up to fit noise, so mu_formula is small everywhere
    let mu = column(&header, &rows, "mu_formula_im");
    assert!(mu.iter().all(|m| m.abs() < 1e-2));
}

#[test]
fn odd_sector_count_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let (o, out) = cmc("solve", r#"{"mesh": {"R_max": 3.0, "n_r": 16, "n_theta": 33}}"#, tmp.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_theta"));
    assert!(!out.exists());
}

#[test]
fn grid_length_preconditions() {
    let tmp = tempfile::tempdir().unwrap();
    let (o, out) = cmc("sweep", &small_mesh(r#", "H_grid": [0.5]"#), tmp.path());
    assert_eq!(code(&o), 1);
    assert!(!out.exists());
    let (o, out) = cmc("solve", &small_mesh(r#", "H_grid": [0.0, 0.5]"#), tmp.path());
    assert_eq!(code(&o), 1);
    assert!(!out.exists());
    let (o, out) = cmc("validate", r#"{"H_grid": []}"#, tmp.path());
    assert_eq!(code(&o), 1);
    assert!(!out.exists());
}

#[test]
fn config_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    for cfg in [
        r#"{"tolerances": {"tol_newton": 0.0}}"#,
        r#"{"H_grid": [4.5]}"#,
        r#"{"H_grid": [1.0, 0.5]}"#,
        r#"{"mesh": {"R_max": 9.0, "n_r": 16, "n_theta": 32}}"#,
        r#"{"boundary": {"family": "trig", "amplitude": 1.5, "frequency": 2}}"#,
        r#"{"boundary": {"family": "spiral"}}"#,
        r#"{"unknown": 1}"#,
        "not json",
    ] {
        let (o, out) = cmc("solve", cfg, tmp.path());
        assert_eq!(code(&o), 1, "{cfg}");
        assert!(!out.exists(), "{cfg}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_cmc")).args(["solve", "--quiet"]).output().unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn identity_sweep_is_monotone() {
    let t = 0.3f64.tan();
    let tmp = tempfile::tempdir().unwrap();
    let (o, out) = cmc("sweep", &small_mesh(&format!(r#", "H_grid": [{}, 0.0, {t}]"#, -t)), tmp.path());
    assert_eq!(code(&o), 0);
    let m = manifest(&out);
    assert_eq!(m["monotonicity"]["pass"], true);
    assert_eq!(m["monotonicity"]["violations"], 0);
    assert_eq!(m["complete"], true);
    let (header, rows) = read_csv(&out.join("foliation.csv"));
    assert_eq!(&header[..5], ["node", "r", "theta", "z_re", "z_im"]);
    assert_eq!(header.len(), 8);
    for r in &rows {
        assert!(r[5] <= r[6] && r[6] <= r[7], "node {}", r[0]);
    }
    for k in 0..3 {
        let f = format!("surface_{k:03}.csv");
        assert_eq!(m["leaves"][k]["file"], f.as_str());
        assert!(out.join(&f).exists());
    }
}

#[test]
fn runs_are_byte_identical() {
    let cfg = small_mesh(r#", "boundary": {"family": "trig", "amplitude": 0.2, "frequency": 2}, "H_grid": [-0.5, 0.5], "seed": 7"#);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (oa, out_a) = cmc("sweep", &cfg, a.path());
    let (ob, out_b) = cmc("sweep", &cfg, b.path());
    assert_eq!((code(&oa), code(&ob)), (0, 0));
    for f in ["surface_000.csv", "surface_001.csv", "foliation.csv"] {
        assert_eq!(fs::read(out_a.join(f)).unwrap(), fs::read(out_b.join(f)).unwrap(), "{f}");
    }
    let (ma, mb) = (manifest(&out_a), manifest(&out_b));
    assert_eq!(ma["artifacts"], mb["artifacts"]);
    assert_eq!(ma["leaves"], mb["leaves"]);
    assert_eq!(ma["boundary"], mb["boundary"]);
}

#[test]
fn manifest_hashes_match_files() {
    let tmp = tempfile::tempdir().unwrap();
    let (o, out) = cmc("export", &small_mesh(r#", "boundary": {"family": "shear", "shear": 0.4}, "H_grid": [0.5]"#), tmp.path());
    assert_eq!(code(&o), 0);
    let m = manifest(&out);
    let arts = m["artifacts"].as_array().unwrap();
    let names: Vec<&str> = arts.iter().map(|a| a["file"].as_str().unwrap()).collect();
    assert_eq!(names, ["surface_000.csv", "foliation.csv", "boundary.csv"]);
    for a in arts {
        let data = fs::read(out.join(a["file"].as_str().unwrap())).unwrap();
        assert_eq!(a["bytes"].as_u64().unwrap() as usize, data.len());
        assert_eq!(a["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&data)));
        assert!(data.starts_with(b"schema_version=1\n"));
    }
    let (header, rows) = read_csv(&out.join("boundary.csv"));
    let (theta, phi) = (column(&header, &rows, "theta"), column(&header, &rows, "phi"));
    assert!(phi.windows(2).all(|w| w[1] > w[0]));
    assert!(theta.windows(2).all(|w| w[1] > w[0]));
    // no temporary files left behind
    assert!(fs::read_dir(&out).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".tmp")));
}

#[test]
fn stalled_solve_exits_two_and_keeps_best_iterate() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_mesh(r#", "boundary": {"family": "trig", "amplitude": 0.2, "frequency": 2}, "H_grid": [0.5], "tolerances": {"tol_newton": 1e-300}"#);
    let (o, out) = cmc("solve", &cfg, tmp.path());
    assert_eq!(code(&o), 2);
    let m = manifest(&out);
    assert_eq!(m["complete"], false);
    assert_eq!(m["leaves"][0]["status"], "no_convergence");
    assert!(m["leaves"][0]["error"].as_str().unwrap().contains("stalled"));
    let (header, rows) = read_csv(&out.join("surface.csv"));
    assert!(column(&header, &rows, "u").iter().all(|u| u.is_finite()));
    assert!(column(&header, &rows, "lambda").iter().all(|l| l.is_nan()));
}

#[test]
fn validate_default_config_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let (o, out) = cmc("validate", "{}", tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = report.as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for n in [
        "spacelike_bound",
        "gauss_identity",
        "curvature_bound",
        "beta_identity_convergence",
        "equidistant_flow_agreement",
        "dilatation_identity",
        "landslide_constancy",
        "domain_of_dependence",
    ] {
        assert!(names.contains(&n), "{n}");
    }
    assert!(report.as_array().unwrap().iter().all(|c| c["status"] != "fail"));
    let file: Value = serde_json::from_str(&fs::read_to_string(out.join("validation.json")).unwrap()).unwrap();
    assert_eq!(file, report);
}

#[test]
fn validate_trig_scenario_passes_every_check() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = small_mesh(r#", "boundary": {"family": "trig", "amplitude": 0.2, "frequency": 2}, "H_grid": [-1.0, 0.5]"#);
    let (o, _) = cmc("validate", &cfg, tmp.path());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    for c in report.as_array().unwrap() {
        assert_eq!(c["status"], "pass", "{c}");
    }
    assert_eq!(code(&o), 0);
}

#[test]
fn loosened_newton_tolerance_names_failing_check() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = r#"{"boundary": {"family": "trig", "amplitude": 0.3, "frequency": 2}, "H_grid": [0.5, 2.0], "tolerances": {"tol_newton": 1e-2}}"#;
    let (o, _) = cmc("validate", cfg, tmp.path());
    assert_eq!(code(&o), 3);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<&str> = report
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(failed.iter().all(|f| stderr.contains(f)), "{stderr}");
}

#[test]
fn config_defaults_are_materialized() {
    let cfg = ScenarioConfig::from_json("{}").unwrap();
    let echo = serde_json::to_value(&cfg).unwrap();
    assert_eq!(echo["boundary"]["family"], "identity");
    assert_eq!(echo["H_grid"], serde_json::json!([0.0]));
    assert_eq!(echo["mesh"], serde_json::json!({"R_max": 3.0, "n_r": 64, "n_theta": 128}));
    assert_eq!(echo["truncation"], "tail");
    assert!(matches!(ScenarioConfig::from_json(r#"{"seed": -1}"#), Err(CliError::Config(_))));
    assert_eq!(CliError::Config(String::new()).exit_code(), 1);
    assert_eq!(CliError::Invariant(vec![]).exit_code(), 3);
}

fn boundary_json() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(r#"{"family": "identity"}"#.to_string()),
        (0.0f64..0.6, 0.0f64..0.6, -3.0f64..3.0)
            .prop_map(|(x, y, r)| format!(r#"{{"family": "mobius", "a_re": {x}, "a_im": {y}, "rot": {r}}}"#)),
        (0.01f64..0.3, 1u32..4).prop_map(|(a, k)| format!(r#"{{"family": "trig", "amplitude": {a}, "frequency": {k}}}"#)),
        (-1.0f64..1.0).prop_map(|s| format!(r#"{{"family": "shear", "shear": {s}}}"#)),
    ]
}

proptest! {
    #[test]
    fn manifest_echo_reproduces_the_config(
        b in boundary_json(),
        h in proptest::collection::btree_set(-400i32..400, 1..5),
        n_r in 8usize..80,
        half in 8usize..80,
        seed in any::<u64>(),
    ) {
        let grid: Vec<f64> = h.into_iter().map(|k| k as f64 / 100.0).collect();
        let text = format!(
            r#"{{"boundary": {b}, "H_grid": {grid:?}, "mesh": {{"R_max": 2.5, "n_r": {n_r}, "n_theta": {}}}, "seed": {seed}}}"#,
            2 * half
        );
        let cfg = ScenarioConfig::from_json(&text).unwrap();
        let echo = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(ScenarioConfig::from_json(&echo).unwrap(), cfg);
    }

    #[test]
    fn csv_floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let mut t = CsvTable::new(&["x"]);
        t.row(&[Cell::Float(x)]);
        let text = String::from_utf8(t.into_bytes()).unwrap();
        let cell = text.lines().nth(2).unwrap();
        prop_assert_eq!(cell.parse::<f64>().unwrap().to_bits(), x.to_bits());
        prop_assert!(cell.len() <= 24);
    }
}
