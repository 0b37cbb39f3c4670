//! End-to-end tests of the compiled binary: exit codes, output schemas,
//! reproducibility, and the CSV round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_uclass")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn write_cfg(dir: &TempDir, name: &str, cfg: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn cfg_path(dir: &TempDir, cfg: &Value) -> String {
    write_cfg(dir, "config.json", cfg).to_string_lossy().into_owned()
}

#[test]
fn missing_config_path_is_a_config_error() {
    let out = run(&["classify"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn malformed_json_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["classify", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn unknown_keys_and_wrong_version_are_rejected() {
    let dir = TempDir::new().unwrap();
    let extra = cfg_path(&dir, &json!({"schema_version": 1, "lambda": 0.4, "mu": [1.0, 0.0], "typo": 5}));
    let out = run(&["classify", "--config", &extra]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));

    let version = write_cfg(&dir, "v9.json", &json!({"schema_version": 9, "lambda": 0.4, "mu": [1.0, 0.0]}));
    let out = run(&["classify", "--config", version.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema_version"));
}

#[test]
fn invalid_parameters_are_a_config_error() {
    let dir = TempDir::new().unwrap();
    // |1 - mu| = 1.5 >= lambda: outside the class hypothesis.
    let path = cfg_path(&dir, &json!({"schema_version": 1, "lambda": 0.4, "mu": [2.5, 0.0]}));
    let out = run(&["classify", "--config", &path]);
    assert_eq!(code(&out), 2);
}

#[test]
fn construct_member_reports_support_and_coefficients() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "member", "lambda": 0.5, "mu": [1.0, 0.0],
                         "c": [0.25, 0.0], "omega": {"kind": "constant", "u": [0.0, 0.0]}},
            "order": 12
        }),
    );
    let out = run(&["construct", "--config", &path]);
    let doc = stdout_json(&out);
    assert_eq!(doc["command"], "construct");
    assert_eq!(doc["data"]["membership"]["verdict"]["kind"], "member-supported");
    // omega = 0 kills the integral term, so z/f = 1 + c z exactly.
    assert_eq!(doc["data"]["zf_coefficients"][1], json!([0.25, 0.0]));
    assert_eq!(doc["data"]["zf_coefficients"][2], json!([0.0, 0.0]));
    assert!(doc["provenance"]["tool"].as_str().unwrap().starts_with("uclass "));
    assert_eq!(doc["provenance"]["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn construct_extremal_k2_attains_unit_second_coefficient() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "extremal_k", "k": 2, "lambda": 1.0, "mu": [1.0, 0.0]},
            "order": 48
        }),
    );
    let doc = stdout_json(&run(&["construct", "--config", &path]));
    let b2 = &doc["data"]["zf_coefficients"][2];
    let modulus = (b2[0].as_f64().unwrap().powi(2) + b2[1].as_f64().unwrap().powi(2)).sqrt();
    assert!((modulus - 1.0).abs() <= 1e-9, "got |b2| = {modulus}");
}

#[test]
fn construct_supports_even_the_boundary_extremal_data() {
    let dir = TempDir::new().unwrap();
    // omega = -1 with c = -2 is the koebe data: |U - mu| = |z|^2 walks all
    // the way to the class boundary, yet stays strictly inside on every
    // interior ring. Construction can only refute through numerical
    // pathology; that exit path is exercised via verify with overridden
    // parameters instead.
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "member", "lambda": 1.0, "mu": [1.0, 0.0],
                         "c": [-2.0, 0.0], "omega": {"kind": "constant", "u": [-1.0, 0.0]}},
            "order": 16
        }),
    );
    let out = run(&["construct", "--config", &path]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["data"]["membership"]["verdict"]["kind"], "member-supported");
    let margin = doc["data"]["membership"]["margin"].as_f64().unwrap();
    assert!(margin > 0.0 && margin < 0.01, "boundary data leaves a thin margin, got {margin}");
}

#[test]
fn verify_koebe_against_narrow_band_exits_three() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "catalog", "name": "koebe"},
            "lambda": 0.5,
            "mu": [1.0, 0.0]
        }),
    );
    let out = run(&["verify", "--config", &path]);
    assert_eq!(code(&out), 3);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["data"]["checks"]["membership"]["verdict"]["kind"], "refuted-at");
    assert_eq!(doc["data"]["refuted"], json!(["membership"]));
}

#[test]
fn verify_moebius_member_passes_all_checks() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "catalog", "name": "moebius"}
        }),
    );
    let out = run(&["verify", "--config", &path]);
    let doc = stdout_json(&out);
    assert_eq!(doc["data"]["refuted"], json!([]));
    assert_eq!(doc["data"]["checks"]["membership"]["verdict"]["kind"], "member-supported");
    assert_eq!(
        doc["data"]["checks"]["univalence"]["verdict"]["kind"],
        "consistent-with-univalence"
    );
}

#[test]
fn coeffs_tabulates_bounds_for_the_k3_extremal() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "extremal_k", "k": 3, "lambda": 0.6, "mu": [0.8, 0.0]},
            "order": 48,
            "kmax": 6
        }),
    );
    let doc = stdout_json(&run(&["coeffs", "--config", &path]));
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows[0]["bound"].is_null(), "no bound applies at k = 1");
    let b3 = rows[2]["abs_b"].as_f64().unwrap();
    let bound3 = rows[2]["bound"].as_f64().unwrap();
    assert!((b3 - 0.26666666666666666).abs() <= 1e-9, "got {b3}");
    assert!((bound3 - b3).abs() <= 1e-9, "the k = 3 member attains its own bound");
}

#[test]
fn bounds_reproduce_closed_forms_at_unit_parameters() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({"schema_version": 1, "lambda": 1.0, "mu": [1.0, 0.0], "p": 1.0}),
    );
    let doc = stdout_json(&run(&["bounds", "--config", &path]));
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for (row, k) in rows[..5].iter().zip(2u32..) {
        let expected = 1.0 / (k as f64 - 1.0);
        assert_eq!(row["kind"], "bk");
        assert!((row["bound_value"].as_f64().unwrap() - expected).abs() <= 1e-12);
        assert!(row["gap"].as_f64().unwrap() >= -1e-9);
        assert!(row["gap"].as_f64().unwrap() <= 1e-9);
    }
    assert_eq!(rows[5]["kind"], "l2");
    assert_eq!(rows[6]["kind"], "a2");
    assert_eq!(rows[6]["bound_value"], json!(2.0));
}

#[test]
fn bounds_weighted_tail_row_and_na_second_coefficient() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({"schema_version": 1, "lambda": 0.6, "mu": [0.8, 0.0], "k_values": [2], "p": 0.5}),
    );
    let doc = stdout_json(&run(&["bounds", "--config", &path]));
    let rows = doc["data"]["rows"].as_array().unwrap();
    let l2 = &rows[1];
    assert!((l2["bound_value"].as_f64().unwrap() - 0.32).abs() <= 1e-12);
    assert!(l2["achieved_value"].as_f64().unwrap() >= 0.32 - 1e-6);

    // A complex ratio has no closed-form second-coefficient row.
    let path = cfg_path(
        &dir,
        &json!({"schema_version": 1, "lambda": 0.6, "mu": [0.8, 0.3], "k_values": [2], "p": 0.5}),
    );
    let doc = stdout_json(&run(&["bounds", "--config", &path]));
    let a2 = doc["data"]["rows"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(a2["kind"], "a2");
    assert!(a2["bound_value"].is_null());
    assert!(a2["note"].as_str().unwrap().contains("real"));
}

#[test]
fn classify_labels_the_three_regions_and_produces_a_witness() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (0.4, 1.0, "univalence_guaranteed"),
        (0.9, 1.15, "locally_univalent_open"),
        (0.9, 0.5, "contains_non_locally_univalent"),
    ];
    for (lambda, mu, expected) in cases {
        let path = cfg_path(&dir, &json!({"schema_version": 1, "lambda": lambda, "mu": [mu, 0.0]}));
        let doc = stdout_json(&run(&["classify", "--config", &path]));
        assert_eq!(doc["data"]["region"], *expected, "at ({lambda}, {mu})");
    }

    let path = cfg_path(&dir, &json!({"schema_version": 1, "lambda": 0.9, "mu": [0.5, 0.0]}));
    let doc = stdout_json(&run(&["classify", "--config", &path]));
    let witness = &doc["data"]["witness"];
    assert!((witness["abs_z1"].as_f64().unwrap() - 0.9214426752509267).abs() <= 1e-12);
    assert!(witness["f_prime_modulus"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn extremal_pole_reports_sharp_bound_and_boundary_pole() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "extremal_pole", "lambda": 0.8, "mu": [0.9, 0.0], "p": 0.7}
        }),
    );
    let doc = stdout_json(&run(&["extremal", "--config", &path]));
    let report = &doc["data"]["report"];
    assert!((report["bound_value"].as_f64().unwrap() - 1.9915087288751927).abs() <= 1e-12);
    assert!(report["gap"].as_f64().unwrap().abs() <= 1e-9);
    assert!(doc["data"]["pole_residual"].as_f64().unwrap() <= 1e-10);

    // A plain member is not an extremal request.
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "member", "lambda": 0.8, "mu": [0.9, 0.0],
                         "omega": {"kind": "constant", "u": [0.5, 0.0]}}
        }),
    );
    let out = run(&["extremal", "--config", &path]);
    assert_eq!(code(&out), 2);
}

#[test]
fn maximize_recovers_the_closed_form_at_zero_ratio() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "lambda": 1.0, "mu": [1.0, 0.0], "p": 1.0,
            "family": {"kind": "constant", "u": [-0.5, 0.0]},
            "starts": 6, "max_iters": 200, "seed": 7
        }),
    );
    let doc = stdout_json(&run(&["maximize", "--config", &path]));
    assert!((doc["data"]["best_value"].as_f64().unwrap() - 2.0).abs() <= 1e-6);
    assert_eq!(doc["data"]["a2_bound"], json!(2.0));
    assert!(doc["data"]["note"].as_str().unwrap().contains("lower bound"));
    assert_eq!(doc["data"]["history"].as_array().unwrap().len(), 6);
}

#[test]
fn subordination_rejects_the_solved_case_and_supports_a_real_ratio_row() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "points": [{"lambda": 0.6, "mu": [0.9, 0.0]}, {"lambda": 1.0, "mu": [1.0, 0.0]}],
            "samples_per_row": 3,
            "radii": [0.35, 0.5],
            "seed": 1
        }),
    );
    let out = run(&["subordination", "--config", &path]);
    assert_eq!(code(&out), 0, "embedded row errors do not fail the run");
    let doc = stdout_json(&out);
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0]["a"].as_f64().unwrap() - 1.0 / 6.0).abs() <= 1e-12);
    assert!(rows[0]["tested"].as_u64().unwrap() >= 2);
    assert_eq!(rows[0]["refuted"], json!(0));
    assert_eq!(rows[0]["supported"], rows[0]["tested"]);
    assert!(rows[1]["error"].as_str().unwrap().contains("already solved"));
}

#[test]
fn sweep_embeds_row_errors_and_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "schema_version": 1,
        "lambdas": [0.4, 0.9],
        "mus": [[1.0, 0.0], [2.5, 0.0]],
        "mc_samples": 1,
        "optimizer_starts": 2,
        "optimizer_iters": 60,
        "order": 24,
        "seed": 3
    });
    let path = cfg_path(&dir, &cfg);
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let run_a = run(&["sweep", "--config", &path, "--out", out_a.to_str().unwrap(), "--jobs", "2"]);
    let run_b = run(&["sweep", "--config", &path, "--out", out_b.to_str().unwrap()]);
    assert_eq!(code(&run_a), 0);
    assert_eq!(code(&run_b), 0);
    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same config and seed, same bytes");

    let doc: Value = serde_json::from_slice(&bytes_a).unwrap();
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["verdict"]["univalence_guaranteed"], json!(true));
    assert_eq!(rows[0]["b2_bound"], json!(0.4));
    assert!(rows[1]["error"].as_str().unwrap().contains("invalid class parameters"));
    assert!(rows[3]["error"].is_string());
    assert!(rows[2]["b2_bound"].as_f64().is_some());
}

#[test]
fn csv_output_carries_provenance_and_parses_back() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "catalog", "name": "koebe"},
            "radii": [0.9]
        }),
    );
    let out = run(&["plotdata", "--config", &path, "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# tool: uclass "));
    assert_eq!(lines[1], "# command: plotdata");
    assert!(lines[2].starts_with("# config_sha256: "));
    assert_eq!(lines[4], "r,theta,z,f,abs_f,u,abs_u_minus_mu");
    let data_rows = &lines[5..];
    assert_eq!(data_rows.len(), 512);

    // Every profile cell equals r^2 for this function, and the complex
    // cells parse back with num-complex.
    for row in data_rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 7);
        let z: Complex64 = cells[2].parse().expect("complex cell parses");
        assert!((z.norm() - 0.9).abs() <= 1e-12);
        let profile: f64 = cells[6].parse().unwrap();
        assert!((profile - 0.81).abs() <= 1e-10);
    }
}

#[test]
fn plotdata_rejects_unknown_catalog_names() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "catalog", "name": "lemniscate"},
            "radii": [0.5]
        }),
    );
    let out = run(&["plotdata", "--config", &path]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown catalog"));
    assert!(err.contains("koebe"), "the message lists what is available");
}

#[test]
fn identity_plot_rows_scale_the_unit_circle() {
    let dir = TempDir::new().unwrap();
    let path = cfg_path(
        &dir,
        &json!({
            "schema_version": 1,
            "function": {"source": "catalog", "name": "identity"},
            "radii": [0.25, 0.5],
            "angles": 16
        }),
    );
    let doc = stdout_json(&run(&["plotdata", "--config", &path]));
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 32);
    for row in rows {
        let r = row["r"].as_f64().unwrap();
        assert!((row["abs_f"].as_f64().unwrap() - r).abs() <= 1e-12);
        assert!(row["abs_u_minus_mu"].as_f64().unwrap() <= 1e-12);
    }
}
