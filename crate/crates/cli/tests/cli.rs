//! End-to-end tests of the `abctk` binary: exit codes, JSON schema and
//! output determinism.

use std::process::{Command, Output};

fn abctk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abctk"))
        .args(args)
        .env_remove("ABCTK_QUAD_TOL")
        .env_remove("ABCTK_FORMAT")
        .env_remove("ABCTK_WORKERS")
        .output()
        .expect("run abctk")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        !out.stdout.is_empty(),
        "no stdout; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not valid JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn pj_holds_on_the_identity_function() {
    let out = abctk(&["pj", "--f", "z", "--rho", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "pj");
    assert!(v["residual"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn pj_jensen_case_inside_unit_circle() {
    let out = abctk(&["pj", "--f", "z-1/2", "--rho", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["residual"].as_f64().unwrap().abs() < 1e-8);
    // v_inf = log |f(0)| = -log 2
    assert!((v["v_inf"].as_f64().unwrap() + 2f64.ln()).abs() < 1e-12);
}

#[test]
fn pj_guard_refusal_is_exit_two() {
    let out = abctk(&["pj", "--f", "z-1", "--rho", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn abc_mero_anchor_values() {
    let out = abctk(&["abc-mero", "--a", "z", "--b", "-1", "--c", "1-z", "--rho", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let h = v["h"].as_f64().unwrap();
    let r = v["r"].as_f64().unwrap();
    let slack = v["slack"].as_f64().unwrap();
    assert!((h - 0.783399618486).abs() < 1e-9);
    assert!((r - h - slack).abs() < 1e-15);
    assert!(slack.abs() < 1e-8);
    assert_eq!(v["sites"].as_array().unwrap().len(), 2);
}

#[test]
fn abc_mero_rejects_rho_below_one() {
    let out = abctk(&["abc-mero", "--a", "z", "--b", "-1", "--c", "1-z", "--rho", "0.5"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho must be >= 1"));
}

#[test]
fn abc_mero_rejects_constant_point() {
    let out = abctk(&["abc-mero", "--a", "1", "--b", "1", "--c", "-2", "--rho", "2"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("constant point"));
}

#[test]
fn scan_single_step_and_csv_file() {
    let dir = std::env::temp_dir().join("abctk-test-scan");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.csv");
    let out = abctk(&[
        "scan", "--a", "z", "--b", "-1", "--c", "1-z", "--rho-min", "2", "--rho-max", "2",
        "--steps", "1", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "scan");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["masked"], 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "rho,h,r_na,r_arch,r,slack,bound,exceeds,masked,quad_error"
    );
    assert_eq!(lines.count(), 1);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn scan_rejects_bad_grid() {
    let out = abctk(&[
        "scan", "--a", "z", "--b", "-1", "--c", "1-z", "--rho-min", "0.5", "--rho-max", "2",
        "--steps", "3",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_masks_the_exceptional_radius() {
    let out = abctk(&[
        "scan", "--a", "z", "--b", "-1", "--c", "1-z", "--rho-min", "1", "--rho-max", "3",
        "--steps", "5", "--C", "10",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["masked"], 1);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["masked"], true);
    assert!(rows[0]["h"].is_null());
    assert_eq!(rows[4]["masked"], false);
}

#[test]
fn proximity_constant_integrand() {
    let out = abctk(&["proximity", "--f", "z", "--rho", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!((v["m"].as_f64().unwrap() - 0.5 * 5f64.ln()).abs() < 1e-9);
}

#[test]
fn logder_lemma_margin_is_negative_for_powers() {
    let out = abctk(&["logder-lemma", "--f", "z^4", "--rho", "10"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["margin"].as_f64().unwrap() < 0.0);
    assert!((v["h"].as_f64().unwrap() - 0.5 * (1e8 + 1.0f64).ln()).abs() < 1e-6);
}

#[test]
fn abc_int_holds_for_the_example_triple() {
    let out = abctk(&["abc-int", "--triple", "1,8,-9"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["holds"], true);
    assert!((v["q_classical"].as_f64().unwrap() - 1.226294).abs() < 1e-5);
    assert_eq!(v["a"], "1");
}

#[test]
fn abc_int_rejects_nonzero_sum() {
    let out = abctk(&["abc-int", "--triple", "1,2,3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum nonzero"));
}

#[test]
fn abc_scan_top_triple() {
    let out = abctk(&["abc-scan", "--max-c", "10", "--top", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let top = &v["top"].as_array().unwrap()[0];
    assert_eq!(top["a"], "1");
    assert_eq!(top["b"], "8");
    assert_eq!(top["c"], "-9");
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn product_formula_examples() {
    for x in ["12", "5/9", "1", "-720"] {
        let out = abctk(&["product-formula", "--x", x]);
        assert_eq!(code(&out), 0, "x = {x}");
        let v = stdout_json(&out);
        assert!(v["residual"].as_f64().unwrap().abs() < 1e-12);
    }
    let out = abctk(&["product-formula", "--x", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn csv_format_has_fixed_header() {
    let out = abctk(&["--format", "csv", "abc-int", "--triple", "1,8,-9"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "a,b,c,h,r_na,psi,margin,holds,q_paper,q_classical"
    );
    assert!(lines.next().unwrap().starts_with("1,8,-9,"));
}

#[test]
fn identical_runs_produce_byte_identical_json() {
    let args = ["abc-mero", "--a", "z^2", "--b", "-1", "--c", "1-z^2", "--rho", "3"];
    let first = abctk(&args);
    let second = abctk(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);

    let scan_args = [
        "abc-scan", "--max-c", "60", "--top", "5", "--workers", "1",
    ];
    let one = abctk(&scan_args);
    let four = abctk(&["abc-scan", "--max-c", "60", "--top", "5", "--workers", "4"]);
    assert_eq!(one.stdout, four.stdout, "scan output depends on worker count");
}

#[test]
fn file_input_one_entry_per_line() {
    let dir = std::env::temp_dir().join("abctk-test-files");
    std::fs::create_dir_all(&dir).unwrap();
    let fns = dir.join("fns.txt");
    std::fs::write(&fns, "z\n\n2*z^2\n").unwrap();
    let out = abctk(&["pj", "--file", fns.to_str().unwrap(), "--rho", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 2, "one JSON object per input line");
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["residual"].as_f64().unwrap().abs() < 1e-8);
    }

    let triples = dir.join("triples.txt");
    std::fs::write(&triples, "1,8,-9\n3,5,-8\n").unwrap();
    let out = abctk(&["--format", "csv", "abc-int", "--file", triples.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 3, "header plus one row per triple");
    std::fs::remove_file(&fns).unwrap();
    std::fs::remove_file(&triples).unwrap();
}

#[test]
fn env_fallback_is_used_and_flag_takes_precedence() {
    let out = Command::new(env!("CARGO_BIN_EXE_abctk"))
        .args(["abc-int", "--triple", "1,8,-9"])
        .env("ABCTK_FORMAT", "csv")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("a,b,c,"), "env fallback ignored: {text}");

    let out = Command::new(env!("CARGO_BIN_EXE_abctk"))
        .args(["--format", "json", "abc-int", "--triple", "1,8,-9"])
        .env("ABCTK_FORMAT", "csv")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with('{'), "flag did not take precedence: {text}");
}
