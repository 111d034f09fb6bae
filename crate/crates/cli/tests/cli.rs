use std::process::{Command, Output};

use tempfile::TempDir;

fn aqrm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqrm"))
        .args(args)
        .env_remove("AQRM_DIM")
        .env_remove("AQRM_GAP_TOL")
        .env_remove("AQRM_COMM_TOL")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SCAN: [&str; 12] =
    ["--delta", "0.7", "--g-lo", "0.05", "--g-hi", "1.0", "--steps", "32", "--dim", "60", "--levels", "6"];

fn scan_args<'a>(model: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["scan"];
    v.extend_from_slice(model);
    v.extend_from_slice(&SCAN);
    v.extend_from_slice(extra);
    v
}

#[test]
fn coeffs_latex_n2() {
    let o = aqrm(&["coeffs", "--n", "2", "--format", "latex"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("B &= a_{-}^{2} + \\frac{\\Delta^{2}}{16g^{2}}"), "{s}");
    assert!(s.contains("% D_{0,0} = \\frac{\\Delta}{8g^{2}}"), "{s}");
}

#[test]
fn coeffs_json_n0_to_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.json");
    let o = aqrm(&["coeffs", "--n", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["N"], 0);
    for e in ["A", "B", "C", "D"] {
        assert_eq!(v[e].as_array().unwrap().len(), 1);
    }
}

#[test]
fn coeffs_n5_latex_has_every_element() {
    let s = stdout(&aqrm(&["coeffs", "--n", "5", "--format", "latex"]));
    for e in ["A &=", "B &=", "C &=", "D &="] {
        assert!(s.contains(e));
    }
    assert!(s.contains("a_{-}^{5}"));
}

#[test]
fn verify_symbolic_passes() {
    let o = aqrm(&["verify", "--n", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).ends_with("result: pass\n"));
}

#[test]
fn verify_symbolic_json_report() {
    let o = aqrm(&["verify", "--n", "2", "--report", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["equations"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_numeric_passes() {
    let o = aqrm(&[
        "verify", "--n", "1", "--mode", "numeric", "--delta", "0.5", "--g", "0.3", "--dim", "80", "--report", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["relative"].as_f64().unwrap() < 1e-10);
}

#[test]
fn zero_coupling_is_usage_error() {
    let o = aqrm(&["verify", "--n", "1", "--mode", "numeric", "--delta", "0.5", "--g", "0"]);
    assert_eq!(code(&o), 64);
    let o = aqrm(&["fit-j2", "--n", "1", "--delta", "0.5", "--g", "-0.2"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn corrupted_tables_fail_verification() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("t.json");
    let good = stdout(&aqrm(&["coeffs", "--n", "2"]));
    let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
    let entry = v["B"].as_array_mut().unwrap().iter_mut().find(|r| r["i"] == 0 && r["j"] == 2).unwrap();
    let poly = entry["poly"].clone();
    entry["poly"] = serde_json::json!([]);
    assert_ne!(poly, entry["poly"]);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();

    let o = aqrm(&["verify", "--tables", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));

    let o = aqrm(&["verify", "--tables", path.to_str().unwrap(), "--n", "3"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn fit_j2_leading_coefficients() {
    for n in ["0", "1", "4"] {
        let o = aqrm(&["fit-j2", "--n", n, "--delta", "0.5", "--g", "0.3", "--dim", "100", "--report", "json"]);
        assert_eq!(code(&o), 0, "N = {n}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["leading"]["error"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn integer_bias_scan_finds_true_crossing() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("c.json");
    let o = aqrm(&scan_args(&["--n", "1"], &["--out-json", json.to_str().unwrap()]));
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let trues = v.as_array().unwrap().iter().filter(|c| c["classification"] == "true-crossing").count();
    assert!(trues >= 1);
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("param,level,energy,parity"));
    assert_eq!(lines.count(), 32 * 6);
}

#[test]
fn half_integer_bias_scan_has_no_true_crossing() {
    let dir = TempDir::new().unwrap();
    let json = dir.path().join("c.json");
    let o = aqrm(&scan_args(&["--bias", "0.5"], &["--out-json", json.to_str().unwrap()]));
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(!text.contains("true-crossing"));
}

#[test]
fn scan_output_is_deterministic() {
    let a = aqrm(&scan_args(&["--n", "1"], &[]));
    let b = aqrm(&scan_args(&["--n", "1"], &["--sequential"]));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn scan_requires_exactly_one_model() {
    assert_eq!(code(&aqrm(&scan_args(&[], &[]))), 64);
    assert_eq!(code(&aqrm(&scan_args(&["--n", "1", "--bias", "1"], &[]))), 64);
}

#[test]
fn config_and_environment_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("aqrm.toml");
    std::fs::write(&cfg, "delta = 0.5\ng = 0.3\ndim = 70\n").unwrap();
    let run = |extra: &[&str], env_dim: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_aqrm"));
        c.args(["--config", cfg.to_str().unwrap(), "verify", "--n", "1", "--mode", "numeric", "--report", "json"]);
        c.args(extra).env_remove("AQRM_DIM");
        if let Some(d) = env_dim {
            c.env("AQRM_DIM", d);
        }
        let o = c.output().unwrap();
        assert_eq!(code(&o), 0);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["dim"].as_u64().unwrap()
    };
    assert_eq!(run(&[], None), 70);
    assert_eq!(run(&[], Some("90")), 70);
    assert_eq!(run(&["--dim", "60"], Some("90")), 60);

    std::fs::write(&cfg, "delta = 0.5\ng = 0.3\n").unwrap();
    assert_eq!(run(&[], Some("90")), 90);
}

#[test]
fn bad_input_is_usage_error() {
    assert_eq!(code(&aqrm(&["frobnicate"])), 64);
    assert_eq!(code(&aqrm(&["coeffs"])), 64);
    assert_eq!(code(&aqrm(&["coeffs", "--n", "x"])), 64);
    assert_eq!(code(&aqrm(&["--config", "/nonexistent/aqrm.toml", "coeffs", "--n", "1"])), 64);
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "colour = 3\n").unwrap();
    assert_eq!(code(&aqrm(&["--config", cfg.to_str().unwrap(), "coeffs", "--n", "1"])), 64);
    assert_eq!(code(&aqrm(&["--help"])), 0);
}

#[test]
fn unwritable_output_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("missing").join("t.json");
    assert_eq!(code(&aqrm(&["coeffs", "--n", "1", "--out", path.to_str().unwrap()])), 2);
}

#[test]
fn numeric_verify_without_point_is_usage_error() {
    assert_eq!(code(&aqrm(&["verify", "--n", "1", "--mode", "numeric", "--g", "0"])), 64);
}
