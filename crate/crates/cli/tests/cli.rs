use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn uniqmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniqmod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const X2_FREE: &str = r#"{
  "schema_version": 1,
  "function": {"family": "poly", "coeffs": [0, 0, 1]},
  "constraints": {"n": 1, "entries": [{"k": 1}]},
  "p0": [0, 0],
  "options": {"grid_eps": 1e-3, "delta": 0.1, "mode": "with_l", "seed": 3, "samples": 60}
}"#;

#[test]
fn schur_values() {
    let out = uniqmod(&["schur", "--h", "2,0", "--points", "1,0.5"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["value"], 1.5);
    assert_eq!(v["lambda"], serde_json::json!([1, 0]));
    assert_eq!(v["tableau_count"], 2);

    let exact = stdout_json(&uniqmod(&["schur", "--h", "2,0", "--points", "1,1/2", "--exact"]));
    assert_eq!(exact["value"], "3/2");

    let cap = stdout_json(&uniqmod(&["schur", "--cap", "2"]));
    assert_eq!(cap["schur_cap"], 2);

    let empty = stdout_json(&uniqmod(&["schur", "--lambda", "0,0", "--points", "0.3,0.9"]));
    assert_eq!(empty["value"], 1.0);

    let tableaux = stdout_json(&uniqmod(&["schur", "--lambda", "2,1", "--points", "1/2,1/2", "--exact"]));
    assert_eq!(tableaux["value"], "1/4");
}

#[test]
fn schur_rejects_malformed_input() {
    for args in [
        &["schur", "--h", "0,2", "--points", "1,0.5"][..],
        &["schur", "--h", "2,0", "--points", "1,zz"],
        &["schur", "--h", "2,0"],
        &["schur", "--lambda", "1,0", "--points", "0.5"],
        &["schur"],
        &["schur", "--cap", "99"],
    ] {
        assert_eq!(code(&uniqmod(args)), 2, "{args:?}");
    }
}

#[test]
fn certify_passes_and_gamma_follows_the_chain() {
    let dir = TempDir::new().unwrap();
    let problem = write(&dir, "x2.json", X2_FREE);
    let out = uniqmod(&["certify", s(&problem), "--no-timestamp"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "PASS");
    let cert = &v["report"]["certificate"];
    let gamma = cert["gamma"].as_f64().unwrap();
    assert!(gamma > 0.0);

    // recompute γ from L and M: n = 1, N_1 = 1, F_1 = 3, Lipschitz constant 2
    let l = cert["l"].as_f64().unwrap();
    let m = cert["m_cap"].as_f64().unwrap();
    let lip = 2.0 * (1.0 + 1e-12);
    let chi = 1f64.min((l / 2.0) / (4.0 * m + 1.0)).min((l / 4.0) / lip);
    let expected = (chi / 2.0).powf(2.5) / (10.0 * 1.0 * 2.0 * 4.0);
    assert!((gamma - expected).abs() <= 1e-12 * expected, "{gamma} vs {expected}");
    assert!((cert["chi_half_l"].as_f64().unwrap() - chi).abs() <= 1e-15);
    assert_eq!(cert["schur_cap_exact"], "1");
    assert_eq!(cert["f_n"], 3.0);
    let provenance = cert["provenance"].as_array().unwrap();
    for q in ["M", "N_n", "F_n", "exponent", "denominator", "L", "chi(L/2)", "gamma"] {
        assert!(provenance.iter().any(|p| p["quantity"] == q), "missing provenance for {q}");
    }
}

#[test]
fn certify_reports_are_reproducible_and_embed_input() {
    let dir = TempDir::new().unwrap();
    let problem = write(&dir, "x2.json", X2_FREE);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let run = uniqmod(&["certify", s(&problem), "--no-timestamp", "--out", s(out)]);
        assert_eq!(code(&run), 0);
        assert!(String::from_utf8_lossy(&run.stdout).starts_with("PASS"));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.contains(X2_FREE.trim()), "input is not embedded verbatim");
    assert!(!text.contains("generated_at_unix"));

    let stamped = stdout_json(&uniqmod(&["certify", s(&problem)]));
    assert!(stamped["generated_at_unix"].as_u64().is_some());
}

#[test]
fn certify_input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let empty_box = write(
        &dir,
        "bad.json",
        r#"{"schema_version":1,"function":{"family":"poly","coeffs":[0,0,1]},
            "constraints":{"n":1,"entries":[{"k":1,"lower":1,"upper":0}]}}"#,
    );
    assert_eq!(code(&uniqmod(&["certify", s(&empty_box)])), 2);

    let unknown = write(
        &dir,
        "unknown.json",
        r#"{"schema_version":1,"function":{"family":"poly","coeffs":[1]},"constraints":{"n":1},"color":"red"}"#,
    );
    assert_eq!(code(&uniqmod(&["certify", s(&unknown)])), 2);
    assert_eq!(code(&uniqmod(&["certify", "/nonexistent/problem.json"])), 2);

    // f already in K: E = 0 leaves no positive L
    let in_k = write(
        &dir,
        "ink.json",
        r#"{"schema_version":1,"function":{"family":"poly","coeffs":[1,2]},"constraints":{"n":1}}"#,
    );
    assert_eq!(code(&uniqmod(&["certify", s(&in_k)])), 2);
    let in_k_free = write(
        &dir,
        "ink_free.json",
        r#"{"schema_version":1,"function":{"family":"poly","coeffs":[1,2]},"constraints":{"n":1},
            "options":{"mode":"l_free","samples":40}}"#,
    );
    let out = uniqmod(&["certify", s(&in_k_free), "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["report"]["psi_star_check"]["holds"].as_bool().unwrap());
}

#[test]
fn certify_with_zero_delta() {
    let dir = TempDir::new().unwrap();
    let problem = write(&dir, "d0.json", &X2_FREE.replace("\"delta\": 0.1", "\"delta\": 0"));
    let out = uniqmod(&["certify", s(&problem), "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["report"]["pair_test"]["psi"], 0.0);
    assert_eq!(v["report"]["pair_test"]["admitted"], 0);
}

#[test]
fn solve_writes_result_and_csv() {
    let dir = TempDir::new().unwrap();
    let problem = write(
        &dir,
        "capped.json",
        r#"{"schema_version":1,"function":{"family":"poly","coeffs":[0,0,1]},
            "constraints":{"n":1,"entries":[{"k":1,"upper":0.5}]}}"#,
    );
    let csv = dir.path().join("grid.csv");
    let out = uniqmod(&["solve", s(&problem), "--csv", s(&csv)]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let e = v["result"]["e_low"].as_f64().unwrap();
    assert!((e - 9.0 / 32.0).abs() < 1e-4);
    assert_eq!(v["result"]["active_set"], serde_json::json!([1]));

    let rows = fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("t,f,p_star,error"));
    assert_eq!(lines.count() as u64, v["result"]["grid"]["count"].as_u64().unwrap());
}

#[test]
fn validate_suites() {
    let out = uniqmod(&["validate", "--suite", "schur", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("schur") && !text.contains("FAIL"));

    let all = uniqmod(&["validate", "--suite", "all", "--seed", "0", "--json"]);
    assert_eq!(code(&all), 0);
    let reports = stdout_json(&all);
    let names: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["schur", "interp", "bounds", "certify"]);
    assert!(reports.as_array().unwrap().iter().all(|r| r["failed"] == 0));

    let again = uniqmod(&["validate", "--suite", "all", "--seed", "0", "--json"]);
    assert_eq!(all.stdout, again.stdout);

    assert_eq!(code(&uniqmod(&["validate", "--suite", "nope"])), 2);
}

#[test]
fn thread_cap_from_environment() {
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_uniqmod"))
            .args(["schur", "--cap", "3"])
            .env("UNIQMOD_THREADS", value)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 0);
    assert_eq!(code(&run("zero")), 2);
    assert_eq!(code(&run("0")), 2);
}
