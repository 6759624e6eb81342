use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn run(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pdrich"));
    cmd.args(args).env_remove("PDRICH_SEED");
    if let Some(seed) = seed_env {
        cmd.env("PDRICH_SEED", seed);
    }
    cmd.output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn dataset(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const PD: [&str; 4] = ["--alpha", "0.5", "--theta", "0.5"];

#[test]
fn kn_reports_exact_small_case() {
    let v = json(&[&PD[..], &["kn", "--n", "2", "--no-timestamp"]].concat());
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0][1].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((v["summary"]["mean"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-14);
}

#[test]
fn json_keys_are_sorted_and_floats_carry_seventeen_digits() {
    let out = run(&[&PD[..], &["predict", "--n", "2", "--k", "1", "--m", "1", "--no-timestamp"]].concat(), None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"mean\":3.9999999999999997e-1") || text.contains("\"mean\":4.0000000000000002e-1"), "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(v["method"], "exact");
}

#[test]
fn timestamp_present_unless_disabled() {
    let with = json(&[&PD[..], &["kn", "--n", "3"]].concat());
    assert!(with["timestamp"].is_u64());
    let without = json(&[&PD[..], &["kn", "--n", "3", "--no-timestamp"]].concat());
    assert!(without.get("timestamp").is_none());
}

#[test]
fn environment_seed_is_a_default_that_flags_override() {
    let args = [&PD[..], &["limit-sample", "--n", "2", "--k", "1", "--runs", "50", "--no-timestamp"]].concat();
    let from_env = run(&args, Some("99"));
    let from_flag = run(&[&args[..], &["--seed", "99"]].concat(), None);
    assert_eq!(from_env.stdout, from_flag.stdout);
    let overridden = run(&[&args[..], &["--seed", "5"]].concat(), Some("99"));
    let v: Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    assert_ne!(overridden.stdout, from_env.stdout);
}

#[test]
fn tsv_mirrors_json_rows() {
    let args = [&PD[..], &["pmf", "--n", "4", "--k", "2", "--m", "6", "--no-timestamp"]].concat();
    let v = json(&args);
    let tsv = String::from_utf8(run(&[&args[..], &["--format", "tsv"]].concat(), None).stdout).unwrap();
    let body: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "value\tprobability");
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(body.len(), rows.len() + 1);
    for (line, row) in body[1..].iter().zip(rows) {
        let cells: Vec<&str> = line.split('\t').collect();
        assert_eq!(cells[0].parse::<u64>().unwrap(), row[0].as_u64().unwrap());
        assert_eq!(cells[1].parse::<f64>().unwrap(), row[1].as_f64().unwrap());
    }
}

#[test]
fn fit_and_predict_from_csv() {
    let f = dataset("species,count\r\nfox,4\r\nowl,2\r\nbat,1\r\nelk,1\r\n\r\n");
    let path = f.path().to_str().unwrap();
    let fit = json(&["fit", "--input", path, "--no-timestamp"]);
    assert_eq!(fit["inputs"]["n"], 8);
    assert_eq!(fit["inputs"]["k"], 4);
    let alpha = fit["summary"]["alpha"].as_f64().unwrap();
    assert!(alpha > 0.0 && alpha < 1.0);
    let predict = json(&["predict", "--input", path, "--m", "10", "--alpha", "0.3", "--no-timestamp"]);
    assert_eq!(predict["inputs"]["alpha"].as_f64(), Some(0.3));
    assert_eq!(predict["inputs"]["params_source"], "fit+flags");
}

#[test]
fn counts_format_is_accepted() {
    let f = dataset("3\n1\n1\n");
    let v = json(&["predict", "--input", f.path().to_str().unwrap(), "--input-format", "counts", "--alpha", "0.5", "--theta", "1", "--m", "4", "--no-timestamp"]);
    assert_eq!(v["inputs"]["n"], 5);
    assert_eq!(v["inputs"]["k"], 3);
}

#[test]
fn malformed_input_reports_the_line() {
    for (text, needle) in [
        ("species,count\na,2\nb,zero\n", "line 3"),
        ("species,count\na,0\n", "line 2"),
        ("name,count\na,1\n", "line 1"),
        ("species,count\na,2\na,1\n", "duplicate"),
    ] {
        let f = dataset(text);
        let out = run(&["fit", "--input", f.path().to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(1));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("error:") && err.contains(needle), "{text:?}: {err}");
    }
}

#[test]
fn invalid_parameters_fail_cleanly() {
    let out = run(&["kn", "--alpha", "1.5", "--theta", "0.5", "--n", "3"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let out = run(&["kn", "--alpha", "0.5", "--theta", "-0.7", "--n", "3"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn large_m_falls_back_to_the_limit_law() {
    let out = run(&[&PD[..], &["predict", "--n", "2", "--k", "1", "--m", "50", "--exact-cap", "20", "--runs", "2000", "--no-timestamp"]].concat(), None);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("asymptotic"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["method"], "asymptotic");
    let forced = run(&[&PD[..], &["pmf", "--n", "2", "--k", "1", "--m", "50", "--method", "asymptotic"]].concat(), None);
    assert_eq!(forced.status.code(), Some(1));
}

#[test]
fn oracle_prints_exact_fractions() {
    let f = dataset("species,count\na,2\nb,1\nc,1\n");
    let v = json(&["oracle", "--alpha", "0.5", "--theta", "0.5", "--input", f.path().to_str().unwrap(), "--m", "2", "--no-timestamp"]);
    let exact: Vec<&str> = v["results"]["rows"].as_array().unwrap().iter().map(|r| r[2].as_str().unwrap()).collect();
    assert_eq!(exact, ["35/99", "4/9", "20/99"]);
}

#[test]
fn moments_and_asymptotic_grid() {
    let v = json(&[&PD[..], &["moments", "--n", "10", "--k", "4", "--m", "100", "--r", "1,2,3", "--no-timestamp"]].concat());
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 3);
    let grid = json(&[&PD[..], &["asym", "--n", "2", "--k", "1", "--points", "12", "--no-timestamp"]].concat());
    let rows = grid["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.as_array().unwrap().iter().skip(1).all(|c| c.as_f64().is_some_and(f64::is_finite))));
}

#[test]
fn deletion_check_and_simulate_run() {
    let v = json(&[&PD[..], &["deletion-check", "--n", "2", "--k", "1", "--m", "6", "--runs", "20000", "--seed", "3", "--no-timestamp"]].concat());
    assert!(v["results"]["rows"].as_array().unwrap().len() >= 3);
    let s = json(&[&PD[..], &["simulate", "--n", "10", "--runs", "1000", "--no-timestamp"]].concat());
    assert!(!s["results"]["rows"].as_array().unwrap().is_empty());
}
