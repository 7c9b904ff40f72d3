use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spldens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spldens"))
        .args(args)
        .env("RUST_LOG", "warn")
        .env_remove("SPLDENS_CUTOFF")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("spldens-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn spl_gaussian_integers() {
    let out = spldens(&["spl", "--poly", "1,0,1", "--galois-order", "2", "--from", "2", "--to", "30"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let lines = json_lines(&out);
    assert_eq!(lines[0]["ramified"], serde_json::json!([2]));
    let records = &lines[1..];
    let primes: Vec<u64> = records.iter().map(|r| r["p"].as_u64().unwrap()).collect();
    assert_eq!(primes, [3, 5, 7, 11, 13, 17, 19, 23, 29]);
    let split: Vec<u64> = records
        .iter()
        .filter(|r| r["splits"] == true)
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    // oracle: p ≡ 1 mod 4
    assert_eq!(split, primes.iter().copied().filter(|p| p % 4 == 1).collect::<Vec<_>>());
}

#[test]
fn spl_empty_range_prints_header_only() {
    let out = spldens(&["spl", "--modulus", "4", "--residues", "1", "--from", "100", "--to", "100"]);
    assert!(out.status.success());
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["ramified"], serde_json::json!([]));
}

#[test]
fn model_file_is_validated_at_load() {
    let bad = temp_file("nonsubgroup.json", r#"{"variant": "abelian", "modulus": 7, "residues": [1, 2, 3]}"#);
    let out = spldens(&["spl", "--model-file", bad.to_str().unwrap(), "--from", "2", "--to", "10"]);
    assert!(!out.status.success());
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("not closed under multiplication"), "{}", stderr(&out));

    let malformed = temp_file("malformed.json", "{\n  \"variant\": \"abelian\",\n  \"modulus\": 4\n}");
    let out = spldens(&["spl", "--model-file", malformed.to_str().unwrap(), "--from", "2", "--to", "10"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("missing field `residues`"), "{}", stderr(&out));
    let trailing = temp_file("trailing.json", "{\n  \"variant\": \"abelian\",\n  \"modulus\": 4,\n}");
    let out = spldens(&["spl", "--model-file", trailing.to_str().unwrap(), "--from", "2", "--to", "10"]);
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let good = temp_file("cubic.json", r#"{"variant": "splitting_field", "poly": [-2, 0, 0, 1], "galois_order": 6}"#);
    let out = spldens(&["frob", "--model-file", good.to_str().unwrap(), "--primes", "5,7,31"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let cycles: Vec<Value> = json_lines(&out).iter().map(|r| r["cycle_type"].clone()).collect();
    assert_eq!(cycles, [serde_json::json!([1, 2]), serde_json::json!([3]), serde_json::json!([1, 1, 1])]);
    for path in [bad, malformed, trailing, good] {
        std::fs::remove_file(path).ok();
    }
}

#[test]
fn frob_error_records_set_exit_code() {
    let out = spldens(&["frob", "--poly", "-2,0,0,1", "--galois-order", "6", "--primes", "3,5"]);
    assert!(!out.status.success());
    let lines = json_lines(&out);
    assert!(lines[0]["error"].as_str().unwrap().contains("ramified"));
    assert_eq!(lines[1]["cycle_type"], serde_json::json!([1, 2]));
}

#[test]
fn natural_density_table_trends_to_half() {
    let out = spldens(&[
        "--format", "csv", "density", "--poly", "1,0,1", "--galois-order", "2",
        "--cutoffs", "10^4,10^5,10^6",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let errors: Vec<f64> = rows
        .iter()
        .map(|r| (r[3].parse::<f64>().unwrap() - 0.5).abs())
        .collect();
    assert!(errors[2] < errors[0] && errors[2] < 0.005, "{errors:?}");
    assert!(rows.iter().all(|r| r[4] == "1/2"));
}

#[test]
fn all_primes_density_is_one() {
    let out = spldens(&["density", "--all-primes", "--cutoffs", "1000,10^5"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for e in v["estimates"].as_array().unwrap() {
        assert_eq!(e["value"], 1.0);
    }
}

#[test]
fn cubic_density_matches_chebotarev() {
    let out = spldens(&["density", "--poly", "-2,0,0,1", "--galois-order", "6", "--cutoffs", "1e6"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["reference"], "1/6");
    let value = v["estimates"][0]["value"].as_f64().unwrap();
    assert!((value - 1.0 / 6.0).abs() < 0.01, "{value}");
}

#[test]
fn cutoff_defaults_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_spldens"))
        .args(["density", "--all-primes"])
        .env("SPLDENS_CUTOFF", "5000")
        .output()
        .unwrap();
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["estimates"][0]["cutoff"], 5000);
}

#[test]
fn bounds_a1_report() {
    let out = spldens(&["bounds", "--type", "A1", "--m", "1", "--omega", "1/2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["r"], 3);
    assert_eq!(v["delta"], "1/12");
    assert_eq!(v["theta"], "3/8");
    // 13! by direct product
    let thirteen: u64 = (1..=13).product();
    assert_eq!(v["n_exact"], thirteen.to_string());
    assert_eq!(v["n_factored"]["factored"]["factorial_of"], 13);
}

#[test]
fn bounds_zero_omega_is_a_hypothesis_failure() {
    let out = spldens(&["bounds", "--type", "A1", "--m", "1", "--omega", "0"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("𝔡_K(S∩Spl(M/K)) > 0"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn invalid_arguments_are_rejected() {
    let out = spldens(&["bounds", "--type", "G3", "--m", "1", "--omega", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = spldens(&["weyl", "--type", "A2", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = spldens(&["density"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_output_is_byte_identical() {
    let args = [
        "density", "--modulus", "8", "--residues", "1", "--kind", "dirichlet", "--cutoffs", "10^5",
    ];
    let a = spldens(&args);
    let b = spldens(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn weyl_and_calculus_commands() {
    let out = spldens(&["weyl", "--type", "B3", "--enumerate"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["w"].as_str(), v["c"].as_u64()), (Some("48"), Some(10)));
    assert_eq!(v["enumerated_order"], 48);
    assert_eq!(v["enumerated_classes"], 10);

    let out = spldens(&["calculus", "tower", "--m", "1", "--t", "2", "--r", "3"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["union_density"], "7/8");

    let out = spldens(&["calculus", "inclusion-exclusion", "--r", "2", "--table", "1=1/2;2=1/2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("[1, 2]"), "{}", stderr(&out));
}

#[test]
fn verify_single_criterion() {
    let out = spldens(&["--format", "human", "verify", "--criterion", "7"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("[PASS] 7 bound-pipeline"));
    let out = spldens(&["verify", "--criterion", "9"]);
    assert_eq!(out.status.code(), Some(2));
}
