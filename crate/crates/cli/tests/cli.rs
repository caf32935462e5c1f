use std::process::{Command, Output};

use serde_json::Value;

fn lagrange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagrange"))
        .args(args)
        .env_remove("LGR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn gauss_four_is_two_plus_two_i() {
    let out = lagrange(&["expsum", "gauss", "--q", "4", "--m", "1", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "expsum");
    assert_eq!(v["params"]["seed"], 0);
    let row = &v["results"][0];
    assert!((row["direct"]["re"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((row["direct"]["im"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["checks"][0]["pass"], true);
}

#[test]
fn kloosterman_five() {
    let out = lagrange(&["expsum", "kloosterman", "--q", "5", "--m", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json(&out)["results"][0];
    assert!((row["value"]["re"].as_f64().unwrap() - 0.381966).abs() < 1e-6);
    assert!((row["weil_bound"].as_f64().unwrap() - 4.472136).abs() < 1e-6);
}

#[test]
fn ramanujan_and_charsum() {
    let out = lagrange(&["expsum", "ramanujan", "--q", "12", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][0]["closed"], -2);

    let out = lagrange(&["expsum", "charsum", "--p", "11", "--coeffs", "1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][0]["value"], -1);
}

#[test]
fn vq_direct_and_fast_agree() {
    let out = lagrange(&[
        "expsum", "vq", "--q", "9", "--N", "7", "--d", "3", "--b", "1,1,1,2", "--n", "0,3,0,-3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn density_single_modulus() {
    let out = lagrange(&["density", "--N", "1", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json(&out)["results"][0];
    assert_eq!(row["l"], 8);
    assert_eq!(row["alpha"], "9/8");
    assert!((row["psi"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn density_table_is_csv_with_every_odd_prime() {
    let out = lagrange(&["density", "--N", "15", "--p-max", "100", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("d,l,alpha,psi,deviation"));
    assert_eq!(lines.count(), 24);
}

#[test]
fn even_target_is_a_usage_error() {
    let out = lagrange(&["density", "--N", "16", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn malformed_flags_are_usage_errors() {
    assert_eq!(lagrange(&["expsum", "gauss", "--q", "x"]).status.code(), Some(2));
    assert_eq!(lagrange(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(lagrange(&["expsum", "vq", "--q", "9", "--N", "7", "--d", "3", "--b", "1,2"]).status.code(), Some(2));
}

#[test]
fn verify_kappa_reports_two_estimates() {
    let out = lagrange(&["verify", "kappa"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json(&out)["results"][0];
    let gap = row["relative_gap"].as_f64().unwrap();
    assert!(gap < 1e-3);
    assert!(row["oscillatory_normalized"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_jacobi_and_sieve_pass() {
    let out = lagrange(&["verify", "jacobi", "--n-max", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let out = lagrange(&["verify", "sieve"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_endtoend_reports_the_assembly() {
    let out = lagrange(&["verify", "endtoend", "--N", "100003", "--z-exp", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let row = &v["results"][0];
    assert!(row["gamma"].as_f64().unwrap() >= row["lower_bound"].as_f64().unwrap());
}

#[test]
fn report_rows_and_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let out_file = dir.path().join("report.json");
    let args = [
        "report",
        "--N",
        "100003",
        "--d",
        "1,3,5",
        "--cache",
        cache,
        "--out",
        out_file.to_str().unwrap(),
    ];
    let first = lagrange(&args);
    assert_eq!(first.status.code(), Some(0));
    let v = json(&first);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["cache_hit"], false);

    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    assert_eq!(saved, v);

    let second = json(&lagrange(&args));
    assert_eq!(second["results"][0]["cache_hit"], true);
    assert_eq!(second["results"][0]["f"], v["results"][0]["f"]);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lagrange"))
            .args(["report", "--N", "10001"])
            .env("LGR_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(json(&run())["results"][0]["cache_hit"], false);
    assert_eq!(json(&run())["results"][0]["cache_hit"], true);
}

#[test]
fn output_is_deterministic() {
    let a = lagrange(&["verify", "jacobi", "--n-max", "999", "--seed", "7"]);
    let b = lagrange(&["verify", "jacobi", "--n-max", "999", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["params"]["seed"], 7);
}
