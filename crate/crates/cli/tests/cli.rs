use std::path::Path;
use std::process::{Command, Output};

fn ulc_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulc-lab"))
        .args(args)
        .env_remove("ULC_LAB_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

#[test]
fn check_exit_codes_follow_verdicts() {
    let out = ulc_lab(&["check", "--family", "ula", "--lambda", "2", "--N", "5", "--test", "max-vs-poisson"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"]["status"], "Refuted");

    let out = ulc_lab(&["check", "--family", "binomial", "--m", "4", "--p", "1/4", "--test", "max-vs-poisson"]);
    assert_eq!(out.status.code(), Some(0));

    let out = ulc_lab(&["check", "--family", "ztp", "--lambda", "1", "--test", "ztp-strict"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["name"], "ZtpStrict");
}

#[test]
fn decimal_parameters_are_exact() {
    let a = ulc_lab(&["check", "--family", "binomial", "--m", "4", "--p", "0.25", "--test", "max-vs-poisson"]);
    let b = ulc_lab(&["check", "--family", "binomial", "--m", "4", "--p", "1/4", "--test", "max-vs-poisson"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn inconclusive_exits_two() {
    let out = ulc_lab(&[
        "--bits", "64", "--max-bits", "128", "--tail-eps", "1/10000000000000000000000000000000000000000",
        "check", "--family", "poisson", "--lambda", "1", "--test", "max-vs-poisson",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["check", "--family", "ula", "--lambda", "2", "--test", "fact1"][..],
        &["check", "--family", "ula", "--lambda", "x", "--N", "5", "--test", "fact1"],
        &["check", "--family", "ula", "--lambda", "2", "--N", "5", "--test", "nope"],
        &["sweep", "--family", "ula", "--lambda-range", "1,2,0", "--N-range", "5,6", "--check", "two-point"],
        &["--bits", "512", "--max-bits", "128", "check", "--family", "ula", "--lambda", "2", "--N", "5", "--test", "h"],
    ] {
        let out = ulc_lab(args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn unwritable_output_exits_74() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = ulc_lab(&[
        "--out", path.to_str().unwrap(),
        "sweep", "--family", "ula", "--lambda-range", "2,2,1", "--N-range", "5,5", "--check", "max-vs-poisson",
    ]);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn sweep_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let config = dir.path().join("spec.json");
    let spec = serde_json::json!({
        "family": "binomial",
        "m_range": [2, 6],
        "p_grid": "k_over_m",
        "checks": ["max-vs-poisson"],
        "output": { "path": report, "format": "json" },
    });
    std::fs::write(&config, spec.to_string()).unwrap();
    let out = ulc_lab(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("15 rows: 15 Certified, 0 Refuted"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 15);
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["sweep", "--family", "ula", "--lambda-range", "3/2,2,1/10", "--N-range", "5,8", "--check", "max-vs-poisson,h"];
    let a = ulc_lab(&args);
    let b = ulc_lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let body = stdout(&a);
    assert!(body.starts_with("lambda,N,check,verdict,gap_lo,gap_hi,mean_lo,mean_hi,"));
    assert_eq!(body.lines().count(), 1 + 6 * 4 * 2);
}

#[test]
fn region_map_outputs() {
    let out = ulc_lab(&["region-map", "--family", "ula", "--lambda-range", "2,2,1", "--N-range", "5,5", "--check", "two-point"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "lambda\\N,5\n2,C\n");

    let out = ulc_lab(&[
        "--format", "svg-data",
        "region-map", "--family", "ula", "--lambda-range", "1,3,1/2", "--N-range", "2,15", "--check", "two-point",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let map = json(&out);
    assert_eq!(map["cells"].as_array().unwrap().len(), 5);
    assert!(map["counts"]["R"].as_u64().unwrap() > 0);

    let out = ulc_lab(&["region-map", "--family", "ula", "--lambda-range", "1,3,1", "--N", "5", "--check", "two-point"]);
    assert_eq!(out.status.code(), Some(64));
}

fn entropy_bounds(out: &Output, i: usize) -> (f64, f64) {
    let doc = json(out);
    let e = &doc["entropies"][i]["entropy"];
    (e[0].as_str().unwrap().parse().unwrap(), e[1].as_str().unwrap().parse().unwrap())
}

#[test]
fn entropy_command() {
    let out = ulc_lab(&["entropy", "--family", "ula", "--lambda", "2", "--N", "5", "--alpha", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    let (lo, hi) = entropy_bounds(&out, 0);
    assert!(lo <= 1.2901505005669884 && 1.2901505005669883 <= hi);

    let out = ulc_lab(&["entropy", "--family", "explicit", "--weights", "1,1,1,1", "--alpha", "2"]);
    let (lo, hi) = entropy_bounds(&out, 0);
    assert!(lo <= 4f64.ln() + 1e-15 && 4f64.ln() - 1e-15 <= hi);

    let out = ulc_lab(&["entropy", "--family", "ztp", "--lambda", "1", "--alpha", "1/2"]);
    assert_eq!(out.status.code(), Some(0));

    let out = ulc_lab(&["entropy", "--family", "ztp", "--lambda", "1", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("Shannon"));
}

#[test]
fn bits_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ulc-lab"))
        .args(["check", "--family", "ula", "--lambda", "2", "--N", "5", "--test", "max-vs-poisson"])
        .env("ULC_LAB_BITS", "80")
        .output()
        .unwrap();
    assert_eq!(json(&out)["verdict"]["precision_used"], 80);
}

#[test]
fn pmf_command_round_trips() {
    let out = ulc_lab(&["pmf", "--family", "ula", "--lambda", "2", "--N", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let pmf = ulc_core::dist::DiscretePmf::from_json_str(&stdout(&out)).unwrap();
    assert_eq!(pmf.max_pmf_exact(), Some("30/109".parse().unwrap()));
}

#[test]
fn help_exits_zero() {
    assert_eq!(ulc_lab(&["--help"]).status.code(), Some(0));
    assert!(Path::new(env!("CARGO_BIN_EXE_ulc-lab")).exists());
}
