use std::io::Write;
use std::process::{Command, Output};

use ccg::reproduce::fixture;
use serde_json::Value;

fn ccg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccg")).args(args).output().unwrap()
}

fn scenario_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

fn gamma_column(out: &Output) -> Vec<f64> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["tables"][0]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["gamma"].as_f64().unwrap())
        .collect()
}

fn assert_close(got: &[f64], want: &[f64]) {
    assert_eq!(got.len(), want.len(), "{got:?}");
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-12, "{got:?} vs {want:?}");
    }
}

#[test]
fn gamma_of_tullock_contests() {
    let out = ccg(&["--format", "json", "gamma", "--tullock", "1", "--n", "2"]);
    assert_close(&gamma_column(&out), &[1.0, 0.25]);
    let out = ccg(&["--format", "json", "gamma", "--tullock", "1.2", "--n", "2"]);
    assert_close(&gamma_column(&out), &[1.0, 0.2]);
    let out = ccg(&["--format", "json", "gamma", "--tullock", "inf", "--n", "3"]);
    assert_close(&gamma_column(&out), &[1.0, 0.0, 0.0]);
}

#[test]
fn gamma_of_headcount_dependent_contest() {
    let contest = r#"{"reward":1,"tau_by_k":{"5":0,"6":0},"default_tau":"inf"}"#;
    let out = ccg(&["--format", "json", "gamma", "--contest", contest, "--n", "6"]);
    assert_close(&gamma_column(&out), &[1.0, 0.0, 0.0, 0.0, 0.2, 1.0 / 6.0]);
    let text = String::from_utf8(ccg(&["gamma", "--contest", contest, "--n", "6"]).stdout).unwrap();
    assert!(text.contains("MDU: false"), "{text}");
}

#[test]
fn malformed_scenario_exits_2() {
    let f = scenario_file(r#"{"m": 2"#);
    let out = ccg(&["--scenario", f.path().to_str().unwrap(), "solve"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = ccg(&["gamma", "--tullock", "-1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_mdu_with_three_designers_exits_3() {
    let c = r#"{"name": "C", "reward": 1, "tau_by_k": {"5": 0, "6": 0}, "default_tau": "inf"}"#;
    let json = format!(r#"{{"m": 3, "n": 6, "rewards": [1, 1, 1], "strategy_sets": [[{c}], [{c}], [{c}]]}}"#);
    let f = scenario_file(&json);
    let out = ccg(&["--scenario", f.path().to_str().unwrap(), "solve"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn enumeration_cap_exits_4() {
    let set = r#"[{"name": "A", "reward": 1, "tullock_tau": 1}, {"name": "B", "reward": 1, "tullock_tau": 2}]"#;
    let json = format!(
        r#"{{"m": 2, "n": 3, "rewards": [1, 1], "strategy_sets": [{set}, {set}], "tolerances": {{"enumeration_cap": 3}}}}"#
    );
    let f = scenario_file(&json);
    let out = ccg(&["--scenario", f.path().to_str().unwrap(), "equilibria"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reproduce_all_passes() {
    let out = ccg(&["reproduce", "all"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"), "{text}");
}

#[test]
fn csv_output_has_header_and_full_precision() {
    let f = scenario_file(&fixture("ex1").unwrap().to_canonical_json());
    let out = ccg(&[
        "--scenario",
        f.path().to_str().unwrap(),
        "--format",
        "csv",
        "solve",
        "--profile",
        "C,C",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("profile,p_1,p_2,u_1,u_2,u_c,W_D,W_C,W_S"));
    assert!(lines.next().unwrap().starts_with("\"(C,C)\",0.5,0.5,0.78125,0.78125,"));
}

#[test]
fn canonical_scenario_solves_identically() {
    let original = ccg::reproduce::fixture_text("welfare-ex").unwrap();
    let canonical = fixture("welfare-ex").unwrap().to_canonical_json();
    let (a, b) = (scenario_file(original), scenario_file(&canonical));
    let run =
        |f: &tempfile::NamedTempFile| ccg(&["--scenario", f.path().to_str().unwrap(), "--format", "json", "welfare"]);
    let (ra, rb) = (run(&a), run(&b));
    assert!(ra.status.success());
    assert_eq!(ra.stdout, rb.stdout);
}

#[test]
fn equilibria_of_asymmetric_rewards() {
    let f = scenario_file(ccg::reproduce::fixture_text("ex2").unwrap());
    let out = ccg(&[
        "--scenario",
        f.path().to_str().unwrap(),
        "--format",
        "json",
        "equilibria",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4, "{v}");
}

#[test]
fn oracle_is_deterministic() {
    let f = scenario_file(ccg::reproduce::fixture_text("ex1").unwrap());
    let path = f.path().to_str().unwrap();
    let args = [
        "--scenario",
        path,
        "--trials",
        "20000",
        "--seed",
        "7",
        "oracle",
        "--profile",
        "APA,C",
    ];
    let (a, b) = (ccg(&args), ccg(&args));
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(a.stdout, b.stdout);
}
