use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commutant-forge"))
        .args(args)
        .env_remove("COMMUTANT_FORGE_SEED")
        .env_remove("COMMUTANT_FORGE_EXPECTATIONS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn commutant_a1_json_has_two_linear_solutions() {
    let o = run(&["commutant", "--algebra", "c2", "--sub", "a1", "--max-degree", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["strata"]["1"].as_array().unwrap().len(), 2);
    assert_eq!(v["strata"]["2"].as_array().unwrap().len(), 4);
    assert_eq!(v["kernel_dims"]["2"], 7);
}

#[test]
fn commutant_borel_has_two_quadratics() {
    let o = run(&["commutant", "--algebra", "c2", "--sub", "borel", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("degree 1: kernel 0, new 0"), "{out}");
    assert!(out.contains("degree 2: kernel 2, new 2"), "{out}");
    assert!(out.contains("x1*x6 - x2*x5 - 2*x3*x4"), "{out}");
}

#[test]
fn inline_subalgebra_matches_label() {
    let a = run(&["commutant", "--sub", "x1", "--max-degree", "3", "--format", "json"]);
    let b = run(&["commutant", "--sub", "a1", "--max-degree", "3", "--format", "json"]);
    let va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(va["strata"], vb["strata"]);
}

#[test]
fn unknown_sub_lists_labels() {
    let o = run(&["commutant", "--sub", "zzz"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("zzz"));
    assert!(err.contains("a_145") && err.contains("borel") && err.contains("su2-casimir"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["commutant", "--sub", "a1", "--max-degree", "0"]).status.code(), Some(1));
    assert_eq!(run(&["commutant", "--sub", "x1*x2"]).status.code(), Some(1));
    assert_eq!(run(&["commutant", "--algebra", "/nonexistent.json", "--sub", "full"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_a3() {
    let o = run(&["verify-paper", "--chain", "a3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS a3 bracket: {A2,A3} = -2*A3"), "{out}");
    assert!(out.contains("PASS a3 casimir-count: 4 functionally independent (expected 4)"), "{out}");
    assert!(!out.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn verify_su2_casimir_cubic_table() {
    let o = run(&["verify-paper", "--chain", "su2-casimir"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS su2-casimir closure"), "{out}");
    assert!(out.contains("WARN su2-casimir printed-generator"), "{out}");
}

#[test]
fn full_verification_has_no_failures_and_is_deterministic() {
    let a = run(&["verify-paper", "--seed", "1729"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = run(&["verify-paper", "--seed", "1729"]);
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.trim_end().ends_with("0 fail (seed 1729)"), "{out}");
}

#[test]
fn verify_json_report() {
    let o = run(&["verify-paper", "--chain", "a_12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["chain"] == "a_12"));
}

#[test]
fn failing_expectations_exit_two() {
    let path = std::env::temp_dir().join(format!("cf-broken-{}.json", std::process::id()));
    let broken = commutant_forge::regression::BUILTIN_EXPECTATIONS.replacen(
        "\"independence_bound\": 5",
        "\"independence_bound\": 4",
        1,
    );
    assert_ne!(broken, commutant_forge::regression::BUILTIN_EXPECTATIONS);
    std::fs::write(&path, broken).unwrap();
    let o = run(&["verify-paper", "--expectations", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("independence")));
}

#[test]
fn quantize_a1_relation() {
    let o = run(&["quantize", "--algebra", "c2", "--sub", "a1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[A2,A3] = A1^2 + A2^2"), "{out}");
    assert!(out.contains("A4 = X2*X6 + X3^2 - X4"), "{out}");
}

#[test]
fn quantize_a12_is_abelian() {
    let o = run(&["quantize", "--sub", "a_12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["abelian"], true);
    assert!(v["commutators"].as_array().unwrap().is_empty());
}

#[test]
fn empty_generator_set() {
    let o = run(&["quantize", "--generators", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(0 generators)"));
    let o = run(&["close", "--generators", "", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn close_json_entries() {
    let o = run(&["close", "--sub", "a3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = &v["table"]["brackets"][0];
    assert_eq!(first["lhs"], serde_json::json!([2, 3]));
    assert_eq!(first["expr"], serde_json::json!(["-2*A3"]));
    assert_eq!(first["remainder"], "");
}

#[test]
fn casimirs_of_a1() {
    let o = run(&["casimirs", "--sub", "a1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["independent_count"], 4);
    assert_eq!(v["realized_rank"], 3);
}

#[test]
fn realize_a3_constraints() {
    let o = run(&["realize", "--chain", "a3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("PASS a3 realized-constraint: R3*R6 = R4^2 + R5^2"), "{out}");
    assert!(out.contains("PASS a3 realized-constraint: R4 - R2^2 = -R1^2"), "{out}");
}

#[test]
fn realize_e2_central_extension() {
    let o = run(&["realize", "--chain", "e2-casimir"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS e2-casimir realized-linear"));
}

#[test]
fn realize_a1_notes_vanishing_generator() {
    let o = run(&["realize", "--chain", "a1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("R(A5) = 0"), "{out}");
    assert!(out.contains("PASS a1 realized-zero"), "{out}");
}

#[test]
fn algebra_show_and_validate() {
    let o = run(&["algebra", "show", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let json = stdout(&o);
    let path = std::env::temp_dir().join(format!("cf-algebra-{}.json", std::process::id()));
    std::fs::write(&path, &json).unwrap();
    let ok = run(&["algebra", "validate", "--algebra", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));

    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let broken = tamper(&mut v);
    std::fs::write(&path, serde_json::to_string(&broken).unwrap()).unwrap();
    let bad = run(&["algebra", "validate", "--algebra", path.to_str().unwrap()]);
    let sub = run(&["commutant", "--algebra", path.to_str().unwrap(), "--sub", "full"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(bad.status.code(), Some(2), "{}", stdout(&bad));
    assert!(stdout(&bad).contains("Jacobi"));
    assert_eq!(sub.status.code(), Some(1));
}

/// Doubles [X1,X3], which breaks the Jacobi identity.
fn tamper(v: &mut serde_json::Value) -> serde_json::Value {
    assert_eq!(v["brackets"][0]["terms"][0][1], "-1");
    v["brackets"][0]["terms"][0][1] = "-2".into();
    v.clone()
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("cf-out-{}.txt", std::process::id()));
    let o = run(&["commutant", "--sub", "a_12", "--max-degree", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("commutant of a_12"));
}
