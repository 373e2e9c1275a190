use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigma-kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn analyze_text_and_json() {
    let classics = fixture("classics.fx");
    let out = run(&["analyze", classics.to_str().unwrap(), "--object", "easy_babbitt"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("limit degree: 2"));
    let out = run(&[
        "analyze",
        classics.to_str().unwrap(),
        "--object",
        "square_quotient",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["components"], 2);
    assert_eq!(v[0]["sigma_dimension"], 0);
}

#[test]
fn json_output_is_byte_stable() {
    let galois = fixture("galois.fx");
    let a = run(&["analyze", galois.to_str().unwrap(), "--json"]);
    let b = run(&["analyze", galois.to_str().unwrap(), "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn decompose_then_verify() {
    let classics = fixture("classics.fx");
    let out = run(&[
        "decompose",
        classics.to_str().unwrap(),
        "--object",
        "easy_babbitt",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let good = scratch("easy_babbitt_series.json");
    std::fs::write(&good, &out.stdout).unwrap();
    let ok = run(&["verify", classics.to_str().unwrap(), good.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("easy_babbitt: verified"));

    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v[0]["tail_power"] = serde_json::json!(5);
    let bad = scratch("easy_babbitt_mutated.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let fail = run(&["verify", classics.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("FAILED"));
}

#[test]
fn components_include_sigma_sets() {
    let out = run(&["components", fixture("galois.fx").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("sconnected3_swap: 2 component(s)"));
    assert!(text.contains("sconnected3_trivial: 3 component(s)"));
    assert!(text.contains("c4_negation: 3 component(s)"));
}

#[test]
fn classify_diagonal() {
    let out = run(&[
        "classify",
        fixture("classics.fx").to_str().unwrap(),
        "--object",
        "diagonal_c2",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["kind"], "recurrence");
    assert_eq!(v[0]["psi"], serde_json::json!([0, 1]));
}

#[test]
fn classify_rejects_non_simple_alphabet() {
    let out = run(&[
        "classify",
        fixture("classics.fx").to_str().unwrap(),
        "--object",
        "easy_babbitt",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_passes() {
    let out = run(&[
        "oracle",
        fixture("classics.fx").to_str().unwrap(),
        "--object",
        "square_quotient",
        "--oracle-depth",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("square_quotient: pass at depth 3"));
}

#[test]
fn undecided_exit_code() {
    let out = run(&[
        "components",
        fixture("classics.fx").to_str().unwrap(),
        "--object",
        "kitchens",
        "--max-level",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_exit_one() {
    let bad = scratch("broken.fx");
    std::fs::write(&bad, "[group c2]\nkind = cyclic\norder = two\n").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = run(&["analyze", fixture("classics.fx").to_str().unwrap(), "--object", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sigma-kit"))
        .args(["analyze", fixture("classics.fx").to_str().unwrap()])
        .env("SIGMA_KIT_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
