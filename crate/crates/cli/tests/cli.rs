use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_skewhom");

const CROSS: &str = r#"{
  "dim": 3,
  "backend": {"kind": "rational"},
  "bracket": [
    {"i": 0, "j": 1, "value": ["0", "0", "1"]},
    {"i": 1, "j": 2, "value": ["1", "0", "0"]},
    {"i": 0, "j": 2, "value": ["0", "-1", "0"]}
  ],
  "twist": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
}"#;

const ZERO_REP: &str = r#"{
  "m": 2,
  "rho": [
    [["0", "0"], ["0", "0"]],
    [["0", "0"], ["0", "0"]],
    [["0", "0"], ["0", "0"]]
  ],
  "phi": [["1", "0"], ["0", "-1"]]
}"#;

const COCHAIN: &str = r#"{
  "k": 1,
  "entries": [{"indices": [2], "value": ["1", "1/2"]}]
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

const QUICK: &[&str] = &["verify", "--theta", "1", "--k", "1", "--s", "0", "--samples", "20"];

#[test]
fn verify_reports_known_failure_with_exit_one() {
    let out = run(QUICK);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL  gl2[1].ad_squared_counterexample"));
    assert!(text.contains("PASS  se4[1].classify"));
}

#[test]
fn verify_json_is_deterministic_across_strategies() {
    let mut a = QUICK.to_vec();
    a.extend(["--format", "json"]);
    let mut b = a.clone();
    b.push("--sequential");
    let (a, b) = (run(&a), run(&b));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["passed"], false);
    assert!(doc["checks"].as_array().unwrap().len() > 5);
}

#[test]
fn verify_writes_csv_to_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let mut args = QUICK.to_vec();
    args.extend(["--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&run(&args)), 1);
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("name,passed,witness,note,millis\n"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["verify", "--theta", ""])), 2);
    assert_eq!(code(&run(&["verify", "--theta", "1/0"])), 2);
    assert_eq!(code(&run(&["verify", "--format", "xml"])), 2);
    assert_eq!(code(&run(&["counterexample", "sl3"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn check_algebra_builtins_and_files() {
    assert_eq!(code(&run(&["check-algebra", "se4:theta=1/2"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let cross = write(dir.path(), "cross.json", CROSS);
    let out = run(&["check-algebra", &cross]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("verdict Lie"));
}

#[test]
fn malformed_algebra_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["check-algebra", dir.path().join("missing.json").to_str().unwrap()])), 2);
    let broken = write(dir.path(), "broken.json", "{ \"dim\": 3,");
    assert_eq!(code(&run(&["check-algebra", &broken])), 2);
    let asym = CROSS.replacen(r#"{"i": 0, "j": 2, "value": ["0", "-1", "0"]}"#, r#"{"i": 2, "j": 0, "value": ["0", "-1", "0"]}"#, 1);
    let asym = asym.replacen(r#"{"i": 0, "j": 1"#, r#"{"i": 0, "j": 2, "value": ["0", "-1", "0"]}, {"i": 0, "j": 1"#, 1);
    let asym = write(dir.path(), "asym.json", &asym);
    let out = run(&["check-algebra", &asym]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("line"));
}

#[test]
fn cohomology_with_files() {
    let dir = tempfile::tempdir().unwrap();
    let cross = write(dir.path(), "cross.json", CROSS);
    let rep = write(dir.path(), "rep.json", ZERO_REP);
    let eta = write(dir.path(), "eta.json", COCHAIN);
    let out = run(&["cohomology", &cross, "--rep", &rep, "--k", "1", "--s", "1"]);
    assert_eq!(code(&out), 0);
    let out = run(&["cohomology", &cross, "--rep", &rep, "--cochain", &eta, "--k", "1", "--s", "0"]);
    assert_eq!(code(&out), 0);
    let bad = write(dir.path(), "bad.json", &ZERO_REP.replace(r#""m": 2"#, r#""m": 3"#));
    assert_eq!(code(&run(&["cohomology", &cross, "--rep", &bad, "--k", "1", "--s", "0"])), 2);
}

#[test]
fn cohomology_builtin_defaults_to_zero_representation() {
    let out = run(&["cohomology", "se4:theta=1", "--k", "1", "--s", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn nullspace_emits_csv() {
    let out = run(&["nullspace", "--theta", "1", "--samples", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,z,inner,cross,pz,causal,z_in_v_star,pz_in_v_star"));
    assert_eq!(lines.count(), 6);
    assert_eq!(run(&["nullspace", "--theta", "1", "--samples", "3", "--seed", "9"]).stdout, run(&["nullspace", "--theta", "1", "--samples", "3", "--seed", "9"]).stdout);
}

#[test]
fn counterexample_families() {
    assert_eq!(code(&run(&["counterexample", "gl4"])), 0);
    assert_eq!(code(&run(&["counterexample", "gl2", "--theta", "3/4"])), 1);
}
