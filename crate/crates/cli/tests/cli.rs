//! End-to-end tests of the `nhom` binary: exit codes, report formats,
//! determinism of machine-readable output, and the document round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn nhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("nhom-cli-test-{}-{name}", std::process::id()));
    p
}

const DUAL_NUMBERS: &str = r#"{
  "schema": "algebra/1",
  "p": 7,
  "dim": 2,
  "unit": [1, 0],
  "mult": [[[1,0],[0,1]],[[0,1],[0,0]]]
}"#;

/// Truncated polynomials with the top product corrupted to x^2.x^2 = 1,
/// so that (x^2.x^2).x^2 != x^2.(x^2.x^2).
const BROKEN_ALGEBRA: &str = r#"{
  "schema": "algebra/1",
  "p": 7,
  "dim": 3,
  "unit": [1, 0, 0],
  "mult": [
    [[1,0,0],[0,1,0],[0,0,1]],
    [[0,1,0],[0,0,1],[0,0,0]],
    [[0,0,1],[0,0,0],[1,0,0]]
  ]
}"#;

fn point_module(side: &str) -> String {
    format!(
        r#"{{
  "schema": "module/1",
  "algebra": {DUAL_NUMBERS},
  "dim": 1,
  "side": "{side}",
  "action": [[1],[0]]
}}"#
    )
}

#[test]
fn theorem1_passes_with_defaults_and_prints_the_cell_table() {
    let out = nhom(&["theorem1", "--nmax", "6"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("context: N=3 p=7 q=2"));
    assert!(text.contains("classical 0"));
    assert!(text.contains("zero"));
    assert!(text.trim_end().ends_with("result: PASS"));
}

#[test]
fn theorem1_accepts_an_explicit_field_and_algebra_file() {
    let algebra = tmp("dual.json");
    std::fs::write(&algebra, DUAL_NUMBERS).unwrap();
    let out = nhom(&[
        "theorem1",
        "--algebra",
        algebra.to_str().unwrap(),
        "--N",
        "3",
        "--p",
        "7",
        "--q",
        "4",
        "--nmax",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("context: N=3 p=7 q=4"));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let args = ["verify", "kapranov", "--seed", "5", "--format", "json"];
    let first = nhom(&args);
    let second = nhom(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&first)).expect("valid json");
    assert_eq!(doc["command"], "verify kapranov");
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["seed"], 5);
    assert_eq!(doc["instances"], 40);
}

#[test]
fn scalar_identities_cover_orders_two_through_six() {
    for identity in ["lemma55", "eq56"] {
        let out = nhom(&["verify", identity, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["pass"], true);
        let contexts = doc["contexts"].as_array().unwrap();
        let orders: Vec<u64> = contexts.iter().map(|c| c["N"].as_u64().unwrap()).collect();
        assert_eq!(orders, vec![2, 3, 4, 5, 6]);
        assert!(!doc["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn randomized_identities_pass_with_defaults() {
    for identity in ["delta-nilpotent", "hexagon", "snake", "kapranov"] {
        let out = nhom(&["verify", identity]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{identity} failed: {}{}",
            stdout(&out),
            stderr(&out)
        );
        assert!(stdout(&out).trim_end().ends_with("result: PASS"));
    }
}

#[test]
fn module_level_identities_pass_with_defaults() {
    for (identity, nmax) in [("cor33", "5"), ("cor46", "5"), ("tor-symmetry", "4")] {
        let out = nhom(&["verify", identity, "--nmax", nmax]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{identity} failed: {}{}",
            stdout(&out),
            stderr(&out)
        );
        assert!(stdout(&out).trim_end().ends_with("result: PASS"));
    }
}

#[test]
fn module_documents_feed_the_module_level_identities() {
    let m = tmp("pt-right.json");
    let n = tmp("pt-left.json");
    std::fs::write(&m, point_module("right")).unwrap();
    std::fs::write(&n, point_module("left")).unwrap();
    let out = nhom(&[
        "verify",
        "cor33",
        "--module-m",
        m.to_str().unwrap(),
        "--module-n",
        n.to_str().unwrap(),
        "--nmax",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).trim_end().ends_with("result: PASS"));
}

#[test]
fn dump_then_homology_round_trips() {
    let path = tmp("hochschild.json");
    let out = nhom(&[
        "dump",
        "--kind",
        "hochschild",
        "--nmax",
        "4",
        "--dump",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let out = nhom(&["homology", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("   p     n  dim"));
    assert!(text.trim_end().ends_with("result: PASS"));

    let out = nhom(&["homology", path.to_str().unwrap(), "--p-index", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dump_to_stdout_is_a_parsable_document() {
    let out = nhom(&["dump", "--kind", "bar", "--nmax", "3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema"], "simplicial/1");
    assert_eq!(doc["dims"][0], 2);
}

#[test]
fn qcalc_answers_queries_and_rejects_unknown_ones() {
    let out = nhom(&["qcalc", "qint", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("qint 4 = 1"));

    let out = nhom(&["qcalc", "--N", "5", "--auto-field", "qbin", "3", "1"]);
    assert_eq!(out.status.code(), Some(0));

    let out = nhom(&["qcalc", "frobnicate", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown query"));
}

#[test]
fn broken_algebra_is_an_input_error_naming_the_triple() {
    let path = tmp("broken.json");
    std::fs::write(&path, BROKEN_ALGEBRA).unwrap();
    let out = nhom(&["theorem1", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("associativity fails on basis triple"));
}

#[test]
fn input_errors_exit_two() {
    // Missing file.
    let out = nhom(&["homology", "/nonexistent/complex.json"]);
    assert_eq!(out.status.code(), Some(2));

    // Flavour out of range for the stored order.
    let path = tmp("small.json");
    let dump = nhom(&["dump", "--nmax", "3"]);
    std::fs::write(&path, dump.stdout).unwrap();
    let out = nhom(&["homology", path.to_str().unwrap(), "--p-index", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("out of range"));

    // A context without a valid deformation parameter.
    let out = nhom(&["theorem1", "--p", "5"]);
    assert_eq!(out.status.code(), Some(2));

    // One module document without its partner.
    let m = tmp("lonely.json");
    std::fs::write(&m, point_module("right")).unwrap();
    let out = nhom(&["verify", "cor33", "--module-m", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown identity and malformed flags are parse errors.
    let out = nhom(&["verify", "not-an-identity"]);
    assert_eq!(out.status.code(), Some(2));
    let out = nhom(&["qcalc", "--q", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_complex_documents_are_rejected_with_diagnostics() {
    let path = tmp("corrupt.json");
    let line = |d1: u64| {
        format!(
            r#"{{"schema":"ncomplex/1","context":{{"N":3,"p":7,"q":2}},"lo":0,"hi":3,
               "dims":[1,1,1,1],"diff":{{"1":[{d1}],"2":[1],"3":[1]}}}}"#
        )
    };

    // An entry outside the field is a serialization error.
    std::fs::write(&path, line(9)).unwrap();
    let out = nhom(&["homology", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("is not reduced modulo"));

    // In-range entries whose triple composite is 1 != 0 fail d^3 = 0.
    std::fs::write(&path, line(1)).unwrap();
    let out = nhom(&["homology", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("complex validation failed"));
}
