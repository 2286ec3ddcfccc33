use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn achrolab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_achrolab"))
        .args(args)
        .current_dir(dir)
        .env_remove("ACHROLAB_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn construct_writes_a_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = achrolab(&["construct", "--q", "7", "-o", "m7.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["colours"], 17);
    assert_eq!(doc["member"], true);
    let text = std::fs::read_to_string(dir.path().join("m7.txt")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("6 7"));
    assert_eq!(lines.next(), Some("1 2 3 x1 x2 y1 y2"));
    let mut tokens: Vec<&str> = lines.flat_map(str::split_whitespace).collect();
    tokens.sort();
    tokens.dedup();
    assert_eq!(tokens.len(), 17);
}

#[test]
fn construct_rejects_bad_q() {
    let dir = tempfile::tempdir().unwrap();
    for q in ["8", "5", "0"] {
        let out = achrolab(&["construct", "--q", q], dir.path());
        assert_eq!(out.status.code(), Some(2), "q={q}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
    }
}

#[test]
fn construct_latex() {
    let dir = tempfile::tempdir().unwrap();
    let out = achrolab(&["construct", "--q", "7", "--latex"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("\\begin{pmatrix}\n1 & 2 & 3 & x_{1} & x_{2} & y_{1} & y_{2} \\\\\n"));
}

#[test]
fn construct_then_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(achrolab(&["construct", "--q", "41", "-o", "m41.txt"], dir.path()).status.code(), Some(0));
    let out = achrolab(&["verify", "m41.txt", "--diagnose"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["member"], true);
    assert_eq!(doc["colours"], 85);
    assert_eq!(doc["diagnostics"]["context"]["s"], 3);
    assert!(doc["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn verify_reports_row_violation() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "2 3\na b c\nd e d\n").unwrap();
    let out = achrolab(&["verify", "bad.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["violation"]["line"], "row");
    assert_eq!(doc["violation"]["index"], 2);
    assert_eq!(doc["violation"]["colour"], "d");
}

#[test]
fn verify_lists_bad_pairs_of_incomplete_matrix() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("inc.txt"), "2 2\na b\nc d\n").unwrap();
    let doc = json(&achrolab(&["verify", "inc.txt"], dir.path()));
    assert_eq!(doc["proper"], true);
    assert_eq!(doc["bad_pair_count"], 2);
    assert_eq!(doc["bad_pairs"], serde_json::json!([["a", "d"], ["b", "c"]]));
}

#[test]
fn verify_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ragged.txt"), "2 3\na b c\nd e\n").unwrap();
    assert_eq!(achrolab(&["verify", "ragged.txt"], dir.path()).status.code(), Some(2));
    assert_eq!(achrolab(&["verify", "missing.txt"], dir.path()).status.code(), Some(2));
}

#[test]
fn bounds_examples() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json(&achrolab(&["bounds", "-p", "6", "-q", "41"], dir.path()));
    assert_eq!(doc["general_upper_bound"], 89);
    assert_eq!(doc["k6"]["lower"], 85);
    assert_eq!(doc["k6"]["exact"], 85);
    let doc = json(&achrolab(&["bounds", "-p", "6", "-q", "7"], dir.path()));
    assert_eq!(doc["general_upper_bound"], 21);
    assert_eq!(doc["k6"]["lower"], 17);
    assert_eq!(doc["k6"]["exact"], Value::Null);
    let doc = json(&achrolab(&["bounds", "-p", "1", "-q", "9"], dir.path()));
    assert_eq!(doc["general_upper_bound"], 9);
    assert_eq!(doc["k6"], Value::Null);
    assert_eq!(achrolab(&["bounds", "-p", "7", "-q", "6"], dir.path()).status.code(), Some(2));
}

#[test]
fn search_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = achrolab(&["search", "-p", "2", "-q", "3", "--exact", "-o", "w.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["achromatic_number"], 4);
    assert_eq!(doc["witness_file"], "w.txt");
    let verify = achrolab(&["verify", "w.txt"], dir.path());
    assert_eq!(verify.status.code(), Some(0));

    let out = achrolab(&["search", "-p", "2", "-q", "2", "--k", "3", "--exact"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["outcome"], "exhausted");

    let args = ["search", "-p", "6", "-q", "7", "--k", "17", "--heuristic", "--budget", "1000000", "--seed", "1"];
    assert_eq!(achrolab(&args, dir.path()).status.code(), Some(0));
}

#[test]
fn search_budget_and_usage_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = achrolab(&["search", "-p", "4", "-q", "5", "--k", "10", "--budget", "10"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["outcome"], "budget-exhausted");
    let out = achrolab(&["search", "-p", "2", "-q", "2", "--k", "3", "--heuristic", "--budget", "100"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let usage = [
        vec!["search", "-p", "3", "-q", "2", "--k", "3"],
        vec!["search", "-p", "2", "-q", "2", "--heuristic", "--budget", "5"],
        vec!["search", "-p", "2", "-q", "2", "--k", "2", "--heuristic"],
        vec!["search", "-p", "5", "-q", "5"],
        vec!["search", "-p", "2", "-q", "2", "--exact", "--heuristic"],
        vec!["frobnicate"],
    ];
    for args in usage {
        assert_eq!(achrolab(&args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn thread_variable_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_achrolab"))
            .args(["search", "-p", "4", "-q", "5", "--k", "10"])
            .env("ACHROLAB_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(run("4").stdout, one.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}
