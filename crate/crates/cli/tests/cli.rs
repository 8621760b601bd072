use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synchrokit"))
        .args(args)
        .env_remove("SYNCHROKIT_WORKERS")
        .output()
        .unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_synchrokit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("synchrokit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn gen_text() {
    let o = run(&["gen", "--family", "v", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "3 3\na1 1 0 2\na2 0 2 1\na3 0 0 2\n"
    );
}

#[test]
fn rt_of_family_and_stdin() {
    let o = run(&["rt", "--family", "v", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rt"], 10);
    assert_eq!(v["verified"], true);
    assert_eq!(v["word"].as_array().unwrap().len(), 10);

    let o = run_stdin(&["rt", "-"], "4 2\na 1 2 3 0\nb 1 1 2 3\n");
    assert_eq!(json(&o)["rt"], 9);
}

#[test]
fn gen_file_round_trip() {
    let path = tmp("f7.json");
    let p = path.to_str().unwrap();
    let o = run(&[
        "gen", "--family", "f", "--n", "7", "--format", "json", "-o", p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let direct = json(&run(&["pair-diam", "--family", "f", "--n", "7"]));
    let from_file = json(&run(&["pair-diam", p]));
    assert_eq!(direct["diameter"], 15);
    assert_eq!(from_file["diameter"], 15);
    let m = json(&run(&["monoid-check", p]));
    assert_eq!(m["full_Tn"], false);
    assert_eq!(m["perm_group_order"], 2520);
    assert_eq!(m["two_transitive"], true);
}

#[test]
fn certify_eleven() {
    let o = run(&["certify", "--n", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["valid"], true);
    assert_eq!(v["N_q2q4"], 37);
    assert_eq!(v["bfs_distance"], 37);
    assert_eq!(v["tight"], true);
}

#[test]
fn word_methods_reset() {
    for method in ["exact", "pairchase", "extension"] {
        let o = run(&["word", "--method", method, "--family", "v", "--n", "6"]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        assert_eq!(json(&o)["verified"], true, "{method}");
    }
    let o = run(&["word", "--method", "cb", "--n", "5", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "word",
        "--method",
        "extension",
        "--family",
        "cerny",
        "--n",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two_quietly() {
    for args in [
        &["frobnicate"][..],
        &["rt", "/nonexistent/automaton.txt"],
        &["gen", "--family", "nope", "--n", "4"],
        &["rt"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = run_stdin(&["rt", "-"], "3 1\na 0 1 7\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_failures_exit_one() {
    let o = run_stdin(&["rt", "-"], "3 1\na 1 2 0\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o).is_object());

    let o = run_stdin(&["pair-diam", "-"], "3 1\na 0 1 2\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_and_version() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn export_dot() {
    let o = run(&[
        "export-dot",
        "--family",
        "f",
        "--n",
        "7",
        "--pairs",
        "--certificate",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("digraph pairs {"));
    assert!(dot.contains("\"q2q4\\n15\""));

    let o = run(&[
        "export-dot",
        "--family",
        "cerny",
        "--n",
        "4",
        "--zero-based-labels",
    ]);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.contains("[label=\"q0\"]"));
}

#[test]
fn search_then_summarize() {
    let path = tmp("rt5.jsonl");
    let p = path.to_str().unwrap();
    let _ = std::fs::remove_file(&path);
    let o = run(&[
        "search", "--n", "5", "--trials", "40", "--seed", "3", "--out", p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let live = json(&o);
    let o = run(&["search", "summarize", p]);
    assert_eq!(o.status.code(), Some(0));
    let stored = json(&o);
    assert_eq!(stored["experiment"], "random_reset_threshold");
    assert_eq!(stored["max"], live["max"]);
    assert_eq!(stored["synchronizing"], live["synchronizing"]);

    let o = Command::new(env!("CARGO_BIN_EXE_synchrokit"))
        .args(["search", "--n", "4", "--mode", "exhaustive"])
        .env("SYNCHROKIT_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["max_rt"], 8);
}
