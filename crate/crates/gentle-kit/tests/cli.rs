//! End-to-end tests of the `gentle-kit` binary: exit codes, output formats,
//! and the structured-output round trip on every command.

use std::path::PathBuf;
use std::process::{Command, Output};

use gentle_kit::io::read_structured;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gentle-kit"))
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn invariants_prints_the_phi_table() {
    let out = run(&["invariants", &fixture("ex1.qvr")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("phi(0, 3) = 1"), "{text}");
    assert!(text.contains("phi(2, 2) = 1"), "{text}");
    assert!(text.contains("phi(3, 2) = 1"), "{text}");
}

#[test]
fn invariants_structured_matches_expected_entries() {
    let out = run(&["invariants", &fixture("ex1.qvr"), "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let value = read_structured(&stdout(&out)).unwrap();
    assert_eq!(
        value["entries"],
        serde_json::json!([["0", "3", "1"], ["2", "2", "1"], ["3", "2", "1"]])
    );
}

#[test]
fn check_passes_on_ex1() {
    let out = run(&["check", &fixture("ex1.qvr"), "--k-max", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("checks passed"));
}

#[test]
fn apr_at_bad_vertex_exits_2_with_diagnostic() {
    let out = run(&["apr", &fixture("ex1.qvr"), "--vertex", "d"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("(r2)"), "{}", stderr(&out));
}

#[test]
fn apr_at_good_vertex_prints_the_reflection() {
    let out = run(&["apr", &fixture("ex2.qvr"), "--vertex", "x"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("arrow g1 c1 x"), "{text}");
    assert!(text.contains("rel g2 b1x"), "{text}");
}

#[test]
fn validate_failure_exits_1() {
    let dir = std::env::temp_dir();
    let path = dir.join("gentle_kit_disconnected.qvr");
    std::fs::write(
        &path,
        "quiver two\nvertex a b c d\narrow x a b\narrow y c d\n",
    )
    .unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("disconnected"));
}

#[test]
fn parse_error_exits_2_with_position() {
    let dir = std::env::temp_dir();
    let path = dir.join("gentle_kit_bad.qvr");
    std::fs::write(&path, "quiver bad\nvertex a b\narrow al a b\nrel al al\n").unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn gen_is_deterministic_and_honors_the_env_seed() {
    let a = run(&["gen", "6", "7", "--seed", "42"]);
    let b = run(&["gen", "6", "7", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));

    let c = bin()
        .args(["gen", "6", "7"])
        .env("GENTLE_KIT_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(stdout(&a), stdout(&c));

    let d = run(&["gen", "6", "7", "--seed", "43"]);
    assert_ne!(stdout(&a), stdout(&d));
}

#[test]
fn iso_exit_codes() {
    let same = run(&["iso", &fixture("a2.qvr"), &fixture("a2.qvr")]);
    assert_eq!(same.status.code(), Some(0));
    assert!(stdout(&same).contains("isomorphic"));
    let different = run(&["iso", &fixture("a2.qvr"), &fixture("kr.qvr")]);
    assert_eq!(different.status.code(), Some(1));
    assert!(stdout(&different).contains("not isomorphic"));
}

#[test]
fn repeat_output_reparses_and_validates() {
    let out = run(&["repeat", &fixture("ex1.qvr"), "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = gentle_kit::io::parse_qvr(&stdout(&out)).unwrap();
    assert_eq!(rep.vertices.len(), 18);
    assert_eq!(rep.arrows.len(), 31);
    let report = gentle_kit::quiver::validate(&rep, gentle_kit::quiver::Mode::Gentle).unwrap();
    assert!(report.pass);
}

#[test]
fn weld_applies_the_permutation() {
    let id = run(&["weld", &fixture("a2.qvr"), &fixture("a2.qvr")]);
    assert_eq!(id.status.code(), Some(0));
    let swapped = run(&[
        "weld",
        &fixture("a2.qvr"),
        &fixture("a2.qvr"),
        "--perm",
        "1,3,2",
    ]);
    assert_eq!(swapped.status.code(), Some(0));
    assert_ne!(stdout(&id), stdout(&swapped));
    let bad = run(&[
        "weld",
        &fixture("a2.qvr"),
        &fixture("ex1.qvr"),
        "--perm",
        "1,2,3",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn repeat_accepts_connecting_degrees() {
    let out = run(&["repeat", &fixture("a2.qvr"), "--k", "2", "--w", "4,0,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("arrow al*#1 b#1 a#2 deg=4"), "{text}");
    assert!(text.contains("arrow iota_b#1 b#1 b#2 deg=-1"), "{text}");

    let wrong_len = run(&["repeat", &fixture("a2.qvr"), "--k", "2", "--w", "1,2"]);
    assert_eq!(wrong_len.status.code(), Some(2));
}

#[test]
fn hochschild_prints_dimensions() {
    let out = run(&["hochschild", &fixture("ex1.qvr"), "--max-n", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("HH^0 = 1"), "{text}");
    assert!(text.contains("HH^6 = 1"), "{text}");
    assert!(text.contains("HH^7 = 1"), "{text}");
}

#[test]
fn matrix_reports_pass_on_a2() {
    let out = run(&["matrix", &fixture("a2.qvr"), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("dim V = 6"), "{text}");
    assert!(text.contains("almost standard: true"), "{text}");
}

#[test]
fn structured_output_is_parseable_on_every_command() {
    let ex1 = fixture("ex1.qvr");
    let ex2 = fixture("ex2.qvr");
    let a2 = fixture("a2.qvr");
    let invocations: Vec<Vec<&str>> = vec![
        vec!["validate", &ex1],
        vec!["threads", &ex1],
        vec!["invariants", &ex1],
        vec!["invariants", &ex1, "--graded"],
        vec!["blossom", &ex1],
        vec!["repeat", &ex1, "--k", "2"],
        vec!["weld", &a2, &a2],
        vec!["apr", &ex2, "--vertex", "x"],
        vec!["hochschild", &ex1],
        vec!["matrix", &a2],
        vec!["iso", &a2, &a2],
        vec!["gen", "5", "6", "--seed", "7"],
        vec!["check", &a2, "--k-max", "2"],
    ];
    for mut args in invocations {
        args.push("--format");
        args.push("structured");
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
        let text = stdout(&out);
        // Commands may emit several structured documents back to back; all
        // must parse.
        for chunk in split_documents(&text) {
            read_structured(&chunk).unwrap_or_else(|e| panic!("{args:?}: {e}\n{chunk}"));
        }
    }
}

/// Split concatenated pretty-printed JSON documents on top-level boundaries.
fn split_documents(text: &str) -> Vec<String> {
    let mut documents = Vec::new();
    let mut depth = 0i64;
    let mut current = String::new();
    let mut in_string = false;
    let mut escaped = false;
    for c in text.chars() {
        current.push(c);
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' | '[' => depth += 1,
            '}' | ']' => {
                depth -= 1;
                if depth == 0 {
                    documents.push(std::mem::take(&mut current));
                }
            }
            _ => {}
        }
    }
    documents
}
