//! Drives the built binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn vng(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vng"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn act_applies_elements_to_points() {
    let dir = tempfile::tempdir().unwrap();
    let ident = write(dir.path(), "ident.txt", "- -> - ; ()\n");
    let flip = write(dir.path(), "flip.txt", "- -> - ; (1 2)\n");

    let out = vng(&["act", &ident, "1(2)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1(2)");

    let out = vng(&["act", &flip, "(21)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "(12)");

    let out = vng(&["act", &flip, "2("]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transducer_emits_the_reference_graph_and_runs_words() {
    let out = vng(&["transducer", "--group", "<(1 2)>", "--R", "1", "--dot"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "digraph transducer {\n\
         \x20 rankdir=LR;\n\
         \x20 q0 [label=\"()\", shape=doublecircle];\n\
         \x20 q1 [label=\"(1 2)\", shape=circle];\n\
         \x20 q0 -> q0 [label=\"1/1\"];\n\
         \x20 q0 -> q1 [label=\"2/2\"];\n\
         \x20 q1 -> q0 [label=\"1/2\"];\n\
         \x20 q1 -> q1 [label=\"2/1\"];\n\
         }\n"
    );

    let out = vng(&["transducer", "--group", "<(1 2)>", "--R", "1", "--apply", "22"]);
    assert_eq!(stdout(&out).trim(), "21");

    // the inverse machine undoes it
    let out = vng(&[
        "transducer", "--group", "<(1 2)>", "--R", "1", "--inverse", "--apply", "21",
    ]);
    assert_eq!(stdout(&out).trim(), "22");

    // trivial group: one looping state
    let out = vng(&["transducer", "--group", "<( )>", "--degree", "2", "--dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("q0 [label=\"()\""));
    assert!(!text.contains("q1 ["));

    // JSON output round-trips through the library parser
    let out = vng(&["transducer", "--group", "<(1 2 3)>", "--R", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let m = vng::transducer::SyncTransducer::from_json(&v).unwrap();
    assert_eq!(m.state_count(), 3);

    // a transversal must pick exactly one letter per orbit
    let out = vng(&["transducer", "--group", "<(1 2)>", "--R", "1,2", "--dot"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn phi_transports_elements_and_round_trips_files() {
    let dir = tempfile::tempdir().unwrap();
    let flip = write(dir.path(), "flip.txt", "- -> - ; (1 2)\n");
    let ident = write(dir.path(), "ident.txt", "- -> - ; ()\n");
    let ctx: &[&str] = &["--H", "<(1 2)>", "--R", "1", "--G", "<()>"];

    // the letterwise flip at the root maps onto the top-level swap
    let out = vng(&[&["phi"], ctx, &[flip.as_str()]].concat());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with('#'), "annotation header expected");
    assert!(text.contains("1 -> 2 ; ()\n2 -> 1 ; ()"));

    // identity in, identity out
    let out = vng(&[&["phi"], ctx, &[ident.as_str()]].concat());
    assert!(stdout(&out).contains("- -> - ; ()"));

    // inverse then forward reproduces the file byte for byte
    let one = write(dir.path(), "one.txt", &stdout(&out));
    let back = vng(&[&["phi", "--inverse"], ctx, &[one.as_str()]].concat());
    assert!(back.status.success());
    let two = write(dir.path(), "two.txt", &stdout(&back));
    let again = vng(&[&["phi"], ctx, &[two.as_str()]].concat());
    assert_eq!(stdout(&again), stdout(&out));

    // elements with tails outside HG are rejected up front
    let bad = write(dir.path(), "bad.txt", "- -> - ; (2 3)\n");
    let out = vng(&["phi", "--H", "<(1 2 3)>", "--R", "1", "--G", "<()>", &bad]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = vng(&["verify", "--lemmas", "--n", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all hold"));

    let out = vng(&["verify", "--dynamics", "--group", "<(1 2)>", "--n", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("fixes letter 3"));

    let out = vng(&["verify", "--dynamics", "--group", "<(1 2 3)>"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("acts freely"));

    let out = vng(&["verify", "--homomorphism", "--H", "<(1 2 3)>", "--R", "1", "--G", "<(2 3)>", "--samples", "25"]);
    assert!(out.status.success());

    // G fails to stabilize the transversal: precondition, not counterexample
    let out = vng(&["verify", "--homomorphism", "--H", "<(1 2 3)>", "--R", "2", "--G", "<(2 3)>"]);
    assert_eq!(out.status.code(), Some(2));

    // modes are mutually exclusive
    let out = vng(&["verify", "--lemmas", "--dynamics"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_prints_partitions_and_checks_expectations() {
    let out = vng(&["classify", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("1 certified isomorphism class"));

    let dir = tempfile::tempdir().unwrap();
    let expect = write(
        dir.path(),
        "expect3.json",
        r#"[["<()>","<(1 2 3)>"],["<(1 2)>","<(1 2 3),(1 2)>"]]"#,
    );
    let out = vng(&["classify", "3", "--expect", &expect]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("matches the expected partition"));

    let wrong = write(dir.path(), "wrong3.json", r#"[["<()>"],["<(1 2)>"]]"#);
    let out = vng(&["classify", "3", "--expect", &wrong]);
    assert_eq!(out.status.code(), Some(1));

    let out = vng(&["classify", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);

    // enumeration guard: degree above the budget is a usage error
    let out = vng(&["classify", "6"]);
    assert_eq!(out.status.code(), Some(2));
}
