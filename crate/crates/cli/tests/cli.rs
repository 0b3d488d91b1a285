use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kr_core::io::{emit_automaton, emit_witness, WitnessDocument};
use kr_core::{fixtures, krohn_rhodes_decompose, CoveringWitness, KrOptions, Semiautomaton};
use tempfile::TempDir;

fn krd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krd")).args(args).output().expect("krd runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn write_automaton(dir: &TempDir, name: &str, a: &Semiautomaton) -> PathBuf {
    write(dir, name, &emit_automaton(a))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decompose_five_state_example() {
    let dir = TempDir::new().unwrap();
    let file = write_automaton(&dir, "five.json", &fixtures::five_state_cycle_and_merge());
    let out = krd(&["decompose", s(&file)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("simple grouplike: order 5"));
    assert!(text.contains("two-state reset"));
    assert!(text.contains("complete: yes"));
    assert!(!text.contains("failed"));
}

#[test]
fn decompose_single_state_is_trivial() {
    let dir = TempDir::new().unwrap();
    let file = write_automaton(&dir, "one.json", &fixtures::single_state(&["a", "b"]));
    let out = krd(&["decompose", s(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("leaves: 0"));
}

#[test]
fn decompose_with_group_cap_is_incomplete() {
    let dir = TempDir::new().unwrap();
    let file = write_automaton(&dir, "cr.json", &fixtures::five_state_cycle_and_reset());
    let out = krd(&["decompose", s(&file), "--cap-group", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("raw component"));
    assert!(stdout(&out).contains("complete: no"));
}

#[test]
fn decompose_exit_code_matches_tree_completeness() {
    let dir = TempDir::new().unwrap();
    for (name, a) in fixtures::all() {
        let file = write_automaton(&dir, &format!("{name}.json"), &a);
        let out = krd(&["decompose", s(&file), "--cap-group", "4"]);
        let options = KrOptions {
            cap_group: 4,
            ..KrOptions::default()
        };
        let complete = krohn_rhodes_decompose(&a, &options).unwrap().is_complete();
        assert_eq!(out.status.code(), Some(if complete { 0 } else { 3 }), "{name}");
    }
}

#[test]
fn decompose_report_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let file = write_automaton(&dir, "six.json", &fixtures::six_state_overlapping());
    let report = dir.path().join("report.json");
    let first = krd(&["decompose", s(&file), "--out", s(&report)]);
    let written = std::fs::read_to_string(&report).unwrap();
    let second = krd(&["decompose", s(&file), "--serial"]);
    assert_eq!(stdout(&first), stdout(&second));
    let json = krd(&["decompose", s(&file), "--json"]);
    assert_eq!(stdout(&json), written);
    let value: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(value["verified"], serde_json::Value::Bool(true));
    assert_eq!(value["tree"]["covered_states"], 6);
}

fn covering_files(dir: &TempDir, w: &CoveringWitness) -> (PathBuf, PathBuf, PathBuf) {
    (
        write_automaton(dir, "upper.json", w.upper()),
        write_automaton(dir, "lower.json", w.lower()),
        write(dir, "witness.json", &emit_witness(&WitnessDocument::from_covering(w))),
    )
}

#[test]
fn verify_three_state_covers_two_state() {
    let dir = TempDir::new().unwrap();
    let w = CoveringWitness::new(
        fixtures::three_state_reset_and_merge(),
        fixtures::two_state_flip_flop(),
        vec![Some(0), Some(1), None],
        vec![0, 1],
    )
    .unwrap();
    let (u, l, wf) = covering_files(&dir, &w);
    let out = krd(&["verify", s(&u), s(&l), s(&wf)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn verify_self_witness() {
    let dir = TempDir::new().unwrap();
    let a = fixtures::seven_state_three_block();
    let (u, l, wf) = covering_files(&dir, &CoveringWitness::identity(&a));
    let out = krd(&["verify", s(&u), s(&l), s(&wf), "--len", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_rejects_mutated_witness() {
    let dir = TempDir::new().unwrap();
    let a = fixtures::three_state_reset_and_merge();
    let mut doc = WitnessDocument::from_covering(&CoveringWitness::identity(&a));
    doc.phi[0].1 = "3".into();
    doc.phi[2].1 = "1".into();
    let u = write_automaton(&dir, "a.json", &a);
    let wf = write(&dir, "w.json", &emit_witness(&doc));
    let out = krd(&["verify", s(&u), s(&u), s(&wf)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("verification failed"));
    assert!(stderr(&out).contains("upper state `1`"));
}

#[test]
fn verify_hom_image_witness() {
    let dir = TempDir::new().unwrap();
    let a = fixtures::three_state_reset_and_merge();
    let one = fixtures::single_state(&["c"]);
    let doc = WitnessDocument {
        format_version: 1,
        kind: kr_core::WitnessKind::HomImage,
        phi: ["1", "2", "3"].iter().map(|x| (x.to_string(), "1".to_string())).collect(),
        xi: vec![("a".into(), "c".into()), ("b".into(), "c".into())],
    };
    let u = write_automaton(&dir, "a.json", &a);
    let l = write_automaton(&dir, "one.json", &one);
    let wf = write(&dir, "w.json", &emit_witness(&doc));
    assert_eq!(krd(&["verify", s(&u), s(&l), s(&wf)]).status.code(), Some(0));
}

#[test]
fn verify_unknown_label_is_parse_error() {
    let dir = TempDir::new().unwrap();
    let a = fixtures::two_state_flip_flop();
    let u = write_automaton(&dir, "a.json", &a);
    let wf = write(
        &dir,
        "w.json",
        r#"{"format_version":1,"kind":"covering","phi":[["9","1"]],"xi":[["a","a"],["b","b"]]}"#,
    );
    let out = krd(&["verify", s(&u), s(&u), s(&wf)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`9`"));
}

#[test]
fn monoid_of_three_state_example() {
    let dir = TempDir::new().unwrap();
    let file = write_automaton(&dir, "three.json", &fixtures::three_state_reset_and_merge());
    let out = krd(&["monoid", s(&file), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["order"], 4);
    let words: Vec<&str> = value["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["word"].as_str().unwrap())
        .collect();
    assert_eq!(words, ["id", "a", "b", "ab"]);
}

#[test]
fn monoid_of_identity_and_cycle() {
    let dir = TempDir::new().unwrap();
    let idle = Semiautomaton::from_images(&["a"], &[&[1, 2, 3]]).unwrap();
    let file = write_automaton(&dir, "idle.json", &idle);
    assert!(stdout(&krd(&["monoid", s(&file)])).starts_with("order: 1\n"));

    let cycle = Semiautomaton::from_images(&["a"], &[&[2, 3, 4, 5, 1]]).unwrap();
    let file = write_automaton(&dir, "cycle.json", &cycle);
    let out = krd(&["monoid", s(&file), "--json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["order"], 5);
    for e in value["elements"].as_array().unwrap() {
        assert!(matches!(e["class"].as_str(), Some("identity" | "permutation")));
    }
}

#[test]
fn monoid_cap_breach() {
    let dir = TempDir::new().unwrap();
    let file = write_automaton(&dir, "five.json", &fixtures::five_state_cycle_and_merge());
    assert_eq!(krd(&["monoid", s(&file), "--cap", "3"]).status.code(), Some(3));
}

#[test]
fn export_dot_counts() {
    let dir = TempDir::new().unwrap();
    let file = write_automaton(&dir, "three.json", &fixtures::three_state_reset_and_merge());
    let dot = stdout(&krd(&["export-dot", s(&file)]));
    assert_eq!(dot.matches("->").count(), 6);
    assert_eq!(dot.lines().filter(|l| l.trim().starts_with('"') && !l.contains("->")).count(), 3);

    let file = write_automaton(&dir, "one.json", &fixtures::single_state(&["a", "b"]));
    let split = stdout(&krd(&["export-dot", s(&file), "--no-merge"]));
    assert_eq!(split.matches("\"1\" -> \"1\"").count(), 2);
    let merged = stdout(&krd(&["export-dot", s(&file)]));
    assert_eq!(merged.matches("->").count(), 1);
    assert!(merged.contains("label=\"a,b\""));
}

#[test]
fn parse_error_names_the_symbol() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "bad.json",
        r#"{"format_version":1,"states":["p","q"],"alphabet":["a","go"],"transitions":{"a":["p","q"],"go":["p"]}}"#,
    );
    let out = krd(&["decompose", s(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`go`"));
}

#[test]
fn missing_file_is_io_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(krd(&["export-dot", s(&missing)]).status.code(), Some(4));
    assert_eq!(krd(&["--seed", "7", "monoid", s(&missing)]).status.code(), Some(4));
}
