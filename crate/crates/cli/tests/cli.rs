use std::io::Write;
use std::process::{Command, Output, Stdio};

fn pschur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pschur"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn pschur_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pschur"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn demo_checks_the_two_classical_rings() {
    let out = pschur(&["demo", "example-1.1"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("ring A1 (0,3,6,2,5,1)"));
    assert!(text.contains("schurian=true stabilizer=7 full=2401"));
    assert!(text.contains("ring A2 (0,4,2,5,6,1)"));
    assert!(text.contains("verdicts match expectations: true"));
}

#[test]
fn sequence_listing_at_seven() {
    let out = pschur(&["sequence", "enum", "--p", "7"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines, vec!["0,2,3,6,4,1", "0,3,6,2,5,1", "0,4,2,5,6,1"]);
}

#[test]
fn build_output_is_stable_and_validates() {
    let first = pschur(&["sring", "build", "--group", "h1", "--p", "5", "--canonical"]);
    let second = pschur(&["sring", "build", "--group", "h1", "--p", "5", "--canonical"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert!(text.starts_with("group=h1 p=5\n"));

    let validated = pschur_with_stdin(&["sring", "validate"], &text);
    assert!(validated.status.success());
    assert!(stdout_of(&validated).contains("45 classes (25 singleton)"));
}

#[test]
fn build_to_file_then_decide_schurity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.txt");
    let built = pschur(&[
        "sring",
        "build",
        "--group",
        "h1",
        "--p",
        "7",
        "--seq",
        "0,3,6,2,5,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(built.status.success());

    let all = pschur(&[
        "schurity",
        "all",
        "--sring",
        path.to_str().unwrap(),
        "--emit-generators",
        "--threads",
        "2",
    ]);
    assert!(all.status.success());
    let text = stdout_of(&all);
    assert!(text.contains("automorphism search: schurian=true"));
    assert!(text.contains("compatibility:       schurian=true"));
    assert!(text.contains("stabilizer order: 7"));
    assert!(text.contains("methods agree: true"));
    assert!(text.contains("generator 1:"));
}

#[test]
fn compat_verdict_over_stdin() {
    let ring = pschur(&[
        "sring", "build", "--group", "h2", "--p", "7", "--seq", "0,4,2,5,6,1",
    ]);
    let out = pschur_with_stdin(&["schurity", "compat"], &stdout_of(&ring));
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("schurian: false"));
    assert!(text.contains("witness found: false"));
    assert!(!text.contains("congruence table"), "no table outside the residue-map ring");
}

#[test]
fn compat_prints_witness_classes_and_congruence_table() {
    // Schurian ring: the witness permutation is listed class by class.
    let ring = pschur(&["sring", "build", "--group", "h1", "--p", "7", "--canonical"]);
    let out = pschur_with_stdin(&["schurity", "compat"], &stdout_of(&ring));
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("schurian: true"));
    assert!(text.contains("witness found: true"));
    assert_eq!(
        text.lines().filter(|l| l.trim_start().starts_with("class ")).count(),
        42,
        "one image line per outer class"
    );

    // Residue-map ring at p = 11: the three block congruences (in their
    // defining-coefficient form), the composition, and the refuting pair.
    let ring = pschur(&["sring", "build", "--group", "h1", "--p", "11", "--mod4-3"]);
    let out = pschur_with_stdin(&["schurity", "compat"], &stdout_of(&ring));
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("schurian: false"));
    assert!(text.contains("congruence table"));
    assert!(text.contains("blocks (1, 2) via relation 1: 1n = 7l (mod 11)"));
    assert!(text.contains("blocks (2, 3) via relation 1: 8n = 1l (mod 11)"));
    assert!(text.contains("blocks (1, 3) via relation 2: 6n = 5l (mod 11)"));
    assert!(text.contains("composed through the middle block: 1n = 5l (mod 11)"));
    assert!(text.contains("contradiction at (n, l) = (10, 1)"));
}

#[test]
fn scheme_export_shape() {
    let ring = pschur(&["sring", "build", "--group", "h2", "--p", "3", "--canonical"]);
    let out = pschur_with_stdin(&["scheme", "export"], &stdout_of(&ring));
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "group=h2 p=3 classes=15");
    assert_eq!(lines.clone().count(), 27);
    assert!(lines.all(|row| row.split(',').count() == 27));
}

#[test]
fn malformed_input_exits_two() {
    let out = pschur_with_stdin(&["sring", "validate"], "not a header\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_ring_exits_one() {
    // drop one class line so the union no longer covers the group
    let ring = stdout_of(&pschur(&[
        "sring", "build", "--group", "h1", "--p", "3", "--canonical",
    ]));
    let truncated: Vec<&str> = ring.lines().take(ring.lines().count() - 1).collect();
    let out = pschur_with_stdin(&["sring", "validate"], &truncated.join("\n"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wrong_residue_sequence_exits_one() {
    let out = pschur(&["sequence", "make", "--p", "13", "--mod4-3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn group_info_reports_center() {
    let out = pschur(&["group", "info", "--group", "h1", "--p", "3"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("order: 27"));
    assert!(text.contains("center: generated by a^3 (order 3)"));
}
