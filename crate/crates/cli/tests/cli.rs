use std::io::Write;
use std::process::{Command, Output};

fn twozeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twozeta")).args(args).output().expect("binary runs")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn genus_one_machine_report() {
    let out = twozeta(&["analyze", "--spec", "p=3; f=x^3+x", "--format", "machine", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"numerator_text\": \"T^2*u-T*u+3*T+1\""), "{text}");
    assert!(text.contains("\"class_number\": \"4\""));
    assert!(text.contains("\"all_passed\": true"));
    assert!(!text.contains("total_ms"));
}

#[test]
fn machine_reports_are_deterministic() {
    let args = ["analyze", "--spec", "p=3; f=x^5+1", "--format", "machine", "--no-timing"];
    let a = twozeta(&args);
    let b = twozeta(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn base_change_flag() {
    let out = twozeta(&["analyze", "--spec", "p=3; f=x^3+x", "--base-change", "2", "--format", "machine", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"class_number\": \"16\""));
    assert!(text.contains("\"field_order\": \"9\""));
}

#[test]
fn out_file_and_spec_file() {
    let spec = temp_file("p=5; f=x^3+x\n");
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("report.json");
    let out = twozeta(&[
        "analyze",
        "--spec-file",
        spec.path().to_str().unwrap(),
        "--format",
        "machine",
        "--no-timing",
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(dest).unwrap().contains("\"l_polynomial\""));
}

#[test]
fn euler_table_splits() {
    let table = temp_file("g=1; pic0=0\n0 0 -1\n0 1 1\n");
    let out = twozeta(&["analyze", "--measure-table", table.path().to_str().unwrap(), "--genus", "1", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("absolute factors: 2"), "{text}");
    assert!(text.contains("[pass] irreducibility.zero_mass_divisible"));
}

#[test]
fn exit_codes() {
    assert_eq!(twozeta(&["verify", "--spec", "p=3; f=x^3+x"]).status.code(), Some(0));
    assert_eq!(twozeta(&["verify", "--spec", "p=3; f=x^3"]).status.code(), Some(2));
    assert_eq!(twozeta(&["verify", "--spec", "p=4; f=x^3+x"]).status.code(), Some(2));
    assert_eq!(twozeta(&["verify", "--spec", "p=3; f=x^3+"]).status.code(), Some(2));
    assert_eq!(twozeta(&["verify", "--spec", "p=3; f=x^3+x", "--max-work", "2"]).status.code(), Some(3));
    let bad = temp_file("g=1; pic0=4\n0 0 3\n0 1 2\n");
    let out = twozeta(&["verify", "--measure-table", bad.path().to_str().unwrap(), "--genus", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row sum"));
    assert_eq!(twozeta(&["verify", "--measure-table", "/nonexistent/table", "--genus", "1"]).status.code(), Some(2));
}

#[test]
fn batch_runs() {
    let empty = temp_file("");
    let out = twozeta(&["batch", empty.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("total 0"));

    let mixed = temp_file("p=3; f=x^3+x\np=3; f=x^3+2*x\nnot a spec\np=3; f=x^3+2*x+1\n");
    let out = twozeta(&["batch", mixed.path().to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(text.contains("line 3: error not a spec"), "{text}");
    assert!(text.contains("total 4: 3 passed, 0 failed, 1 errors"), "{text}");
    let pos = |s: &str| text.find(s).unwrap();
    assert!(pos("line 1:") < pos("line 2:") && pos("line 2:") < pos("line 4:"));

    assert_eq!(twozeta(&["batch", "/nonexistent/list"]).status.code(), Some(2));
}
