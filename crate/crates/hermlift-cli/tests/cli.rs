use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hermlift::elliptic::bundled_cm_form;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hermlift"));
    c.env_remove("HERMLIFT_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A synthetic D = 23, k = 8 form and its lift table.
fn lifted(dir: &TempDir, chi: &str) -> (PathBuf, PathBuf) {
    let f = path(dir, "f.txt");
    let t = path(dir, "f.tab");
    assert!(run(&["synth", "--seed", "3", "--p-max", "1500", "-o", s(&f)]).status.success());
    let o = run(&["lift", s(&f), "--chi", chi, "--bound-det", "600", "--bound-diag", "8", "-o", s(&t)]);
    assert!(o.status.success(), "{}", stderr(&o));
    (f, t)
}

#[test]
fn classgroup_reports() {
    let o = run(&["classgroup", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("D=7 h=1\n"));
    let o = run(&["classgroup", "23"]);
    let text = stdout(&o);
    assert!(text.starts_with("D=23 h=3\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("form ")).count(), 3);
    let o = run(&["classgroup", "4"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).starts_with("error[field]"));
}

#[test]
fn lift_check_hecke_pipeline() {
    let dir = TempDir::new().unwrap();
    let (_, t) = lifted(&dir, "1");
    assert!(run(&["check-maass", s(&t)]).status.success());
    for op in ["T0@5", "T@5", "T1@2", "T2@3"] {
        let h = path(&dir, &format!("{op}.tab"));
        let o = run(&["hecke", s(&t), op, "-o", s(&h)]);
        assert!(o.status.success(), "{op}: {}", stderr(&o));
        assert!(!stderr(&o).contains("identically zero"), "{op}");
        let c = run(&["check-maass", s(&h)]);
        assert!(c.status.success(), "{op}: {}", stdout(&c));
        let d = run(&["descend", s(&h)]);
        assert!(d.status.success(), "{op}: {}", stderr(&d));
    }
}

#[test]
fn tampered_table_fails_check() {
    let dir = TempDir::new().unwrap();
    let (_, t) = lifted(&dir, "0");
    let text = std::fs::read_to_string(&t).unwrap();
    // Change the value at one point with content 2.
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let i = lines.iter().position(|l| l.starts_with("2 2 0 0 ")).expect("point (2, 2, 0) present");
    lines[i] = "2 2 0 0 1 0 / 1".to_string();
    let bad = path(&dir, "bad.tab");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = run(&["check-maass", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not-maass witness"));
}

#[test]
fn cm_input_lifts_to_zero_with_warning() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "cm.txt");
    std::fs::write(&f, bundled_cm_form().to_text()).unwrap();
    let t = path(&dir, "cm.tab");
    let o = run(&["lift", s(&f), "--bound-det", "40", "-o", s(&t)]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("self-conjugate input"));
    let text = std::fs::read_to_string(&t).unwrap();
    let data = text.split("data\n").nth(1).unwrap();
    assert!(data.lines().all(|l| l.ends_with(" 0 / 1")));
}

#[test]
fn bad_input_leaves_no_output() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "bad.txt");
    std::fs::write(&f, "field 23\nweight seven\n").unwrap();
    let t = path(&dir, "out.tab");
    let o = run(&["lift", s(&f), "-o", s(&t)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!t.exists());
    let o = run(&["check-maass", s(&path(&dir, "missing.tab"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn euler_product_ok() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "cm.txt");
    std::fs::write(&f, bundled_cm_form().to_text()).unwrap();
    let o = run(&["euler", s(&f), "--primes", "2,3,5,7,11", "--verify-factorization"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let checks: Vec<&str> = text.lines().filter(|l| l.contains(" product ")).collect();
    assert_eq!(checks.len(), 6);
    assert!(checks.iter().all(|l| l.ends_with("OK")));
    assert!(stderr(&o).contains("ramified prime 7"));
}

#[test]
fn congruence_between_perturbed_forms() {
    let dir = TempDir::new().unwrap();
    let (f, t) = lifted(&dir, "0");
    let g = path(&dir, "g.txt");
    let gt = path(&dir, "g.tab");
    assert!(run(&["synth", "--like", s(&f), "--modulus", "289", "--seed", "9", "-o", s(&g)]).status.success());
    assert!(run(&["lift", s(&g), "--bound-det", "600", "--bound-diag", "8", "-o", s(&gt)]).status.success());
    let o = run(&["congruence", s(&f), s(&g), "--ell", "17", "--min-depth", "2"]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).starts_with("lower-bound ledger at"));
    let o = run(&["congruence", s(&t), s(&gt), "--ell", "17", "--min-depth", "2", "--json"]);
    assert!(o.status.success(), "{}", stdout(&o));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["record"].is_string());
    }
    let o = run(&["congruence", s(&t), s(&gt), "--ell", "17", "--min-depth", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outputs_are_byte_stable() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let (_, ta) = lifted(&a, "2");
    let (_, tb) = lifted(&b, "2");
    assert_eq!(std::fs::read(&ta).unwrap(), std::fs::read(&tb).unwrap());
    let da = run(&["descend", s(&ta), "--json"]);
    let db = run(&["descend", s(&tb), "--json"]);
    assert_eq!(da.stdout, db.stdout);
}

#[test]
fn config_file_supplies_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = path(&dir, "c.toml");
    std::fs::write(&cfg, "seed = 42\n").unwrap();
    let a = path(&dir, "a.txt");
    let b = path(&dir, "b.txt");
    let o = bin().env("HERMLIFT_CONFIG", &cfg).args(["synth", "-o", s(&a)]).output().unwrap();
    assert!(o.status.success());
    assert!(run(&["synth", "--seed", "42", "-o", s(&b)]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::write(&cfg, "seed = -1\n").unwrap();
    let o = bin().env("HERMLIFT_CONFIG", &cfg).args(["synth", "-o", s(&a)]).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}
