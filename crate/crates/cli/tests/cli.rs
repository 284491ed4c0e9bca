use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn mincode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mincode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn matrix(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_small_code() {
    let f = matrix("# [3,2] code\n101\n011\n");
    let o = mincode(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("M (systematic enumerator) = 3"));
    assert!(s.contains("M (formula) = 3"));
}

#[test]
fn analyze_duplicate_column() {
    let f = matrix("1011\n0110\n");
    let o = mincode(&["analyze", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["m_enumerated"], 3);
    assert_eq!(v["m_formula"], 3);
    let kinds: Vec<&str> = v["reduction"]["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"duplicate-column"));
}

#[test]
fn analyze_dependent_rows() {
    let f = matrix("110\n011\n101\n");
    let o = mincode(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rows dependent"));
}

#[test]
fn analyze_bad_character_reports_line() {
    let f = matrix("101\n0x1\n");
    let o = mincode(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn table_first_rows() {
    let o = mincode(&["table", "--nmax", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n\\k,1,2,3\n1,1,,\n2,1,2,\n3,1,3,3\n");
}

#[test]
fn table_marks_unavailable_cells() {
    let o = mincode(&["table", "--nmax", "8", "--tcap", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains('—'));
}

#[test]
fn maxmin_and_bounds() {
    let o = mincode(&["maxmin", "--n", "11", "--k", "9"]);
    assert!(stdout(&o).contains("= 63"));
    assert!(stdout(&o).contains("(0,3,3,3)"));
    let o = mincode(&["bounds", "--n", "10", "--k", "8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agrell_ub"]["exact"], "32");
    assert_eq!(v["matroid_ub"], 120);
}

#[test]
fn census_small() {
    let o = mincode(&["census", "--n", "7", "--k", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["max_m"], 7);
}

#[test]
fn conjecture_is_reproducible() {
    let args = ["conjecture", "t3", "--kmin", "41", "--kmax", "42", "--mode", "local", "--restarts", "4", "--seed", "7"];
    let a = mincode(&args);
    let b = mincode(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed 7"));
}

#[test]
fn conjecture_leading_t2() {
    let o = mincode(&["conjecture", "leading", "--t", "2", "--kmin", "2", "--kmax", "12", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("9,27,27,true")));
}

#[test]
fn usage_error_exit_code() {
    let o = mincode(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}
