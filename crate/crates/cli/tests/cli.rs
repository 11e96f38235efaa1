use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use gldpc::ensemble::TannerGraph;

fn gldpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gldpc"))
        .args(args)
        .output()
        .expect("run gldpc")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gldpc-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn condition_violation_exits_3() {
    let out = gldpc(&["bounds", "--c", "9", "--code", "hamming:m=7", "--c1", "9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(gldpc(&["bounds", "--c", "4", "--code", "rs:d=30"]).status.code(), Some(2));
    let out = gldpc(&["simulate", "--code", "rs:d=30,k=24,q=31", "--c", "4", "--c1", "2", "--N", "300"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn finite_length_blocklength_rounding() {
    let base = ["finite-length", "--c", "4", "--code", "rs:d=30,k=24,q=31", "--c1", "3", "--i-max", "6"];
    let out = gldpc(&[&base[..], &["--N", "301"]].concat());
    assert_eq!(out.status.code(), Some(2));
    let out = gldpc(&[&base[..], &["--N", "301", "--round-n"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# gldpc-csv v1 finite-length"));
    assert!(text.contains("N=300"));
    assert!(text.lines().any(|l| l == "i,pe_i,cumulative"));
    // Rows stop once the cumulative bound reaches one.
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert!(!rows.is_empty() && rows.len() <= 6);
    assert!(rows[0].starts_with("1,"));
}

#[test]
fn finite_length_zero_horizon_has_no_rows() {
    let out = gldpc(&[
        "finite-length", "--c", "4", "--code", "rs:d=30,k=24,q=31", "--c1", "3", "--N", "300",
        "--i-max", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>(), ["i,pe_i,cumulative"]);
}

#[test]
fn simulation_output_is_reproducible() {
    let args = [
        "simulate", "--code", "rs:d=30,k=24,q=31", "--c", "4", "--c1", "3", "--N", "300",
        "--trials", "8", "--weight", "6", "--seed", "11",
    ];
    let a = gldpc(&args);
    let b = gldpc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# gldpc-csv v1 "));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 9);

    let json = gldpc(&[&args[..], &["--format", "json"]].concat());
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(value["records"].as_array().unwrap().len(), 8);
}

#[test]
fn graph_files() {
    let path = scratch("g.txt");
    let p = path.to_str().unwrap();
    let out = gldpc(&["graph", "gen", "--c", "3", "--d", "9", "--N", "60", "--seed", "2", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let out = gldpc(&["graph", "check", p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("ok N=60 c=3 d=9 checks=20"));

    let text = fs::read_to_string(&path).unwrap();
    let tampered = scratch("tampered.txt");
    fs::write(&tampered, text.replacen(" 1 ", " 2 ", 1)).unwrap();
    assert_eq!(gldpc(&["graph", "check", tampered.to_str().unwrap()]).status.code(), Some(2));
    let cut = scratch("cut.txt");
    fs::write(&cut, &text[..text.len() / 2]).unwrap();
    assert_eq!(gldpc(&["graph", "check", cut.to_str().unwrap()]).status.code(), Some(2));
    let missing = scratch("missing.txt");
    assert_eq!(gldpc(&["graph", "check", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn expurgation_finds_the_double_edge() {
    // Variable 0 sends both edges into check 0; the rest is simple.
    let perm = vec![0, 1, 2, 4, 3, 8, 5, 9, 6, 10, 7, 11];
    let g = TannerGraph::from_permutation(6, 2, 4, perm).unwrap();
    let path = scratch("gadget.txt");
    fs::write(&path, g.to_text()).unwrap();
    let out = gldpc(&[
        "expurgate", "--code", "rs:d=4,k=2,q=5", "--c", "2", "--c1", "2", "--N", "6", "--b-max",
        "1", "--graph", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<String> = stdout(&out)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    assert_eq!(rows, ["size,set", "1,0"]);
}

#[test]
fn expurgation_budget_exits_4() {
    let out = gldpc(&[
        "expurgate", "--code", "rs:d=30,k=24,q=31", "--c", "4", "--c1", "3", "--N", "3000",
        "--b-max", "3", "--budget", "1000",
    ]);
    assert_eq!(out.status.code(), Some(4));
}
