use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn sdcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdcode"))
        .args(args)
        .output()
        .expect("run sdcode")
}

fn sdcode_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sdcode"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn sdcode");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn construct_thm6() {
    let out = sdcode(&["construct", "--family", "thm6", "--q", "37", "--n", "12", "--mds"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["report"]["n"], 26);
    assert_eq!(v["report"]["k"], 13);
    assert_eq!(v["report"]["self_dual"], true);
    assert_eq!(v["report"]["promised"]["d_bound"], 14);
}

#[test]
fn construct_multicoset_by_plan_json() {
    let plan = r#"{"family":"multicoset","q":81,"r":1,"t":2}"#;
    let out = sdcode(&["construct", "--plan", plan, "--distance", "none"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(
        (v["report"]["n"].as_u64(), v["report"]["k"].as_u64()),
        (Some(24), Some(12))
    );
}

#[test]
fn inadmissible_exit_code() {
    let out = sdcode(&["construct", "--family", "thm6", "--q", "11", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_exit_code() {
    assert_eq!(sdcode(&["bogus"]).status.code(), Some(64));
    assert_eq!(sdcode(&["construct", "--q", "notanumber"]).status.code(), Some(64));
}

#[test]
fn verify_small_self_dual_code() {
    let out = sdcode_stdin(
        &["verify", "-", "--q", "5", "--self-dual", "--distance", "--mds"],
        "1 2\n",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["distance"]["d_low"], 2);
    assert_eq!(v["distance"]["exact"], true);
    assert_eq!(v["mds"]["mds"], true);
}

#[test]
fn verify_reports_non_self_dual() {
    // (1,1)·(1,1) = 2 over GF(5)
    let out = sdcode_stdin(&["verify", "-", "--q", "5", "--self-dual"], "1 1\n");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["self_dual"], false);
}

#[test]
fn construct_then_verify_round_trip() {
    let dir = std::env::temp_dir().join(format!("sdcode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("code.json");
    let path = path.to_str().unwrap();
    let out = sdcode(&[
        "construct",
        "--plan",
        r#"{"family":"char2","q":16,"curve":"elliptic2","n":8}"#,
        "--distance",
        "none",
        "--out",
        path,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = sdcode(&["verify", path, "--self-dual", "--distance=bz"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["distance"]["d_low"], 8);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reproduce_one_entry() {
    let out = sdcode(&["reproduce", "ex-elliptic-16-18"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
    assert_eq!(sdcode(&["reproduce", "no-such-entry"]).status.code(), Some(64));
}

#[test]
fn grid_table_cells() {
    let out = sdcode(&[
        "table", "--which", "mds-grid", "--q-list", "19,37,81", "--n-list", "2,24,26", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let cell = |n: &str, col: usize| -> String {
        let row = text.lines().find(|l| l.split(',').next() == Some(n)).unwrap();
        row.split(',').nth(col).unwrap().to_string()
    };
    assert_eq!(cell("2", 1), "-");
    assert_eq!(cell("26", 1), "");
    assert_eq!(cell("26", 2), "*");
    assert_eq!(cell("24", 3), "*");
}

#[test]
fn hermitian_points() {
    let out = sdcode(&["points", "--curve", "hermitian", "--q0", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.ends_with(": 1 )")).count(), 27);
    assert!(text.contains("( 1 : 0 : 0 )"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("27 affine points, genus 3"));
}

#[test]
fn alpha_identity() {
    let out = sdcode(&["alpha", "--q", "81", "--r", "1", "--mode", "plus"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pairs"], v["identity_holds"]);
    assert_eq!(v["exponent_t"], 5);
}
