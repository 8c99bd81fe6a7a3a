use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn maymust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maymust"))
        .args(args)
        .env_remove("MAYMUST_MAX_BRUTE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_example1_json() {
    let f = fixture("example1.mmaf");
    for engine in ["brute", "scc"] {
        let o = maymust(&["solve", "-i", path(&f), "-s", "exact", "--engine", engine]);
        assert_eq!(o.status.code(), Some(0));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["count"], 3);
        assert_eq!(v["engine"], engine);
        assert_eq!(v["labellings"][1]["a2"], "out");
    }
}

#[test]
fn solve_example2() {
    let f = fixture("example2.mmaf");
    let o = maymust(&["solve", "-i", path(&f), "-s", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 0);

    let o = maymust(&["solve", "-i", path(&f), "-s", "maxi-complete", "-o", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "maxi-complete (brute engine): 1 labelling(s)\n  [a1:undec]\n");
}

#[test]
fn solve_dot_output() {
    let f = fixture("example6.mmaf");
    let o = maymust(&["solve", "-i", path(&f), "-s", "exact", "-o", "dot"]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("digraph").count(), 1);
    assert!(dot.contains("fillcolor=green") && dot.contains("fillcolor=gray"));
    let o = maymust(&["solve", "-i", path(&f), "-s", "exact", "-o", "dot", "--all"]);
    assert_eq!(stdout(&o).matches("digraph").count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mmaf");
    std::fs::write(&bad, "arg a 2 1 0 0\n").unwrap();
    let o = maymust(&["solve", "-i", path(&bad), "-s", "exact"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "may-exceeds-must");

    let syntax = dir.path().join("syntax.mmaf");
    std::fs::write(&syntax, "arg a 0 0 1 1\nedge a a\n").unwrap();
    let o = maymust(&["solve", "-i", path(&syntax), "-s", "exact"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["line"], 2);

    let missing = dir.path().join("missing.mmaf");
    assert_eq!(maymust(&["solve", "-i", path(&missing), "-s", "exact"]).status.code(), Some(2));

    let none = dir.path().join("none.mmaf");
    std::fs::write(
        &none,
        "arg a2 0 0 2 2\narg a3 0 0 1 1\natt a2 a2\natt a3 a2\n",
    )
    .unwrap();
    let o = maymust(&["solve", "-i", path(&none), "-s", "maxi-complete"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "no-maximally-proper");
    // maxi-stable reports an empty set instead
    let o = maymust(&["solve", "-i", path(&none), "-s", "maxi-stable"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn gen_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.mmaf");
    let args = ["gen", "-n", "6", "-p", "0.3", "--tuples", "dung", "--seed", "42", "-o", path(&out)];
    assert_eq!(maymust(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.lines().filter(|l| l.starts_with("arg")).all(|l| l.ends_with("dung")));
    assert_eq!(maymust(&args).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);

    let o = maymust(&["solve", "-i", path(&out), "-s", "maxi-grounded", "--engine", "scc"]);
    assert_eq!(o.status.code(), Some(0));

    let o = maymust(&["gen", "-n", "3", "-p", "1.5", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_file_and_fuzz() {
    let o = maymust(&["check", "-i", path(&fixture("example1.mmaf"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass     engines.maxi"));

    let o = maymust(&["check", "-i", path(&fixture("example6.mmaf")), "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);

    let o = maymust(&["check", "--fuzz", "40", "--max-args", "5", "--seed", "3", "--tuples", "dung"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("40 instance(s)"));
}

#[test]
fn failing_fuzz_archives_reproducers() {
    // uniform seed 1 contains instances without a maximally proper labelling
    let dir = tempfile::tempdir().unwrap();
    let o = maymust(&[
        "check", "--fuzz", "500", "--max-args", "7", "--seed", "1", "--archive", path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert!(!files.is_empty());
    for f in files {
        let text = std::fs::read_to_string(f.unwrap().path()).unwrap();
        assert!(text.starts_with("# fails "));
    }
}

#[test]
fn brute_bound_from_environment() {
    let f = fixture("example1.mmaf");
    let o = Command::new(env!("CARGO_BIN_EXE_maymust"))
        .args(["solve", "-i", path(&f), "-s", "exact"])
        .env("MAYMUST_MAX_BRUTE", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_maymust"))
        .args(["solve", "-i", path(&f), "-s", "exact", "--engine", "scc"])
        .env("MAYMUST_MAX_BRUTE", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
