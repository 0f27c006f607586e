use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gainflow"));
    c.env_remove("GAINFLOW_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CHAIN: &str = "v s\nv a\nv t\ne 1 s a 10 0 -5\ne 2 a t 10 0 3\nsource s\nsink t\n";

#[test]
fn threshold_of_the_chain() {
    let dir = TempDir::new().unwrap();
    let n = write(&dir, "n.txt", CHAIN);
    let o = run(&[
        "threshold",
        "--network",
        s(&n),
        "--source",
        "s",
        "--sink",
        "t",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "T=5"));
}

#[test]
fn unreachable_source_is_a_negative_verdict() {
    let dir = TempDir::new().unwrap();
    let n = write(&dir, "n.txt", "v s\nv t\nsource s\nsink t\n");
    let o = run(&["threshold", "--network", s(&n), "--source", "s"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("T=unreachable"));
}

#[test]
fn one_clause_reduction_is_equivalent() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "one.cnf", "p cnf3 3 1\n1 2 3 0\n");
    let o = run(&["verify", "reduction", "--kind", "sat", "--cnf", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["equivalent=true", "value=7", "target=7"] {
        assert!(out.lines().any(|l| l == line), "{line} missing from\n{out}");
    }
}

#[test]
fn positive_gain_cycle_exits_one() {
    let dir = TempDir::new().unwrap();
    let n = write(
        &dir,
        "cycle.txt",
        "v a\nv b\nv t\ne 1 a b 5 0 1\ne 2 b a 5 0 0\ne 3 b t 5 0 0\nsource a\nsink t\n",
    );
    let o = run(&["maxflow", "--network", s(&n)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("error=positive-gain-cycle"));
    let o = run(&["maxflow", "--network", s(&n), "--allow-cycles"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = TempDir::new().unwrap();
    let n = write(&dir, "bad.txt", "v a\ne 1 a b 1 0 0\n");
    let o = run(&["threshold", "--network", s(&n)]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("line=2") && out.contains("column=7"), "{out}");
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn budget_override_exits_three() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.cnf", "p cnf3 3 2\n1 2 3 0\n-1 2 -3 0\n");
    let o = bin()
        .args(["verify", "reduction", "--cnf", s(&f)])
        .env("GAINFLOW_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("error=budget"));
}

#[test]
fn maxflow_flow_file_validates() {
    let dir = TempDir::new().unwrap();
    let n = write(
        &dir,
        "n.txt",
        "v s\nv a\nv t\ne 1 s a 2 0 1\ne 2 a t 4 0 0\nsource s\nsink t\n",
    );
    let flow = dir.path().join("f.txt");
    let o = run(&["maxflow", "--network", s(&n), "--out", s(&flow)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value=3"));
    let o = run(&["verify", "flow", "--network", s(&n), "--flow", s(&flow)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("in_flow=3"));
    let bad = write(&dir, "bad.txt", "f 1 2\nf 2 1\n");
    let o = run(&["verify", "flow", "--network", s(&n), "--flow", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("conservation_violations.0.vertex=a"));
}

#[test]
fn json_carries_the_same_keys() {
    let dir = TempDir::new().unwrap();
    let n = write(&dir, "n.txt", CHAIN);
    let o = run(&["--json", "threshold", "--network", s(&n), "--source", "s"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["T"], "5");
    assert_eq!(v["sink"], "t");
}

#[test]
fn generated_grid_round_trips_through_the_pipeline() {
    let dir = TempDir::new().unwrap();
    let a = run(&[
        "gen",
        "paft-grid",
        "--width",
        "3",
        "--height",
        "3",
        "--seed",
        "7",
    ]);
    let b = run(&[
        "gen",
        "paft-grid",
        "--width",
        "3",
        "--height",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let p = write(&dir, "g.paft", &stdout(&a));
    let o = run(&["verify", "embedding", "--paft", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("planar=true"));
    let o = run(&["verify", "reduction", "--paft", s(&p)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let dot = run(&["export-dot", "--paft", s(&p), "--reduced"]);
    assert_eq!(dot.status.code(), Some(0));
    assert!(stdout(&dot).starts_with("digraph network {"));
    assert_eq!(
        dot.stdout,
        run(&["export-dot", "--paft", s(&p), "--reduced"]).stdout
    );
}

#[test]
fn reduce_sat_writes_a_parseable_network() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.cnf", "p cnf3 3 1\n1 2 3 0\n");
    let out = dir.path().join("n.txt");
    let o = run(&["reduce", "sat", "--cnf", s(&f), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("target=7"));
    let o = run(&["maxflow", "--network", s(&out)]);
    assert!(stdout(&o).contains("value=7"), "{}", stdout(&o));
}

#[test]
fn gadget_check_passes() {
    for b in ["3", "4", "10"] {
        let o = run(&["verify", "gadget", "--b", b]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("pass=true"));
    }
    assert_eq!(
        run(&["verify", "gadget", "--b", "5/2"]).status.code(),
        Some(2)
    );
}

#[test]
fn oracles_report_verdicts() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.cnf", "p cnf3 3 2\n1 2 3 0\n-1 2 -3 0\n");
    let o = run(&["oracle", "sat", "--cnf", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("assignment=1,-2,-3"));
    let f = write(&dir, "g.cnf", "p cnf3 3 2\n1 2 3 0\n1 2 -3 0\n");
    assert_eq!(
        run(&["oracle", "sat", "--cnf", s(&f)]).status.code(),
        Some(1)
    );
    let p = write(
        &dir,
        "p.paft",
        "v s\nv a\nv t\nue 1 s a\nue 2 a t\nforbid 1 2\ns s\nt t\n",
    );
    let o = run(&["oracle", "paft", "--paft", s(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict=no-valid-path"));
}
