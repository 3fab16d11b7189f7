use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn folmmp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_folmmp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const BLOWN_UP_PLANE: &str = "folmmp-surface v1
base P2
kf H
point p germ dx: 1, dy: 0
blowup p
";

#[test]
fn classify_cusp() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "cusp.germ", "dx: y, dy: x^2\n");
    let o = folmmp(&["classify-germ", &g]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "NotLogCanonical (nilpotent linear part)\n");
    let o = folmmp(&["classify-germ", &g, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"], "NotLogCanonical");
}

#[test]
fn eigenvalues_at_one_half() {
    let o = folmmp(&["eigenvalues", "--epsilon", "1/2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "p\tq\n1\t1\n2\t1\n");
}

#[test]
fn quotient_threshold_flags_b_equal_one() {
    let o = folmmp(&["quotient-threshold", "--m", "5"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("5\t1\t") && rows[0].ends_with("\t1/3\tyes"));
    assert!(rows[1..].iter().all(|r| r.ends_with("no")));
}

#[test]
fn resolve_writes_stable_dot() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "lc.germ", "dx: x, dy: 2*y\n");
    let a = d.path().join("a.dot");
    let b = d.path().join("b.dot");
    let o = folmmp(&["resolve", &g, "--dot", a.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    folmmp(&["resolve", &g, "--dot", b.to_str().unwrap()]);
    let dot = std::fs::read_to_string(&a).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot, std::fs::read_to_string(&b).unwrap());
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 3, "{table}");
    assert!(table.lines().nth(2).unwrap().contains("\t1\t-1\t2\t"), "{table}");
}

#[test]
fn adjoint_check_verdicts() {
    let d = TempDir::new().unwrap();
    let cusp = file(&d, "cusp.germ", "dx: y, dy: x^2\n");
    let o = folmmp(&["adjoint-check", &cusp, "--epsilon", "1/10", "--delta", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("Refuted"));
    let saddle = file(&d, "saddle.germ", "dx: x, dy: -y\n");
    let o = folmmp(&["adjoint-check", &saddle, "--epsilon", "1/10", "--delta", "1"]);
    assert!(stdout(&o).starts_with("Certified"));
}

#[test]
fn config_supplies_epsilon_and_flags_win() {
    let d = TempDir::new().unwrap();
    let saddle = file(&d, "lc.germ", "dx: x, dy: 2*y\n");
    let cfg = file(&d, "c.toml", "epsilon = \"1/2\"\ndelta = \"1\"\n");
    let o = folmmp(&["--config", &cfg, "adjoint-check", &saddle]);
    assert!(stdout(&o).starts_with("Certified"), "{}", stderr(&o));
    let o = folmmp(&["--config", &cfg, "adjoint-check", &saddle, "--epsilon", "1/10"]);
    assert!(stdout(&o).starts_with("Refuted"), "{}", stderr(&o));
}

#[test]
fn mmp_run_writes_log_and_surface() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "s.surf", BLOWN_UP_PLANE);
    let log = d.path().join("run.jsonl");
    let out = d.path().join("final.surf");
    let o = folmmp(&[
        "mmp",
        "run",
        &s,
        "--epsilon",
        "1/10",
        "--log",
        log.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("degree -11/10 -> 0"));
    assert!(stdout(&o).contains("outcome\tNefModel"));
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["format"], "folmmp-mmp-log");
    assert_eq!(lines[0]["version"], 1);
    assert_eq!(lines[1]["degree_before"], "-11/10");
    assert_eq!(lines[2]["outcome"], "NefModel");
    let emitted = std::fs::read_to_string(&out).unwrap();
    assert!(emitted.contains("contract E1"));
    let again = folmmp(&["mmp", "run", out.to_str().unwrap(), "--epsilon", "1/10"]);
    assert!(again.status.success(), "{}", stderr(&again));
    assert!(stdout(&again).contains("outcome\tNefModel"));
}

#[test]
fn canonical_model_reports_positivity() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "s.surf", BLOWN_UP_PLANE);
    let o = folmmp(&["canonical-model", &s, "--epsilon", "1/10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("adjoint class positive on catalogue\tyes"));
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "s.surf", BLOWN_UP_PLANE);
    let o = folmmp(&["mmp", "run", &s, "--epsilon", "1/5"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = file(&d, "bad.surf", "folmmp-surface v1\nbase P3\n");
    let o = folmmp(&["mmp", "run", &bad, "--epsilon", "1/10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let v2 = file(&d, "v2.surf", "folmmp-surface v2\nbase P2\n");
    assert_eq!(
        folmmp(&["mmp", "run", &v2, "--epsilon", "1/10"]).status.code(),
        Some(1)
    );

    // adjoint-negative line of square 1 on F_1 without a fibration or rank one
    let incomplete = file(
        &d,
        "inc.surf",
        "folmmp-surface v1\nbase F1\nkf -C0 - 2F\ncurve G C0 + F non-invariant\n",
    );
    let o = folmmp(&["mmp", "run", &incomplete, "--epsilon", "1/10"]);
    assert_eq!(o.status.code(), Some(3), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn bounds_subcommands() {
    let o = folmmp(&[
        "bounds",
        "degree",
        "--g",
        "2",
        "--m",
        "3",
        "--tau",
        "1/10",
        "--leaf-degree",
        "5",
        "--adjoint-square",
        "1",
    ]);
    let out = stdout(&o);
    assert!(out.contains("m0\t6\n"));
    assert!(out.contains("h0_lower(m)\t10\n"));
    let o = folmmp(&["bounds", "aut", "--vol-up", "10", "--vol-down", "2"]);
    assert_eq!(stdout(&o), "#G <= 5\tvol_down = 2\n");

    let d = TempDir::new().unwrap();
    let cfg = file(
        &d,
        "c.toml",
        "[[constants]]\nname = \"v\"\nepsilon = \"1/10\"\nvalue = \"1/4\"\nprovenance = \"test fixture\"\n",
    );
    let o = folmmp(&[
        "--config",
        &cfg,
        "bounds",
        "aut",
        "--vol-up",
        "3",
        "--epsilon",
        "1/10",
    ]);
    assert!(stdout(&o).starts_with("#G <= 12\t"), "{}", stderr(&o));
}

#[test]
fn outputs_are_deterministic() {
    let d = TempDir::new().unwrap();
    let s = file(&d, "s.surf", BLOWN_UP_PLANE);
    let a = folmmp(&["mmp", "run", &s, "--epsilon", "1/10", "--json"]);
    let b = folmmp(&["mmp", "run", &s, "--epsilon", "1/10", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(Path::new(&s).exists());
}
