//! End-to-end checks of the `smirnov` binary: exit codes, determinism and
//! report layout.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_smirnov"))
}

fn input(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("smirnov-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn every_verify_suite_passes() {
    for suite in smirnov::cli::verify::SUITES {
        let o = run(&["verify", "--suite", suite, "--seed", "3"]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains("result PASS"), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn schema_and_io_errors_have_distinct_exit_codes() {
    let bad = input("bad.json", r#"{"kind":"inner","zeros":[{"at":[0.5]}]}"#);
    let o = run(&["eval", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let outside = input("outside.json", r#"{"kind":"inner","zeros":[{"at":[1.5,0]}]}"#);
    assert_ne!(run(&["eval", "--input", outside.to_str().unwrap()]).status.code(), Some(0));

    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--input", "/nonexistent/descriptor.json"]).status.code(), Some(3));
}

#[test]
fn reports_are_deterministic_and_carry_the_seed() {
    let javad = input("javad.json", r#"{"kind":"named-example","name":"javad"}"#);
    let path = javad.to_str().unwrap();
    let a = run(&["factor", "--input", path, "--mode", "helson", "--seed", "9"]);
    let b = run(&["factor", "--input", path, "--mode", "helson", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);

    let o = run(&["eval", "--input", path, "--point", "0.5,0", "--point", "-0.2,0.3"]);
    let text = stdout(&o);
    assert!(text.starts_with("# smirnov "));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "x,y,re,im,flag");
    assert_eq!(rows.len(), 3);
    // 3iz/(2 - 2z²) at z = 1/2 is 1i.
    let f: Vec<&str> = rows[1].split(',').collect();
    assert!(f[2].parse::<f64>().unwrap().abs() < 1e-15);
    assert!((f[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn product_and_hp_reports() {
    let geo = input("geo.json", r#"{"family":"geometric-arcs","first":0.5,"ratio":0.5}"#);
    let o = run(&["product", "--input", geo.to_str().unwrap(), "--truncation", "32"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# verdict=converges"));

    let half = input("half.json", r#"{"kind":"named-example","name":"halfplane"}"#);
    let o = run(&["hp", "--input", half.to_str().unwrap(), "--exponents", "0.5,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let verdicts: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("p,"))
        .map(|l| l.split(',').nth(4).unwrap())
        .collect();
    assert_eq!(verdicts.len(), 10);
    assert!(verdicts[..5].iter().all(|&v| v == "bounded"));
    assert!(verdicts[5..].iter().all(|&v| v == "divergent"));
}
