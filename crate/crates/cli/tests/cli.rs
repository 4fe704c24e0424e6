use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn borelreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_borelreg"))
        .args(args)
        .output()
        .expect("run borelreg")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn reg_auto_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.txt", "ring 2\nx1^2\nx1*x2\n");
    let out = borelreg(&["reg", "--method", "auto", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("reg = 2"));
    let v = json(&borelreg(&[
        "--json",
        "reg",
        "--confirm",
        f.to_str().unwrap(),
    ]));
    assert_eq!(v["value"], 2);
    assert_eq!(v["method"], "chain");
    assert_eq!(v["bound"], 3);
    assert_eq!(v["agreement"]["truncation"], 2);
    assert_eq!(v["agreement"]["oracle"], 2);
    assert_eq!(v["coefficients"], "QQ");
}

#[test]
fn is_borel_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "ring 2\nx2^2\n");
    let out = borelreg(&["is-borel", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("j=2"));
    let v = json(&borelreg(&["is-borel", "--json", bad.to_str().unwrap()]));
    assert_eq!(v["borel_type"], false);
    assert_eq!(v["saturation"]["witness"]["j"], 2);
    let good = write(dir.path(), "good.txt", "ring 2\nx1^2\nx1*x2\n");
    assert_eq!(
        borelreg(&["is-borel", good.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn truncation_method_needs_borel_type() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "ring 2\nx2^2\n");
    let out = borelreg(&["reg", "--method", "truncation", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("j=2"));
    let v = json(&borelreg(&[
        "--json",
        "reg",
        "--method",
        "oracle",
        bad.to_str().unwrap(),
    ]));
    assert_eq!(v["value"], 2);
}

#[test]
fn truncate_prints_degree_four_generators() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.txt", "ring 2\nx1^2\nx2^3\n");
    let out = borelreg(&["truncate", "4", f.to_str().unwrap()]);
    assert_eq!(
        stdout(&out),
        "ring 2\nx1^4\nx1^3*x2\nx1^2*x2^2\nx1*x2^3\nx2^4\n"
    );
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.txt", "ring 2\nx1\nx5\n");
    let out = borelreg(&["info", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":3:1: unknown variable"));
    assert_eq!(
        borelreg(&["info", "/nonexistent/file"]).status.code(),
        Some(2)
    );
    assert_eq!(
        borelreg(&["reg", "--method", "bogus", f.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn chain_ass_betti_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.txt", "ring 3\nx1^2\nx1*x2\nx1*x3\n");
    let chain = json(&borelreg(&["--json", "chain", f.to_str().unwrap()]));
    assert_eq!(chain["borel_type"], true);
    assert_eq!(chain["regularity"], 2);
    let ass = json(&borelreg(&["--json", "ass", f.to_str().unwrap()]));
    assert_eq!(ass["totally_ordered"], true);
    let betti = json(&borelreg(&["--json", "betti", f.to_str().unwrap()]));
    assert_eq!(betti["regularity"], 2);
    assert_eq!(betti["coefficients"], "QQ");
}

#[test]
fn sum_bound_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "ring 2\nx1^2\n");
    let b = write(dir.path(), "b.txt", "ring 2\nx1*x2\n");
    let out = borelreg(&["sum", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(stdout(&out), "ring 2\nx1^2\nx1*x2\n");
    let c = write(dir.path(), "c.txt", "ring 2\nx1\nx2^3\n");
    let v = json(&borelreg(&[
        "--json",
        "sum",
        "--bound",
        a.to_str().unwrap(),
        c.to_str().unwrap(),
    ]));
    assert_eq!(v["holds"], true);
    assert_eq!(v["report"]["max_part_regularity"], 3);
    // (x1*x2) is not of Borel type, so the bound check refuses it
    let out = borelreg(&["sum", "--bound", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen",
        "--kind",
        "borel_type_filtered",
        "--seed",
        "9",
        "--count",
        "5",
    ];
    let a = stdout(&borelreg(&args));
    assert_eq!(a, stdout(&borelreg(&args)));
    let out = dir.path().join("out");
    borelreg(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    for k in 0..5 {
        let f = out.join(format!("instance-{k}.txt"));
        assert_eq!(
            borelreg(&["is-borel", f.to_str().unwrap()]).status.code(),
            Some(0)
        );
    }
}

#[test]
fn verify_subset_and_replay() {
    let out = borelreg(&[
        "verify",
        "--property",
        "stable-above-reg",
        "--kind",
        "artinian",
        "--count",
        "30",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let a = stdout(&borelreg(&[
        "--json",
        "verify",
        "--property",
        "extension-invariance",
        "--count",
        "20",
    ]));
    let b = stdout(&borelreg(&[
        "--json",
        "verify",
        "--property",
        "extension-invariance",
        "--count",
        "20",
    ]));
    assert_eq!(a, b);

    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "instance-0.txt", "ring 2\nx1^2\nx1*x2\n");
    let out = borelreg(&[
        "verify",
        "--property",
        "triple-agreement",
        "--replay",
        f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pass"));
    let bad = borelreg(&["verify", "--property", "nope", "--count", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}
