use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use valuniform::cli::ReportFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_valuniform"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../examples_problems").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_path(cmd: &str, path: &Path, extra: &[&str]) -> Output {
    bin().arg(cmd).arg(path).args(extra).output().unwrap()
}

fn report(out: &Output) -> ReportFile {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn passing_problems_exit_zero() {
    for (cmd, file) in [
        ("check", "sqrt2.json"),
        ("monomialize", "sqrt2.json"),
        ("transform", "weights23.json"),
        ("monomialize", "weights23.json"),
        ("ascend", "artin_schreier.json"),
    ] {
        let out = run_path(cmd, &example(file), &[]);
        assert_eq!(out.status.code(), Some(0), "{cmd} {file}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert!(r.verdict.ok);
        assert_eq!(r.command, cmd);
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, "{ not json").unwrap();
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"field":0,"bogus":1}"#).unwrap();
    let unknown_var = dir.path().join("unknown_var.json");
    let text = std::fs::read_to_string(example("sqrt2.json")).unwrap();
    std::fs::write(&unknown_var, text.replace("x1 + x2", "x1 + zz")).unwrap();

    for path in [&malformed, &unknown, &unknown_var, &dir.path().join("missing.json")] {
        let out = run_path("check", path, &[]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("valuniform:"));
        assert!(out.stdout.is_empty());
    }
    // transform without a base ring
    let out = run_path("transform", &example("sqrt2.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    // ascend without an etale presentation
    let out = run_path("ascend", &example("sqrt2.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn iteration_cap_failure_exits_one() {
    let out = bin()
        .env("VALUNIFORM_ITER_CAP", "0")
        .arg("transform")
        .arg(example("weights23.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!(!r.verdict.ok);
    assert!(r.error.unwrap().starts_with("IterationCapExceeded"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("report.json");
    let out = run_path("monomialize", &example("mt2_shape.json"), &["--out", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&dest).unwrap();
    let r: ReportFile = serde_json::from_slice(&written).unwrap();
    assert!(r.verdict.ok);
    assert!(r.chart.is_some());
}

#[test]
fn output_is_deterministic() {
    for fmt in ["json", "text"] {
        let a = run_path("ascend", &example("sqrt2_etale.json"), &["--format", fmt]);
        let b = run_path("ascend", &example("sqrt2_etale.json"), &["--format", fmt]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn text_format_shows_the_verdict() {
    let out = run_path("monomialize", &example("sqrt2.json"), &["--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: PASS"));
    assert!(text.contains("regular parameters: xp1, xp2"));
}

#[test]
fn verify_accepts_reports_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let out = run_path("transform", &example("weights23.json"), &["--out", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run_path("verify", &good, &[]).status.code(), Some(0));

    // claim a different exponent in the first certificate
    let mut r: ReportFile = serde_json::from_slice(&std::fs::read(&good).unwrap()).unwrap();
    r.transforms.as_mut().unwrap().certificates[0].exps[0] += 1;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_vec_pretty(&r).unwrap()).unwrap();
    let out = run_path("verify", &bad, &["--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"), "{text}");

    // a tampered chart unit
    let chart_report = dir.path().join("chart.json");
    run_path("monomialize", &example("sqrt2.json"), &["--out", chart_report.to_str().unwrap()]);
    let mut r: ReportFile = serde_json::from_slice(&std::fs::read(&chart_report).unwrap()).unwrap();
    r.chart.as_mut().unwrap().factorizations[0].unit = "xp2 + 2".into();
    std::fs::write(&chart_report, serde_json::to_vec(&r).unwrap()).unwrap();
    assert_eq!(run_path("verify", &chart_report, &[]).status.code(), Some(1));
}
