use std::path::Path;
use std::process::{Command, Output};

fn inforeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inforeg")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&inforeg(&[])), 1);
    assert_eq!(code(&inforeg(&["frobnicate"])), 1);
    assert_eq!(code(&inforeg(&["fit", "--data", "x.csv", "--out", "m.json", "--reg", "ridge"])), 1);
    assert_eq!(code(&inforeg(&["fit", "--data", "/nonexistent.csv", "--out", "/tmp/m.json"])), 1);
    assert_eq!(code(&inforeg(&["--help"])), 0);
}

#[test]
fn gen_fit_predict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    let test = dir.path().join("test.csv");
    let model = dir.path().join("model.json");
    let preds = dir.path().join("preds.csv");
    let o = inforeg(&["gen", "--seed", "4", "--out", p(&data), "--test-out", p(&test)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for reg in ["none", "l2", "info-emp", "info-kernel"] {
        let mut args = vec!["fit", "--data", p(&data), "--reg", reg, "--lambda", "1", "--out", p(&model)];
        if reg == "info-kernel" {
            args.extend(["--tau", "0.25"]);
        }
        let o = inforeg(&args);
        assert_eq!(code(&o), 0, "{reg}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = inforeg(&["predict", "--model", p(&model), "--data", p(&test), "--out", p(&preds)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = std::fs::read_to_string(&preds).unwrap().lines().count();
    assert_eq!(rows, 1 + 2000);
    // A kernel fit needs tau.
    let o = inforeg(&["fit", "--data", p(&data), "--reg", "info-kernel", "--lambda", "1", "--out", p(&model)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn solve1d_writes_curve_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let anchors = dir.path().join("anchors.csv");
    std::fs::write(&anchors, "x,y\n0,1\n1,-1\n").unwrap();
    let curve = dir.path().join("curve.csv");
    let o = inforeg(&[
        "solve1d",
        "--density",
        r#"{"kind":"uniform","lo":0,"hi":1}"#,
        "--data",
        p(&anchors),
        "--lambda",
        "1",
        "--grid",
        "11",
        "--out",
        p(&curve),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(summary["objective"].is_number());
    assert_eq!(std::fs::read_to_string(&curve).unwrap().lines().count(), 12);
}

#[test]
fn theory_commands() {
    let uniform = r#"{"kind":"uniform","lo":0,"hi":1}"#;
    let o = inforeg(&["theory", "bound", "--density", uniform, "--epsilon", "0.1", "--delta", "0.1", "--gamma", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["bound"].as_u64().unwrap() >= 99_070);

    // ε⁻⁴ overflows: a numerical failure, not a usage error.
    let o = inforeg(&["theory", "bound", "--density", uniform, "--epsilon", "1e-90", "--delta", "0.1", "--gamma", "1"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    let o = inforeg(&["theory", "bound", "--density", uniform, "--epsilon", "2", "--delta", "0.1", "--gamma", "1"]);
    assert_eq!(code(&o), 1);

    let o = inforeg(&["theory", "check-lemma3", "--trials", "5"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let o = inforeg(&["theory", "check-isotropy", "--trials", "5", "--dim", "4"]);
    assert_eq!(code(&o), 0);
    let o = inforeg(&["theory", "profile", "--density", r#"{"kind":"gaussian","mean":0,"variance":1}"#]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn experiment_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = inforeg(&["experiment", "--trials", "2", "--restarts", "1", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("report.json").exists());
    let csv = std::fs::read_to_string(out.join("errors.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
}
