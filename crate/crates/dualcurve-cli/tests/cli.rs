//! End-to-end tests of the binary: the documented examples, exit-code
//! contract, report determinism and the CSV sweeps.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dualcurve"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn result_field(report: &serde_json::Value, field: &str) -> f64 {
    report["results"][0][field].as_f64().unwrap()
}

#[test]
fn measure_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(
        dir.path(),
        "cube.json",
        r#"{"type":"box","halfwidths":[1,1,1]}"#,
    );
    let out = bin()
        .args(["measure", "--body", &cube, "--q", "3", "--eta", "all"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert!((result_field(&report, "value") - 8.0).abs() < 1e-9);

    // Ball n=3, r=2, q=5 → ω₃·2⁵ ≈ 134.0413.
    let ball = write(dir.path(), "ball.json", r#"{"type":"ball","n":3,"r":2.0}"#);
    let out = bin()
        .args(["measure", "--body", &ball, "--q", "5", "--eta", "all"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    let expect = 4.0 * std::f64::consts::PI / 3.0 * 32.0;
    assert!((result_field(&report, "value") - expect).abs() < 1e-9 * expect);
    assert!((result_field(&report, "value") - 134.0413).abs() < 1e-3);

    // Cylinder subspace cap matches the closed-form engine directly.
    let cyl = write(
        dir.path(),
        "cyl.json",
        r#"{"type":"cylinder","n":3,"k":1,"l":10.0}"#,
    );
    let sub = write(dir.path(), "sub.json", r#"{"basis":[[1.0,0.0,0.0]]}"#);
    let out = bin()
        .args([
            "measure",
            "--body",
            &cyl,
            "--q",
            "4",
            "--eta",
            &format!("subspace:{sub}"),
        ])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    let cfg = dualcurve::measures::MeasureConfig::default();
    let oracle = dualcurve::measures::cylinder_dcm_subspace(4.0, 3, 1, 10.0, &cfg).unwrap();
    let got = result_field(&report, "value");
    assert!(
        (got - oracle.value).abs() <= 1e-12 * oracle.value,
        "{got} vs {}",
        oracle.value
    );
}

#[test]
fn measure_facet_subset() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(
        dir.path(),
        "cube.json",
        r#"{"type":"box","halfwidths":[1,1,1]}"#,
    );
    let out = bin()
        .args(["measure", "--body", &cube, "--q", "3", "--eta", "facets:0"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert!((result_field(&report, "value") - 8.0 / 6.0).abs() < 1e-10);
}

#[test]
fn ratio_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(
        dir.path(),
        "cube.json",
        r#"{"type":"box","halfwidths":[1,1,1]}"#,
    );

    // q = n equality case: ratio 1/3, bound 1/3.
    let out = bin()
        .args(["ratio", "--body", &cube, "--axes", "1", "--q", "3"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert!((result_field(&report, "ratio") - 1.0 / 3.0).abs() < 1e-10);
    assert!((result_field(&report, "bound") - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(report["results"][0]["satisfied"], serde_json::json!(true));

    // q = 4, L = span(e₁,e₂): ratio 2/3 < 3/4.
    let out = bin()
        .args(["ratio", "--body", &cube, "--axes", "1,2", "--q", "4"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert!((result_field(&report, "ratio") - 2.0 / 3.0).abs() < 1e-10);
    assert!((result_field(&report, "bound") - 0.75).abs() < 1e-12);

    // Long cylinder: ratio below but near 1/2.
    let cyl = write(
        dir.path(),
        "cyl.json",
        r#"{"type":"cylinder","n":3,"k":1,"l":100.0}"#,
    );
    let out = bin()
        .args(["ratio", "--body", &cyl, "--axes", "1", "--q", "4"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    let ratio = result_field(&report, "ratio");
    assert!(ratio < 0.5 && ratio > 0.45, "ratio {ratio}");
}

#[test]
fn verify_exit_codes() {
    let ok = bin()
        .args([
            "verify",
            "--suite",
            "scalar-lemma",
            "--trials",
            "5000",
            "--seed",
            "7",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    let bad = bin()
        .args(["verify", "--suite", "not-a-suite"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_report_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let out = bin()
        .args([
            "verify",
            "--suite",
            "small-p",
            "--report",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let line: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(line["suite"], "small-p");
    assert_eq!(line["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"type":"box","halfwidths":[1,-1]}"#,
    );
    let out = bin()
        .args(["measure", "--body", &bad, "--q", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("halfwidths"), "{msg}");
}

#[test]
fn engine_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let ball = write(dir.path(), "ball.json", r#"{"type":"ball","n":3,"r":1.0}"#);
    // A ball has no facet representation.
    let out = bin()
        .args(["measure", "--body", &ball, "--q", "3", "--engine", "facet"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // q = 0 needs the sphere engine.
    let cube = write(
        dir.path(),
        "cube.json",
        r#"{"type":"box","halfwidths":[1,1]}"#,
    );
    let out = bin()
        .args([
            "measure", "--body", &cube, "--q", "0", "--engine", "body-mc",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn report_determinism_modulo_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(
        dir.path(),
        "cube.json",
        r#"{"type":"box","halfwidths":[1,1,1]}"#,
    );
    let run = || {
        let out = bin()
            .args([
                "measure",
                "--body",
                &cube,
                "--q",
                "2.5",
                "--engine",
                "sphere-mc",
                "--samples",
                "20000",
                "--seed",
                "99",
            ])
            .output()
            .unwrap();
        let mut v = stdout_json(&out);
        v.as_object_mut().unwrap().remove("wall_time_s");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn cylinder_sweep_csv() {
    let out = bin()
        .args([
            "sweep",
            "--family",
            "cylinder",
            "--q",
            "4",
            "--n",
            "3",
            "--k",
            "1",
            "--l-grid",
            "geomspace(1,1000,13)",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "parameter,subspace_measure,total_measure,ratio,bound,margin"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 13);
    // Monotone ratio column approaching 1/2 from below.
    for w in rows.windows(2) {
        assert!(w[1][3] >= w[0][3] - 1e-12);
    }
    let last = rows.last().unwrap();
    assert!(last[3] < 0.5 && (last[3] - 0.5).abs() <= 0.01);
}

#[test]
fn tightness_sweep_csv() {
    let out = bin()
        .args([
            "sweep",
            "--family",
            "tightness",
            "--p",
            "1",
            "--lambda",
            "0.75",
            "--rho-grid",
            "geomspace(10,1000,5)",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        let ratio: f64 = cells[3].parse().unwrap();
        assert!((ratio - 0.5).abs() < 2e-3, "ratio {ratio}");
    }
}

#[test]
fn env_seed_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(
        dir.path(),
        "cube.json",
        r#"{"type":"box","halfwidths":[1,1]}"#,
    );
    let out = bin()
        .env("DUALCURVE_SEED", "4242")
        .args(["measure", "--body", &cube, "--q", "2"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert_eq!(report["config"]["seed"]["seed"], serde_json::json!(4242));
}
