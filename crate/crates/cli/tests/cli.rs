use std::f64::consts::LN_2;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn quadmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadmap"))
        .args(args)
        .env_remove("QUADMAP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn exact_orbit_returns_after_three_steps() {
    let out = quadmap(&["iterate", "--alpha", "0", "--theta", "2/7", "--exact", "--steps", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,x0,x1,norm_drift,slice_residual,theta"));
    let thetas: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(thetas, ["2/7", "4/7", "1/7", "2/7"]);
}

#[test]
fn exact_mode_rejects_decimal_angles() {
    let out = quadmap(&["iterate", "--alpha", "0", "--theta", "0.5", "--exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_floats_round_trip() {
    let out = quadmap(&["iterate", "--P", "0,0,1", "--x0", "0.6,0,0.8", "--steps", "5"]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 6);
        let norm = (fields[1] * fields[1] + fields[2] * fields[2] + fields[3] * fields[3]).sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(fields[2].abs() < 1e-15, "orbit leaves span(P, x0)");
    }
}

#[test]
fn pole_must_be_unit_unless_normalized() {
    assert_eq!(quadmap(&["iterate", "--P", "2,0", "--x0", "0,1", "--steps", "1"]).status.code(), Some(2));
    assert!(quadmap(&["iterate", "--P", "2,0", "--normalize-pole", "--x0", "0,1", "--steps", "1"]).status.success());
    assert_eq!(quadmap(&["iterate", "--P", "1,0", "--alpha", "0"]).status.code(), Some(2));
    assert_eq!(quadmap(&["iterate", "--P", "1,0", "--dim", "2"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(quadmap(&["bogus"]).status.code(), Some(2));
    assert_eq!(quadmap(&["verify", "--dim", "0"]).status.code(), Some(2));
    assert_eq!(quadmap(&["iterate", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(quadmap(&["--help"]).status.code(), Some(0));
}

#[test]
fn preimage_of_antipode() {
    let out = quadmap(&["preimage", "--P", "1,0,0", "--y", "-1,0,0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let point: Vec<f64> = text.lines().next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert!(point[0].abs() < 1e-15, "preimage of −P is orthogonal to P");
}

#[test]
fn circle_lyapunov_is_ln_2() {
    let out = quadmap(&["lyapunov", "--alpha", "0.3", "--theta", "1", "--steps", "1000"]);
    assert!(out.status.success());
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - LN_2).abs() < 1e-12);
    assert_eq!(quadmap(&["lyapunov", "--steps", "10"]).status.code(), Some(2));
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_quadmap"));
        cmd.args(["sensitivity", "--dim", "2", "--format", "json"]).args(args);
        match env {
            Some(seed) => cmd.env("QUADMAP_SEED", seed),
            None => cmd.env_remove("QUADMAP_SEED"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        json(&out)
    };
    assert_eq!(run(None, &[])["seed"], 42);
    assert_eq!(run(Some("7"), &[])["seed"], 7);
    assert_eq!(run(Some("7"), &["--seed", "9"])["seed"], 9);
    assert_ne!(run(Some("7"), &[])["witnesses"], run(None, &[])["witnesses"]);
}

#[test]
fn witness_reports_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let path_str = path.to_str().unwrap();
    let out = quadmap(&["accessibility", "--P", "1,0,0", "--U", "0,1,0:0.1", "--V", "0,0,-1:0.1", "--out", path_str]);
    assert!(out.status.success());
    assert!(quadmap(&["replay", "--report", path_str]).status.success());

    // A witness claiming too few steps must not replay.
    let mut report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    report["witnesses"][0]["step"] = Value::from(0);
    fs::write(&path, serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(quadmap(&["replay", "--report", path_str]).status.code(), Some(1));

    fs::write(&path, "not json").unwrap();
    assert_ne!(quadmap(&["replay", "--report", path_str]).status.code(), Some(0));
}

#[test]
fn transitivity_fails_off_the_slice() {
    let out = quadmap(&["transitivity", "--P", "1,0,0", "--U", "0,1,0:0.05", "--V", "0,0,1:0.05", "--max-k", "200"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("no hit within 200 steps"));
    assert!(text.contains("(certified)"));
}

#[test]
fn circle_arcs_mix() {
    let out = quadmap(&["mixing", "--alpha", "1/3", "--U", "1,0:0.05", "--V", "0,1:0.05"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mixing step 6"));
}

#[test]
fn periodic_listing() {
    let out = quadmap(&["periodic", "--alpha", "1/3", "--k", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 15);
}

#[test]
fn curves_as_csv_and_svg() {
    let out = quadmap(&["curves", "--curve", "line", "--samples", "5", "--point", "0,-1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("s,x,y,pedal_x,pedal_y,orthotomic_x,orthotomic_y\n"));
    assert_eq!(text.lines().count(), 6);

    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    let out = quadmap(&["curves", "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let picture = fs::read_to_string(&svg).unwrap();
    assert!(picture.starts_with("<svg") && picture.trim_end().ends_with("</svg>"));
}

#[test]
fn verify_report_is_deterministic_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = quadmap(&["verify", "--dim", "1", "--report", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
    let value: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["config"]["seed"], 42);
    assert!(!value["witnesses"].as_array().unwrap().is_empty());
    assert!(quadmap(&["replay", "--report", report.to_str().unwrap()]).status.success());

    let json_out = quadmap(&["verify", "--dim", "1", "--format", "json"]);
    assert_eq!(json_out.stdout, fs::read(&report).unwrap());
}
