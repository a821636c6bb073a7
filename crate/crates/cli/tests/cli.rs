use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qgem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_spec(dir: &Path, geometry: &str) -> String {
    let path = dir.join("spec.json");
    fs::write(
        &path,
        format!(
            r#"{{"geometry": "{geometry}", "mass": "1e-14 kg", "d_min": "35 um", "tau": "1 s",
                "gamma": {{"lo": "1e-4 Hz", "hi": "1e-1 Hz", "points": 6, "spacing": "log"}},
                "delta_x": {{"lo": "0 um", "hi": "40 um", "points": 25}}}}"#
        ),
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn witness_without_superposition_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"geometry": "parallel2", "mass": "1e-14 kg", "d_min": "35 um",
            "delta_x": "0 um", "tau": "1 s", "gamma": "0 Hz"}"#,
    )
    .unwrap();
    let out = qgem(&["witness", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["witness"], 0.0);
    assert_eq!(v["entangled"], false);
    assert_eq!(v["config"]["d_min"], "3.5e-5 m");
}

#[test]
fn witness_from_flags_reports_entanglement() {
    let out = qgem(&[
        "witness", "--geometry", "linear2", "--mass", "1e-14kg", "--dmin", "35um", "--dx", "10um",
        "--tau", "1s", "--gamma", "1mHz",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["entangled"], true);
    assert!(v["closed_form_gap"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["config"]["gamma"], "1e-3 Hz");
}

#[test]
fn min_dx_reproduces_light_mass_threshold() {
    let out = qgem(&[
        "min-dx", "--gamma", "1e-2", "--mass", "1e-15kg", "--dmin", "35um", "--tau", "1s",
        "--geometry", "parallel2",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let dx = v["results"][0]["min_delta_x"].as_f64().unwrap();
    assert!((dx - 7.1e-5).abs() < 2e-6, "{dx}");
    assert!(v.get("config").is_some());
}

#[test]
fn min_dx_accepts_gamma_lists() {
    let out = qgem(&[
        "min-dx", "--gamma", "1e-3,1e-2", "--gamma", "1e-1", "--mass", "1e-14kg", "--dmin", "35um",
        "--tau", "1s", "--geometry", "parallel2",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    let widths: Vec<f64> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["min_delta_x"].as_f64().unwrap())
        .collect();
    assert_eq!(widths.len(), 3);
    assert!(widths[0] < widths[1] && widths[1] < widths[2]);
}

#[test]
fn unreachable_target_exits_one() {
    let out = qgem(&[
        "min-dx", "--gamma", "1", "--mass", "1e-15kg", "--dmin", "35um", "--tau", "1s",
        "--geometry", "parallel2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["results"][0]["status"], "no_crossing");
    assert!(String::from_utf8_lossy(&out.stderr).contains("no crossing"));
}

#[test]
fn bad_input_exits_two_and_names_the_field() {
    let out = qgem(&["witness", "--geometry", "parallel2", "--mass", "1e-14 stone"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mass"));

    let out = qgem(&["witness", "--geometry", "parallel2", "--mass", "1e-14kg", "--tau", "1s"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d_min"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"geometry": "parallel2", "mass": "1e-14 kg", "d_min": "35 um",
            "delta_x": "0 um", "tau": "-1 s", "gamma": "0 Hz"}"#,
    )
    .unwrap();
    let out = qgem(&["witness", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau"));

    let out = qgem(&[
        "witness", "--geometry", "parallel3", "--mass", "1e-14kg", "--dmin", "35um", "--dx", "1um",
        "--tau", "1s", "--gamma", "0", "--bipartition", "1|2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bipartition"));
}

#[test]
fn scan_writes_one_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "parallel2");
    let csv = dir.path().join("grid.csv");
    let out = qgem(&["scan", "--spec", &spec, "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["rows"], 6 * 25);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("geometry,mass_kg,d_min_m,tau_s,gamma_hz,delta_x_m,witness"));
    assert_eq!(lines.count(), 6 * 25);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    for (command, geometry) in [("scan", "parallel3"), ("curve", "linear2")] {
        let spec = write_spec(dir.path(), geometry);
        let mut files = Vec::new();
        let mut stdouts = Vec::new();
        for threads in ["1", "3"] {
            let csv = dir.path().join(format!("{command}-{threads}.csv"));
            let out = qgem(&["--threads", threads, command, "--spec", &spec, "--out", csv.to_str().unwrap()]);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            files.push(fs::read(&csv).unwrap());
            let mut v = json(&out);
            v["out"] = Value::Null;
            stdouts.push(v);
        }
        assert_eq!(files[0], files[1], "{command}");
        assert_eq!(stdouts[0], stdouts[1]);
    }
}

#[test]
fn curve_marks_missing_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"geometry": "parallel2", "mass": "1e-15 kg", "d_min": "35 um", "tau": "1 s",
            "gamma": {"lo": "1e-2 Hz", "hi": "3 Hz", "points": 4}}"#,
    )
    .unwrap();
    let csv = dir.path().join("curve.csv");
    let out = qgem(&["curve", "--spec", spec.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(json(&out)["no_crossing"].as_u64().unwrap() >= 1);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("geometry,mass_kg,d_min_m,tau_s,gamma_hz,min_delta_x_m,status\n"));
    assert!(text.lines().nth(1).unwrap().ends_with(",ok"));
    assert!(text.lines().last().unwrap().ends_with(",,no_crossing"));
}

#[test]
fn run_is_callable_in_process() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = qgem_cli::run(["qgem", "witness", "--geometry", "nonsense"], &mut out, &mut err);
    assert_eq!(code, qgem_cli::EXIT_USAGE);
    assert!(String::from_utf8(err).unwrap().contains("--geometry"));
}
