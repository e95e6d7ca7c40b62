//! End-to-end tests of the `schnewton` binary: exit codes, config handling,
//! flag overrides, and report/density artifacts.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schnewton"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn plain_run_exits_zero_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "solve",
        "--self-interaction",
        "none",
        "--level",
        "1",
        "--report-out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let level = &parsed["levels"][0];
    assert_eq!(level["level"], 1);
    assert_eq!(level["converged"], Value::Bool(true));
    assert_eq!(level["node_count"], 0);
    let energy = level["energy_ev"].as_f64().unwrap();
    assert!((energy / -13.593 - 1.0).abs() < 5e-4, "energy {energy}");
    // Constants echoed for provenance.
    assert_eq!(
        parsed["provenance"]["constants"]["G"].as_f64().unwrap(),
        6.67430e-11
    );
    let ratio = parsed["gravity_ratio"].as_f64().unwrap();
    assert!((ratio / 8.8158e-40 - 1.0).abs() < 1e-3, "gravity_ratio {ratio}");
}

#[test]
fn report_goes_to_stdout_without_report_out() {
    let out = run(&[
        "solve",
        "--self-interaction",
        "none",
        "--level",
        "1",
        "--r-max",
        "40",
        "--grid-points",
        "2000",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let json_start = stdout.find('{').expect("stdout contains a JSON report");
    let parsed: Value = serde_json::from_str(&stdout[json_start..]).unwrap();
    assert!(parsed["levels"].is_array());
}

#[test]
fn three_level_self_interacting_run_reproduces_reference_tables() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = run(&[
        "solve",
        "--self-interaction",
        "both",
        "--level",
        "1",
        "--level",
        "2",
        "--level",
        "3",
        "--report-out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();

    let refs = [-1.2561, -0.21601, -0.074618];
    for (i, &reference) in refs.iter().enumerate() {
        let e = parsed["levels"][i]["energy_ev"].as_f64().unwrap();
        assert!((e / reference - 1.0).abs() < 5e-3, "level {}: {e}", i + 1);
    }
    let gap_refs = [(3, 2, -0.14139), (2, 1, -1.0400), (3, 1, -1.1814)];
    for (i, &(from, to, reference)) in gap_refs.iter().enumerate() {
        let t = &parsed["transitions"][i];
        assert_eq!(t["from"].as_u64().unwrap(), from);
        assert_eq!(t["to"].as_u64().unwrap(), to);
        let gap = t["gap_ev"].as_f64().unwrap();
        assert!((gap / reference - 1.0).abs() < 5e-3, "{from}→{to}: {gap}");
        // Experimental gaps stored verbatim.
        assert!(t["experimental_ev"].as_f64().is_some());
    }
    let dev2 = parsed["bohr_deviations"][0]["deviation"].as_f64().unwrap();
    assert!((dev2 - 0.3121).abs() < 0.02, "level-2 Bohr deviation {dev2}");
    // Five-significant-figure renderings accompany every energy.
    assert!(parsed["levels"][0]["energy_ev_5sig"].is_string());
    assert!(parsed["transitions"][0]["gap_ev_5sig"].is_string());
}

#[test]
fn non_convergence_exits_one_but_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "slow.json",
        r#"{ "levels": [1], "self_interaction": "electric", "r_max": 40.0,
             "grid_points": 2000, "max_iterations": 2 }"#,
    );
    let report = dir.path().join("report.json");
    let out = run(&[
        "solve",
        "--config",
        &config,
        "--report-out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(parsed["levels"][0]["converged"], Value::Bool(false));
    assert_eq!(parsed["levels"][0]["iterations"], 2);
}

#[test]
fn invalid_config_exits_two_with_field_name() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "bad.json", r#"{ "mixing_beta": 1.5 }"#);
    let out = run(&["solve", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mixing_beta"), "stderr: {stderr}");

    let config = write_config(dir.path(), "unknown.json", r#"{ "no_such_field": 1 }"#);
    let out = run(&["solve", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("no_such_field"), "stderr: {stderr}");

    let out = run(&["solve", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "base.json",
        r#"{ "levels": [2], "self_interaction": "both", "r_max": 300.0, "grid_points": 4000 }"#,
    );
    let report = dir.path().join("report.json");
    let out = run(&[
        "solve",
        "--config",
        &config,
        "--self-interaction",
        "none",
        "--level",
        "1",
        "--r-max",
        "50",
        "--grid-points",
        "2500",
        "--beta",
        "0.4",
        "--tolerance",
        "1e-8",
        "--report-out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let levels = parsed["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 1);
    assert_eq!(levels[0]["level"], 1);
    let echo = &parsed["provenance"]["config"];
    assert_eq!(echo["self_interaction"], "none");
    assert_eq!(echo["r_max"].as_f64().unwrap(), 50.0);
    assert_eq!(echo["grid_points"].as_u64().unwrap(), 2500);
    assert_eq!(echo["mixing_beta"].as_f64().unwrap(), 0.4);
    assert_eq!(echo["energy_tolerance"].as_f64().unwrap(), 1e-8);
}

#[test]
fn density_csv_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let density = dir.path().join("density.csv");
    let out = run(&[
        "solve",
        "--self-interaction",
        "none",
        "--level",
        "1",
        "--r-max",
        "40",
        "--grid-points",
        "2000",
        "--density-out",
        density.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let path = dir.path().join("density_level1.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));
    assert!(!text.contains('\r'), "LF line endings only");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r_bohr,F_per_bohr"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (r, f) = l.split_once(',').unwrap();
            (r.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 2000);
    for pair in rows.windows(2) {
        assert!(pair[1].0 > pair[0].0);
    }
    // Plain ground-state density peaks at 1 Bohr.
    let peak = rows
        .iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
        .0;
    assert!((peak - 1.0).abs() < 0.05, "peak at {peak}");
}

#[test]
fn amplified_gravity_flag_reaches_the_solver() {
    // With electric self-interaction off and the gravitational coupling
    // amplified to α ≈ −0.1, the ground state binds deeper than plain.
    let dir = tempfile::tempdir().unwrap();
    let report_plain = dir.path().join("plain.json");
    let report_grav = dir.path().join("grav.json");
    let base = [
        "solve",
        "--level",
        "1",
        "--r-max",
        "40",
        "--grid-points",
        "2000",
    ];
    let out = run(&[
        &base[..],
        &["--self-interaction", "none", "--report-out", report_plain.to_str().unwrap()],
    ]
    .concat());
    assert!(out.status.success());
    let out = run(&[
        &base[..],
        &[
            "--self-interaction",
            "gravitational",
            "--amplify-gravity",
            "2.2687e38",
            "--report-out",
            report_grav.to_str().unwrap(),
        ],
    ]
    .concat());
    assert!(out.status.success());

    let read = |p: &Path| -> f64 {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["levels"][0]["energy_ev"].as_f64().unwrap()
    };
    assert!(read(&report_grav) < read(&report_plain));
}
