//! Black-box behavior of the dqlg binary: exit codes, the single-line
//! error record, and fail-closed manifests.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dqlg"))
}

#[test]
fn config_domain_violation_exits_2_with_record() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "command = evolve\nepsilon = 1.5\n").unwrap();
    let out = bin()
        .args([
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().join("o").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().unwrap();
    let parsed: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(parsed["error"]["code"], 2);
    assert!(parsed["error"]["message"]
        .as_str()
        .unwrap()
        .contains("epsilon"));
}

#[test]
fn missing_config_file_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "dilation",
            "--config",
            "/nonexistent/path.cfg",
            "--out",
            tmp.path().join("o").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn runtime_domain_error_exits_3_and_manifest_marks_failure() {
    // an ea_file with the wrong site count fails during the run, after the
    // output directory exists: the manifest must record the failure
    let tmp = tempfile::tempdir().unwrap();
    let ea = tmp.path().join("ea.csv");
    std::fs::write(&ea, "site,ea0,eax,eay,eaz\n0,0.1,0,0,0\n1,0.1,0,0,0\n").unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!(
            "command = evolve\nl = 16\nsteps = 3\nea_file = {}\n",
            ea.display()
        ),
    )
    .unwrap();
    let out_dir = tmp.path().join("o");
    let out = bin()
        .args([
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["status"], "failed");
    assert_eq!(manifest["error"]["code"], 3);
}

#[test]
fn dilation_first_row_at_unit_x_is_half_pi() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "command = dilation\nx_min = 1.0\nx_max = 1.0\nx_count = 1\n",
    )
    .unwrap();
    let out_dir = tmp.path().join("o");
    let status = bin()
        .args([
            "dilation",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out_dir.join("dilation.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    let zeta: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((zeta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn generator_scan_has_machine_zero_anchor() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let status = bin()
        .args(["generator", "--out", out_dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out_dir.join("generator.csv")).unwrap();
    let first = csv.lines().nth(1).unwrap();
    let cells: Vec<&str> = first.split(',').collect();
    assert_eq!(cells[0].parse::<f64>().unwrap(), 0.0);
    assert!(cells[2].parse::<f64>().unwrap() < 1e-12);
}

#[test]
fn snapshot_output_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "command = evolve\nl = 32\nsteps = 5\n").unwrap();
    let out_dir = tmp.path().join("o");
    assert!(bin()
        .args([
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());
    let (field, eps) = dqlg_core::emit::read_snapshot(&out_dir.join("field_final.dqlg")).unwrap();
    assert_eq!(eps, 0.5);
    assert_eq!(field.lattice().extent(), 32);
    assert!((field.norm_sq() - 1.0).abs() < 1e-12);
}

#[test]
fn thread_cap_env_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("o");
    let status = bin()
        .env("DQLG_THREADS", "2")
        .args(["dilation", "--out", out_dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let bad = bin()
        .env("DQLG_THREADS", "two")
        .args(["dilation", "--out", tmp.path().join("o2").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
