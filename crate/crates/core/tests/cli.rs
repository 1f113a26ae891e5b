//! The `strainflow` binary: exit codes, output files and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn strainflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strainflow"))
        .args(args)
        .env_remove("STRAINFLOW_N")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_requested_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tg.csv");
    let out = strainflow(&[
        "simulate", "--n", "16", "--t_end", "0.05", "--dt", "1e-3", "--record-every", "5", "--csv",
        path_str(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let (header, rows) = strainflow::output::read_csv(&text).unwrap();
    assert_eq!(header, strainflow::output::DIAGNOSTIC_COLUMNS);
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]), "E decays");
}

#[test]
fn identical_config_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# random field\nn = 16\ninitial_data = random_div_free\nseed = 11\nt_end = 0.02\ndt = 1e-3\nrecord_every = 2\n",
    )
    .unwrap();
    let mut bodies = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let csv = dir.path().join(name);
        let out = strainflow(&["simulate", "-c", path_str(&cfg), "--csv", path_str(&csv)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        bodies.push(std::fs::read(&csv).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn bad_config_exits_1_without_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, format!("n = 16\nviscosty = 1\ncsv = {}\n", csv.display())).unwrap();
    let out = strainflow(&["simulate", "--config", path_str(&cfg)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("viscosty"));

    let out = strainflow(&["simulate", "--n", "16", "--dt", "-1", "--csv", path_str(&csv)]);
    assert_eq!(code(&out), 1);
    let out = strainflow(&["simulate", "--config", path_str(&dir.path().join("missing.cfg"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1, "only the config file remains");
}

#[test]
fn unstable_run_exits_2_naming_last_time() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = strainflow(&[
        "simulate", "--n", "16", "--initial_data", "random_div_free", "--amplitude", "1e4", "--dt", "0.05",
        "--t_end", "100", "--viscosity", "1e-3", "--csv", path_str(&csv),
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("after t ="));
    assert!(!csv.exists());
}

#[test]
fn toy_ode_modes() {
    let out = strainflow(&["toy-ode", "--toy_mode", "matrix", "--toy_matrix", "-1,0.5,0.5", "--toy_t_end", "5"]);
    assert_eq!(code(&out), 0);
    let err = String::from_utf8_lossy(&out.stderr);
    let t: f64 = err.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((t - 2.0).abs() < 1e-6, "{err}");

    let out = strainflow(&[
        "toy-ode", "--toy_mode", "sweep", "--toy_sweep_lambda3", "0.5,2,3", "--toy_sweep_r", "0.6,2,3",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 10);

    let out = strainflow(&["toy-ode", "--toy_mode", "reduced", "--toy_r", "2.5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn snapshots_roundtrip_through_diagnose() {
    let dir = tempfile::tempdir().unwrap();
    let snaps = dir.path().join("snaps");
    let run_csv = dir.path().join("run.csv");
    let diag_csv = dir.path().join("diag.csv");
    let out = strainflow(&[
        "simulate", "--n", "8", "--initial_data", "random_div_free", "--seed", "3", "--t_end", "0.01", "--dt",
        "1e-3", "--record_every", "2", "--snapshot_dir",
        path_str(&snaps), "--snapshot_every", "1", "--csv", path_str(&run_csv),
    ]);
    assert_eq!(code(&out), 0);
    let mut files: Vec<String> = std::fs::read_dir(&snaps)
        .unwrap()
        .map(|e| e.unwrap().path().display().to_string())
        .collect();
    files.sort();
    assert_eq!(files.len(), 6);
    let mut args = vec!["diagnose"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--csv", path_str(&diag_csv)]);
    let out = strainflow(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // snapshots store physical values, so pointwise columns agree to rounding
    let (_, a) = strainflow::output::read_csv(&std::fs::read_to_string(&run_csv).unwrap()).unwrap();
    let (_, b) = strainflow::output::read_csv(&std::fs::read_to_string(&diag_csv).unwrap()).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x[0], y[0]);
        for col in [1, 2, 3, 4, 5, 6] {
            assert!((x[col] - y[col]).abs() <= 1e-12 * x[col].abs().max(1e-300), "column {col}: {} vs {}", x[col], y[col]);
        }
    }

    let out = strainflow(&["diagnose", path_str(&dir.path().join("nope.snap"))]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_on_minimal_grid_passes() {
    let out = strainflow(&["verify", "--verify_n", "8"]);
    let table = String::from_utf8_lossy(&out.stdout);
    println!("{table}");
    assert_eq!(code(&out), 0, "{table}");
    assert!(table.contains("0 failed"));
}

#[test]
fn verify_det_sign_flip_fails() {
    let out = strainflow(&["verify", "--verify_n", "8", "--verify_flip_det_sign", "true"]);
    assert_eq!(code(&out), 3);
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.lines().any(|l| l.starts_with("FAIL") && l.contains("vortex_stretch_identity")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed: vortex_stretch_identity"));
}

#[test]
fn env_overrides_sit_between_file_and_flags() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_strainflow"));
        c.args(["simulate", "--t_end", "0.002", "--dt", "1e-3"]).args(extra);
        match env {
            Some(v) => c.env("STRAINFLOW_N", v),
            None => c.env_remove("STRAINFLOW_N"),
        };
        c.output().unwrap()
    };
    let rows = |o: &Output| String::from_utf8_lossy(&o.stdout).lines().next().unwrap().to_string();
    let a = run(Some("8"), &[]);
    let b = run(None, &["--n", "8"]);
    let c = run(Some("12"), &["--n", "8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(rows(&a), rows(&b));
    assert_eq!(rows(&b), rows(&c));
    let d = run(Some("nonsense"), &[]);
    assert_eq!(code(&d), 1);
}
