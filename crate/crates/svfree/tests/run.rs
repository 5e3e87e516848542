use std::fs;
use std::path::Path;

use svfree::config::{RunConfig, SolverChoice};
use svfree::run::*;
use svfree::verify::{run_verification_suite, Status};
use svfree::Error;

fn config(dir: &Path) -> RunConfig {
    RunConfig {
        t_final: 0.01,
        output_dir: dir.to_path_buf(),
        ..RunConfig::default()
    }
}

fn summary_json(dir: &Path) -> serde_json::Map<String, serde_json::Value> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    v.as_object().expect("summary is one object").clone()
}

#[test]
fn canonical_simulation_converges() {
    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig {
        output_dir: dir.path().to_path_buf(),
        energy_stride: 25,
        ..RunConfig::default()
    };
    let s = run_simulation(&c).unwrap();
    assert!(s.converged);
    assert!(s.min_eta_x.unwrap() >= 0.5 && s.max_eta_x.unwrap() <= 1.5);
    assert!(s.min_eta_x <= s.max_eta_x);
    assert_eq!(s.n_steps, 500);
    assert!(s.mass_drift.unwrap() <= 1e-6);
    for f in ["energy.csv", "contraction.csv", "snapshots.csv", "snapshots.json", "boundary.csv", "summary.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
        assert!(s.files.iter().any(|x| x == f), "{f}");
    }
    let obj = summary_json(dir.path());
    for key in ["schema_version", "converged", "iterations", "final_ratio", "min_eta_x", "max_eta_x", "max_energy_gap", "wall_time_s"] {
        assert!(obj.contains_key(key), "{key}");
    }
    assert_eq!(obj["converged"], true);
}

#[test]
fn emit_flags_control_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.emit.energy = false;
    c.emit.snapshots = false;
    run_simulation(&c).unwrap();
    assert!(!dir.path().join("energy.csv").exists());
    assert!(!dir.path().join("snapshots.csv").exists());
    assert!(dir.path().join("contraction.csv").exists());
}

#[test]
fn both_solvers_write_two_trajectories_and_a_diff() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.solver = SolverChoice::Both;
    let s = run_simulation(&c).unwrap();
    for f in ["trajectory_galerkin.csv", "trajectory_fd.csv", "diff.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let diff = fs::read_to_string(dir.path().join("diff.csv")).unwrap();
    assert!(diff.starts_with("t,weighted_l2,sup\n"));
    assert!(s.oracle_diff.unwrap() < 1e-3);
}

#[test]
fn identical_configs_give_identical_files() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut ca = config(a.path());
    ca.solver = SolverChoice::Both;
    let mut cb = ca.clone();
    cb.output_dir = b.path().to_path_buf();
    run_simulation(&ca).unwrap();
    run_simulation(&cb).unwrap();
    let mut n = 0;
    for entry in fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        if Path::new(&name).extension().is_some_and(|e| e == "csv") {
            let x = fs::read(a.path().join(&name)).unwrap();
            let y = fs::read(b.path().join(&name)).unwrap();
            assert!(x == y, "{name:?} differs");
            n += 1;
        }
    }
    assert!(n >= 6);
}

#[test]
fn long_horizon_fails_with_solver_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig {
        t_final: 10.0,
        dt: 1e-2,
        n_modes: 16,
        output_dir: dir.path().to_path_buf(),
        ..RunConfig::default()
    };
    let e = run_simulation(&c).unwrap_err();
    assert!(matches!(e, Error::EtaBound { .. } | Error::NonConvergence { .. }), "{e}");
    assert_eq!(e.exit_code(), 2);
    let obj = summary_json(dir.path());
    assert_eq!(obj["converged"], false);
    assert!(obj["error"].as_str().unwrap().contains("too large"));
}

#[test]
fn non_convergence_keeps_partial_contraction_history() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.max_iter = 2;
    c.picard_tol = 1e-30;
    let e = run_simulation(&c).unwrap_err();
    assert!(matches!(e, Error::NonConvergence { .. }));
    let text = fs::read_to_string(dir.path().join("contraction.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn snapshot_indices_cover_both_ends() {
    assert_eq!(snapshot_indices(11, 3), vec![0, 5, 10]);
    assert_eq!(snapshot_indices(3, 10), vec![0, 1, 2]);
    assert_eq!(snapshot_indices(5, 1), vec![4]);
}

#[test]
fn sweep_parsing() {
    let t = parse_sweep("T=0.01:0.03:3").unwrap();
    assert_eq!(t.len(), 3);
    for (a, b) in t.iter().zip([0.01, 0.02, 0.03]) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(parse_sweep("T=0.05:0.05:1").unwrap(), vec![0.05]);
    for bad in ["dt=1:2:3", "T=0.1:0.05:3", "T=0:1:3", "T=0.1:0.2", "T=a:b:c", "T=0.1:0.2:0"] {
        assert!(parse_sweep(bad).is_err(), "{bad}");
    }
}

#[test]
fn sweep_charts_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.n_modes = 16;
    c.emit.energy = false;
    let points = run_sweep(&c, &[0.00503, 0.01]).unwrap();
    assert_eq!(points.len(), 2);
    assert_eq!(points[0].n_steps, 50);
    assert!(points.iter().all(|p| p.converged));
    assert!(dir.path().join("sweep.csv").exists());
    assert!(dir.path().join("sweep.json").exists());
}

#[test]
fn default_verification_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_verification_suite(&config(dir.path())).unwrap();
    let failed: Vec<_> = report.failed().map(|c| c.name.clone()).collect();
    assert!(report.passed(), "{failed:?}\n{}", report.table());
    for name in ["physical_vacuum", "interpolation_identity_refinement", "mass_conservation", "inverse_map_roundtrip"] {
        assert_eq!(report.get(name).unwrap().status, Status::Pass, "{name}");
    }
    assert!(dir.path().join("verify.json").exists());
}

#[test]
fn corrupted_profile_fails_the_vacuum_check() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(dir.path());
    c.profile.kind = svfree::profile::ProfileKind::Custom;
    c.profile.params = vec![0.1, 1.0, -1.0];
    let report = run_verification_suite(&c).unwrap();
    assert!(!report.passed());
    assert_eq!(report.get("physical_vacuum").unwrap().status, Status::Fail);
    assert!(report.failed().any(|c| c.name == "physical_vacuum"));
}
