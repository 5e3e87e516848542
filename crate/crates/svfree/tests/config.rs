use std::path::Path;

use svfree::config::*;
use svfree::jet::{HIGH_LABELS, LOW_LABELS};
use svfree::report::*;
use svfree::{load_config, Error};

fn field_of(e: Error) -> String {
    match e {
        Error::Config { field, .. } => field,
        other => panic!("expected a config error, got {other}"),
    }
}

#[test]
fn empty_object_gives_defaults() {
    let c = parse_config("{}").unwrap();
    let mut d = RunConfig::default();
    d.apply_env();
    assert_eq!(c, d);
    assert_eq!(c.n_nodes, 401);
    assert_eq!(c.n_modes, 32);
    assert_eq!((c.dt, c.t_final, c.picard_tol, c.max_iter), (1e-4, 0.05, 1e-10, 50));
}

#[test]
fn zero_step_names_dt() {
    let e = parse_config(r#"{"dt": 0}"#).unwrap_err();
    assert_eq!(e.exit_code(), 3);
    assert_eq!(field_of(e), "dt");
}

#[test]
fn step_count_from_final_time() {
    let c = parse_config(r#"{"T": 0.05, "dt": 1e-4}"#).unwrap();
    assert_eq!(c.n_steps().unwrap(), 500);
    assert_eq!(field_of(parse_config(r#"{"T": 0.05, "dt": 3e-4}"#).unwrap_err()), "dt");
}

#[test]
fn errors_name_the_field() {
    assert_eq!(field_of(parse_config(r#"{"n_modes": "many"}"#).unwrap_err()), "n_modes");
    assert_eq!(field_of(parse_config(r#"{"emit": {"energy": 1}}"#).unwrap_err()), "emit.energy");
    assert_eq!(field_of(parse_config(r#"{"n_nodes": 400}"#).unwrap_err()), "n_nodes");
    assert_eq!(field_of(parse_config(r#"{"picard_tol": -1}"#).unwrap_err()), "picard_tol");
    assert_eq!(field_of(parse_config(r#"{"schema_version": 7}"#).unwrap_err()), "schema_version");
    assert!(matches!(parse_config(r#"{"colour": 1}"#), Err(Error::Config { .. })));
    assert!(matches!(parse_config("not json"), Err(Error::Config { .. })));
}

#[test]
fn velocity_specs() {
    let c = parse_config(r#"{"u0": {"kind": "cosine", "params": [1, 0.5, 3, -0.1]}}"#).unwrap();
    let u = c.velocity().unwrap();
    let x = 0.3_f64;
    let pi = std::f64::consts::PI;
    let expected = 0.5 * (pi * x).cos() - 0.1 * (3.0 * pi * x).cos();
    assert!((u.value(x) - expected).abs() < 1e-15);

    let poly = parse_config(r#"{"u0": {"kind": "polynomial", "params": [0, 0, 3, -2]}}"#).unwrap();
    assert!((poly.velocity().unwrap().value(0.5) - 0.5).abs() < 1e-15);

    for bad in [
        r#"{"u0": {"kind": "polynomial", "params": [0, 1]}}"#,
        r#"{"u0": {"kind": "cosine", "params": [1]}}"#,
        r#"{"u0": {"kind": "cosine", "params": [1.5, 1]}}"#,
        r#"{"u0": {"kind": "constant", "params": []}}"#,
        r#"{"u0": {"kind": "zero", "params": [1]}}"#,
    ] {
        assert_eq!(field_of(parse_config(bad).unwrap_err()), "u0.params", "{bad}");
    }
}

#[test]
fn enums_use_kebab_case() {
    let c = parse_config(
        r#"{"solver": "fd-oracle", "scheme": "crank-nicolson", "jet_method": "galerkin", "initial_guess": "identity",
            "profile": {"kind": "sine", "params": [0.5]}}"#,
    )
    .unwrap();
    assert_eq!(c.solver, SolverChoice::FdOracle);
    assert!(c.problem().is_ok());
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let mut c = RunConfig::default();
    c.n_modes = 12;
    c.t_final = 0.01;
    std::fs::write(&path, serde_json::to_string(&c).unwrap()).unwrap();
    let back = load_config(&path).unwrap();
    assert_eq!(back.n_modes, 12);
    assert_eq!(back.t_final, 0.01);
    assert!(matches!(load_config(Path::new("/nonexistent/run.json")), Err(Error::Io { .. })));
}

#[test]
fn energy_header_layout() {
    let h = energy_header();
    assert_eq!(h.len(), 1 + HIGH_LABELS.len() + LOW_LABELS.len() + 3);
    assert_eq!(h[0], "t");
    assert_eq!(&h[h.len() - 3..], ["E_total", "lowE_total", "within_apriori"]);
}

#[test]
fn empty_reports_are_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let energy = dir.path().join("energy.csv");
    write_energy(&energy, &[]).unwrap();
    assert_eq!(std::fs::read_to_string(&energy).unwrap(), energy_header().join(",") + "\n");
    let contraction = dir.path().join("contraction.csv");
    write_contraction(&contraction, &[]).unwrap();
    assert_eq!(std::fs::read_to_string(&contraction).unwrap(), "iteration,sup_diff,grad_diff,total,ratio\n");
}

#[test]
fn float_formatting() {
    assert_eq!(format_float(0.0), "0");
    assert_eq!(format_float(-0.0), "0");
    assert_eq!(format_float(0.1), "0.1");
    assert_eq!(format_float(1e-12), "1e-12");
    assert_eq!(format_float(f64::INFINITY), "inf");
    assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
    assert_eq!(format_float(f64::NAN), "NaN");
    let x = 0.1 + 0.2;
    assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
}

#[test]
fn write_errors_carry_the_path() {
    let e = write_rows(Path::new("/nonexistent/dir/x.csv"), &["a"], Vec::<Vec<String>>::new()).unwrap_err();
    assert!(e.to_string().contains("/nonexistent/dir/x.csv"), "{e}");
}
