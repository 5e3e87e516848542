//! CSV and JSON report files.
//!
//! Column order is fixed:
//!
//! | file | columns |
//! |---|---|
//! | `energy.csv` | `t`, the 15 `E_*` summands, the 9 `L_*` summands, `E_total`, `lowE_total`, `within_apriori` |
//! | `contraction.csv` | `iteration, sup_diff, grad_diff, total, ratio` |
//! | `snapshots.csv` | `t, y, rho, u` (one row per sample) |
//! | `snapshots.json` | per snapshot: `t`, `boundary`, `boundary_velocity`, `mass` |
//! | `boundary.csv` | `t`, `vx_left, vx_right, stress_left, stress_right, ux_left, ux_right, slope_left, slope_right` |
//! | `trajectory_*.csv` | `t, x, v, eta, eta_x` |
//! | `diff.csv` | `t, weighted_l2, sup` |
//! | `sweep.csv` | see [`crate::run::SweepPoint`] |
//!
//! Floats are written in shortest round-trip form, so identical runs give
//! byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eulerian::{BoundaryReport, EulerianSnapshot};
use crate::jet::{EnergyReport, HIGH_LABELS, LOW_LABELS};
use crate::picard::ContractionReport;

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes a header and rows of pre-formatted fields.
pub fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = writer(path)?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Shortest round-trip decimal, `inf`, `-inf` or `NaN`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn energy_header() -> Vec<&'static str> {
    let mut h = vec!["t"];
    h.extend(HIGH_LABELS);
    h.extend(LOW_LABELS);
    h.extend(["E_total", "lowE_total", "within_apriori"]);
    h
}

pub fn write_energy(path: &Path, reports: &[EnergyReport]) -> Result<()> {
    write_rows(
        path,
        &energy_header(),
        reports.iter().map(|r| {
            let mut row = vec![format_float(r.t)];
            row.extend(r.high.iter().chain(&r.low).map(|&v| format_float(v)));
            row.extend([format_float(r.e_total), format_float(r.low_e_total), r.within_apriori.to_string()]);
            row
        }),
    )
}

pub fn write_contraction(path: &Path, history: &[ContractionReport]) -> Result<()> {
    write_rows(
        path,
        &["iteration", "sup_diff", "grad_diff", "total", "ratio"],
        history.iter().map(|c| {
            vec![
                c.iteration.to_string(),
                format_float(c.sup_diff),
                format_float(c.grad_diff),
                format_float(c.total()),
                c.ratio.map(format_float).unwrap_or_default(),
            ]
        }),
    )
}

#[derive(Serialize)]
struct SnapshotHeader {
    t: f64,
    boundary: (f64, f64),
    boundary_velocity: (f64, f64),
    mass: f64,
    n_samples: usize,
}

/// `snapshots.csv` with the samples and `snapshots.json` with per-snapshot metadata.
pub fn write_snapshots(csv_path: &Path, json_path: &Path, snapshots: &[EulerianSnapshot]) -> Result<()> {
    write_rows(
        csv_path,
        &["t", "y", "rho", "u"],
        snapshots
            .iter()
            .flat_map(|s| s.samples.iter().map(move |&(y, r, u)| vec![format_float(s.t), format_float(y), format_float(r), format_float(u)])),
    )?;
    let headers: Vec<SnapshotHeader> = snapshots
        .iter()
        .map(|s| SnapshotHeader {
            t: s.t,
            boundary: s.boundary,
            boundary_velocity: s.boundary_velocity,
            mass: s.mass(),
            n_samples: s.samples.len(),
        })
        .collect();
    write_json(json_path, &headers)
}

pub fn write_boundary(path: &Path, reports: &[BoundaryReport]) -> Result<()> {
    write_rows(
        path,
        &[
            "t",
            "vx_left",
            "vx_right",
            "stress_left",
            "stress_right",
            "ux_left",
            "ux_right",
            "slope_left",
            "slope_right",
        ],
        reports.iter().map(|b| {
            vec![
                format_float(b.t),
                format_float(b.vx_at_boundary.0),
                format_float(b.vx_at_boundary.1),
                format_float(b.stress_at_boundary.0),
                format_float(b.stress_at_boundary.1),
                format_float(b.ux_at_boundary.0),
                format_float(b.ux_at_boundary.1),
                format_float(b.soundspeed_slope.0),
                format_float(b.soundspeed_slope.1),
            ]
        }),
    )
}

/// Nodal `v, eta, eta_x` at the given stored time indices.
pub fn write_trajectory(path: &Path, traj: &crate::SolutionTrajectory, indices: &[usize]) -> Result<()> {
    let x = traj.grid.nodes();
    write_rows(
        path,
        &["t", "x", "v", "eta", "eta_x"],
        indices.iter().flat_map(|&k| {
            let v = traj.velocity_nodal(k);
            let t = traj.times[k];
            (0..x.len())
                .map(move |i| {
                    vec![
                        format_float(t),
                        format_float(x[i]),
                        format_float(v[i]),
                        format_float(traj.flow.eta[k][i]),
                        format_float(traj.flow.eta_x[k][i]),
                    ]
                })
                .collect::<Vec<_>>()
        }),
    )
}

/// Pretty-printed JSON with a trailing newline. Non-finite floats become `null`.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}
