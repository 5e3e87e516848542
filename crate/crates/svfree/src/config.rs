//! JSON run configuration.
//!
//! Every field is optional; missing fields take the canonical values. `T` is
//! accepted as an alias of `t_final`. The output directory can be overridden
//! with the `SVFREE_OUT_DIR` environment variable.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galerkin::{step_count, TimeScheme};
use crate::jet::JetMethod;
use crate::problem::{InitialGuess, Problem};
use crate::profile::{build_grid, sample_height_profile, Analytic, CosineSeries, Polynomial, ProfileKind};

pub const SCHEMA_VERSION: u32 = 1;
pub const OUT_DIR_ENV: &str = "SVFREE_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocityKind {
    Zero,
    /// `[c]`
    Constant,
    /// `[k1, a1, k2, a2, ...]`: `sum a_i cos(k_i pi x)`.
    Cosine,
    /// Monomial coefficients; the slope must vanish at both ends.
    Polynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocitySpec {
    pub kind: VelocityKind,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    #[default]
    Galerkin,
    FdOracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmitFlags {
    pub energy: bool,
    pub contraction: bool,
    pub snapshots: bool,
    pub boundary: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        Self {
            energy: true,
            contraction: true,
            snapshots: true,
            boundary: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub profile: ProfileSpec,
    pub u0: VelocitySpec,
    pub n_nodes: usize,
    pub n_modes: usize,
    pub dt: f64,
    #[serde(alias = "T")]
    pub t_final: f64,
    pub picard_tol: f64,
    pub max_iter: usize,
    pub scheme: TimeScheme,
    pub solver: SolverChoice,
    pub output_dir: PathBuf,
    pub emit: EmitFlags,
    /// Time derivatives used by the energy report.
    pub jet_method: JetMethod,
    /// Energy report at every this many stored steps (the last step is always included).
    pub energy_stride: usize,
    /// Number of Eulerian snapshots, evenly spaced in time.
    pub n_snapshots: usize,
    /// Samples per Eulerian snapshot.
    pub n_samples: usize,
    pub pressure: f64,
    pub initial_guess: InitialGuess,
    pub window_steps: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            profile: ProfileSpec {
                kind: ProfileKind::Parabolic,
                params: vec![1.0],
            },
            u0: VelocitySpec {
                kind: VelocityKind::Zero,
                params: Vec::new(),
            },
            n_nodes: 401,
            n_modes: 32,
            dt: 1e-4,
            t_final: 0.05,
            picard_tol: 1e-10,
            max_iter: 50,
            scheme: TimeScheme::ImplicitEuler,
            solver: SolverChoice::Galerkin,
            output_dir: PathBuf::from("svfree-out"),
            emit: EmitFlags::default(),
            jet_method: JetMethod::Pointwise,
            energy_stride: 1,
            n_snapshots: 6,
            n_samples: 201,
            pressure: 1.0,
            initial_guess: InitialGuess::FromVelocity,
            window_steps: None,
        }
    }
}

/// Reads, parses and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let config = parse_config(&text)?;
    Ok(config)
}

/// Parses and validates a JSON config; errors name the offending field.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        Error::config(if field == "." { "<root>" } else { &field }, e.inner().to_string())
    })?;
    config.apply_env();
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Applies the output-directory override from the environment.
    pub fn apply_env(&mut self) {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                self.output_dir = PathBuf::from(dir);
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(name, format!("must be positive and finite, got {v}")))
            }
        };
        positive("dt", self.dt)?;
        positive("t_final", self.t_final)?;
        positive("picard_tol", self.picard_tol)?;
        if !(self.pressure >= 0.0 && self.pressure.is_finite()) {
            return Err(Error::config("pressure", format!("must be non-negative, got {}", self.pressure)));
        }
        for (name, v) in [
            ("n_nodes", self.n_nodes),
            ("n_modes", self.n_modes),
            ("max_iter", self.max_iter),
            ("energy_stride", self.energy_stride),
        ] {
            if v == 0 {
                return Err(Error::config(name, "must be positive"));
            }
        }
        if self.n_samples < 2 {
            return Err(Error::config("n_samples", "need at least two samples"));
        }
        if self.window_steps == Some(0) {
            return Err(Error::config("window_steps", "must be positive"));
        }
        build_grid(self.n_nodes)?;
        step_count(self.t_final, self.dt)?;
        self.velocity()?;
        Ok(())
    }

    pub fn n_steps(&self) -> Result<usize> {
        step_count(self.t_final, self.dt)
    }

    /// Initial velocity as a closed form.
    pub fn velocity(&self) -> Result<Arc<dyn Analytic>> {
        let p = &self.u0.params;
        let bad = |msg: &str| Error::config("u0.params", msg);
        let f: Arc<dyn Analytic> = match self.u0.kind {
            VelocityKind::Zero if p.is_empty() => Arc::new(CosineSeries::zero()),
            VelocityKind::Zero => return Err(bad("zero velocity takes no parameters")),
            VelocityKind::Constant => match p.as_slice() {
                [c] => Arc::new(CosineSeries::constant(*c)),
                _ => return Err(bad("constant velocity takes one value")),
            },
            VelocityKind::Cosine => {
                if p.is_empty() || p.len() % 2 != 0 {
                    return Err(bad("cosine velocity takes pairs [mode, amplitude, ...]"));
                }
                let terms: Vec<(f64, f64)> = p.chunks(2).map(|c| (c[0], c[1])).collect();
                if terms.iter().any(|(k, _)| *k < 0.0 || k.fract() != 0.0) {
                    return Err(bad("cosine modes must be non-negative integers"));
                }
                Arc::new(CosineSeries {
                    constant: 0.0,
                    terms,
                })
            }
            VelocityKind::Polynomial => {
                if p.is_empty() {
                    return Err(bad("polynomial velocity needs coefficients"));
                }
                let poly = Polynomial::new(p.clone());
                for x in [0.0, 1.0] {
                    let s = poly.derivative(x, 1);
                    if s.abs() > 1e-10 {
                        return Err(bad(&format!("u0_x({x}) = {s} but the slope must vanish at the boundary")));
                    }
                }
                Arc::new(poly)
            }
        };
        if p.iter().any(|v| !v.is_finite()) {
            return Err(bad("parameters must be finite"));
        }
        Ok(f)
    }

    /// The solver-facing problem (samples and validates the profile).
    pub fn problem(&self) -> Result<Problem> {
        let grid = build_grid(self.n_nodes)?;
        let profile = sample_height_profile(self.profile.kind, &self.profile.params, &grid)?;
        let mut problem = Problem::new(profile, self.velocity()?)
            .with_modes(self.n_modes)
            .with_dt(self.dt)
            .with_t_final(self.t_final)
            .with_pressure(self.pressure)
            .with_initial_guess(self.initial_guess);
        problem.picard_tol = self.picard_tol;
        problem.max_iter = self.max_iter;
        problem.scheme = self.scheme;
        problem.window_steps = self.window_steps;
        Ok(problem)
    }
}
