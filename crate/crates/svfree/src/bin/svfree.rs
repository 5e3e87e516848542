use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use svfree::config::{RunConfig, SolverChoice};
use svfree::jet::JetMethod;
use svfree::run::{parse_sweep, run_simulation, run_sweep};
use svfree::verify::run_verification_suite;
use svfree::{load_config, Error};

/// Viscous Saint-Venant vacuum free-boundary solver.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve once and write the reports.
    Simulate(Overrides),
    /// Run the verification suite and print a pass/fail table.
    Verify(Overrides),
    /// Rerun the nonlinear solve over a range of final times.
    Sweep {
        /// `T=a:b:n`
        #[arg(long)]
        sweep: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// JSON config; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    picard_tol: Option<f64>,
    #[arg(long, value_parser = parse_solver)]
    solver: Option<SolverChoice>,
    #[arg(long, value_parser = parse_jet)]
    jet_method: Option<JetMethod>,
    /// Output directory (also settable with SVFREE_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_solver(s: &str) -> Result<SolverChoice, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| "expected galerkin, fd-oracle or both".into())
}

fn parse_jet(s: &str) -> Result<JetMethod, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| "expected pointwise or galerkin".into())
}

impl Overrides {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(p) => load_config(p)?,
            None => {
                let mut c = RunConfig::default();
                c.apply_env();
                c
            }
        };
        if let Some(v) = self.n_modes {
            c.n_modes = v;
        }
        if let Some(v) = self.dt {
            c.dt = v;
        }
        if let Some(v) = self.t_final {
            c.t_final = v;
        }
        if let Some(v) = self.picard_tol {
            c.picard_tol = v;
        }
        if let Some(v) = self.solver {
            c.solver = v;
        }
        if let Some(v) = self.jet_method {
            c.jet_method = v;
        }
        if let Some(v) = &self.out {
            c.output_dir = v.clone();
        }
        c.validate()?;
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Simulate(o) => {
            let config = o.config()?;
            let s = run_simulation(&config)?;
            println!(
                "converged after {} iterations, eta_x in [{:.6}, {:.6}], {:.2} s; reports in {}",
                s.iterations,
                s.min_eta_x.unwrap_or(f64::NAN),
                s.max_eta_x.unwrap_or(f64::NAN),
                s.wall_time_s,
                config.output_dir.display()
            );
            Ok(0)
        }
        Command::Verify(o) => {
            let config = o.config()?;
            let report = run_verification_suite(&config)?;
            print!("{}", report.table());
            if report.passed() {
                Ok(0)
            } else {
                for c in report.failed() {
                    eprintln!("check failed: {}", c.name);
                }
                Ok(1)
            }
        }
        Command::Sweep { sweep, overrides } => {
            let config = overrides.config()?;
            let points = run_sweep(&config, &parse_sweep(&sweep)?)?;
            for p in &points {
                println!(
                    "T = {:<10} converged = {:<5} iterations = {:<3} max ratio = {}",
                    p.t_final,
                    p.converged,
                    p.iterations,
                    p.max_ratio.map_or("-".into(), |r| format!("{r:.3e}"))
                );
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors count as config errors; help and version exit 0
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
