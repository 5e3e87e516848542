//! Where does the Picard iteration stop converging? Sweeps the final time
//! and writes `sweep.csv` to a temporary directory.

use svfree::run::{parse_sweep, run_sweep};
use svfree::RunConfig;

fn main() -> svfree::Result<()> {
    let dir = std::env::temp_dir().join("svfree-sweep-example");
    let config = RunConfig {
        dt: 1e-2,
        n_modes: 16,
        energy_stride: 10,
        output_dir: dir.clone(),
        ..RunConfig::default()
    };
    let points = run_sweep(&config, &parse_sweep("T=0.5:8:6")?)?;
    for p in &points {
        println!(
            "T = {:<6.3} converged = {:<5} iterations = {:>2} max ratio = {:<10} eta_x in [{}, {}]",
            p.t_final,
            p.converged,
            p.iterations,
            p.max_ratio.map_or("-".into(), |r| format!("{r:.3e}")),
            p.min_eta_x.map_or("-".into(), |v| format!("{v:.4}")),
            p.max_eta_x.map_or("-".into(), |v| format!("{v:.4}")),
        );
    }
    println!("table written to {}", dir.join("sweep.csv").display());
    Ok(())
}
