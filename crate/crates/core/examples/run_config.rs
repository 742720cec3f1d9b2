//! Runs an experiment config the way `ttb verify` does and prints where the
//! CSVs went. Pass a config path, or the bundled default is used with fewer
//! trials.

use std::path::PathBuf;

use tensor_tail::cli::{run_config, LoadedConfig};
use tensor_tail::montecarlo::RunConfig;

fn main() -> tensor_tail::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/default.json"));
    let loaded = LoadedConfig::from_path(&path)?;
    let run = RunConfig {
        workers: loaded.config.workers,
        alpha: loaded.config.alpha,
        ..RunConfig::new(loaded.config.trials.min(10_000), loaded.config.seed)
    };
    let out = std::env::temp_dir().join("ttb-example");
    let report = run_config(&loaded, &run, &out)?;
    for p in &report.pairings {
        println!(
            "{:<24} {:<18} failures {:>2}  ok {}",
            p.ensemble, p.verification.theorem, p.failures, p.ok
        );
    }
    println!("config sha256 {}", report.config_sha256);
    println!("wrote {}", out.display());
    Ok(())
}
