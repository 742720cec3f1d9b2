use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::{LoadedConfig, Pairing};
use super::{VerifyArgs, EXIT_FAILURE, EXIT_OK};
use crate::error::Result;
use crate::montecarlo::{statistic_for, verify, RunConfig, Verification};

/// One pairing's outcome as recorded in `report.json`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub ensemble: String,
    pub csv: PathBuf,
    pub expect_violation: bool,
    pub failures: usize,
    /// Passed, or failed as a falsification control should.
    pub ok: bool,
    pub verification: Verification,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: super::ExperimentConfig,
    pub config_sha256: String,
    pub seed: u64,
    pub trials: usize,
    pub wall_time_s: f64,
    pub pairings: Vec<PairingReport>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.pairings.iter().all(|p| p.ok)
    }
}

fn csv_name(p: &Pairing) -> String {
    format!("{}__{}.csv", p.ensemble, p.theorem)
}

/// Tail table with a leading `#` comment carrying the seed and config hash.
pub fn render_csv(v: &Verification, config_sha256: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# theorem={} kind={} seed={} trials={} alpha={} config_sha256={}",
        v.theorem, v.kind, v.seed, v.trials, v.alpha, config_sha256
    );
    s.push_str("theta,p_hat,ci_upper,bound,tightness,pass\n");
    for r in &v.verdicts {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.estimate.theta, r.estimate.p_hat, r.estimate.ci_upper, r.bound.value, r.tightness, r.pass
        );
    }
    s
}

fn run_pairing(p: &Pairing, loaded: &LoadedConfig, base: &RunConfig, out_dir: &Path) -> Result<PairingReport> {
    let e = p.spec.prepare()?;
    let cfg = RunConfig {
        seed: p.seed,
        ..base.clone()
    };
    let v = verify(&e, p.theorem, &p.grid, &cfg, p.tamper)?;
    let csv = out_dir.join(csv_name(p));
    std::fs::write(&csv, render_csv(&v, &loaded.sha256))?;
    let failures = v.failures();
    let ok = if p.expect_violation {
        failures > 0
    } else {
        failures == 0
    };
    Ok(PairingReport {
        ensemble: p.ensemble.clone(),
        csv,
        expect_violation: p.expect_violation,
        failures,
        ok,
        verification: v,
    })
}

/// Runs every pairing of a loaded config, writing the CSVs and `report.json`
/// under `out_dir`.
pub fn run_config(loaded: &LoadedConfig, run: &RunConfig, out_dir: &Path) -> Result<Report> {
    let start = Instant::now();
    let pairings = loaded.pairings()?;
    std::fs::create_dir_all(out_dir)?;
    let pairings = pairings
        .iter()
        .map(|p| run_pairing(p, loaded, run, out_dir))
        .collect::<Result<Vec<_>>>()?;
    let report = Report {
        config: loaded.config.clone(),
        config_sha256: loaded.sha256.clone(),
        seed: run.seed,
        trials: run.trials,
        wall_time_s: start.elapsed().as_secs_f64(),
        pairings,
    };
    std::fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

pub(super) fn command(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut loaded = LoadedConfig::from_path(&a.config)?;
    let c = &mut loaded.config;
    if let Some(seed) = a.seed {
        c.seed = seed;
    }
    if let Some(trials) = a.trials {
        c.trials = trials;
    }
    if a.workers.is_some() {
        c.workers = a.workers;
    }
    let run = RunConfig {
        trials: c.trials,
        seed: c.seed,
        workers: c.workers,
        alpha: c.alpha,
        certify_draws: c.certify_draws,
    };
    let out_dir = a.out_dir.clone().unwrap_or_else(|| c.out_dir.clone());

    if a.dry_run {
        let pairings = loaded.pairings()?;
        writeln!(out, "config_sha256 {}", loaded.sha256)?;
        writeln!(
            out,
            "trials {} seed {} out_dir {}",
            run.trials,
            run.seed,
            out_dir.display()
        )?;
        for p in &pairings {
            let stat = statistic_for(p.theorem, &p.spec.prepare()?)?;
            writeln!(
                out,
                "{:<24} {:<20} {:<18} {:?}{}",
                p.ensemble,
                p.theorem,
                format!("{stat:?}"),
                p.grid,
                if p.expect_violation { "  (control)" } else { "" }
            )?;
        }
        return Ok(EXIT_OK);
    }

    let report = run_config(&loaded, &run, &out_dir)?;
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(
            out,
            "{:<24} {:<20} {:>6} {:>8}  status",
            "ensemble", "theorem", "points", "failures"
        )?;
        for p in &report.pairings {
            let status = match (p.ok, p.expect_violation) {
                (true, false) => "pass",
                (true, true) => "violation detected",
                (false, false) => "FAIL",
                (false, true) => "FAIL (control not violated)",
            };
            writeln!(
                out,
                "{:<24} {:<20} {:>6} {:>8}  {status}",
                p.ensemble,
                p.verification.theorem.as_str(),
                p.verification.verdicts.len(),
                p.failures
            )?;
        }
        writeln!(out, "wrote {}", out_dir.join("report.json").display())?;
    }
    Ok(if report.all_ok() { EXIT_OK } else { EXIT_FAILURE })
}
