//! The `ttb` command line: `selftest`, `verify`, `bound` and `sample`.
//!
//! Exit codes are 0 on success, 1 when a check or verification fails and 2
//! for usage, configuration and I/O errors.

mod bound_cmd;
pub mod config;
mod sample_cmd;
pub mod selftest;
mod verify_cmd;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bounds::Regime;
use crate::error::Error;
use crate::tensor::DenseTensor;

pub use config::{CoefficientSource, EnsembleConfig, ExperimentConfig, LoadedConfig, Pairing, SCHEMA_VERSION};
pub use selftest::{run_selftest, SelftestCheck, SelftestReport};
pub use verify_cmd::{render_csv, run_config, PairingReport, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Replaceable primitives used by `selftest`, so a deliberately broken
/// implementation can be shown to fail.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub conjugate_transpose: fn(&DenseTensor) -> DenseTensor,
}

impl Default for Hooks {
    fn default() -> Self {
        Self {
            conjugate_transpose: DenseTensor::conjugate_transpose,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ttb", version, about = "Tail bounds for sums of random Hermitian tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check algebraic and spectral identities on seeded random instances.
    Selftest(SelftestArgs),
    /// Run the Monte Carlo verification described by a config file.
    Verify(VerifyArgs),
    /// Evaluate a closed-form bound.
    Bound(BoundArgs),
    /// Dump raw draws of one ensemble.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Random instances per check.
    #[arg(long, default_value_t = 16)]
    pub instances: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, env = "TTB_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Print the report as JSON on stdout.
    #[arg(long)]
    pub json: bool,
    /// Validate the config and print the plan without sampling.
    #[arg(long)]
    pub dry_run: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// A theorem tag, or one of `chernoff-expectation`, `subexp-expectation`,
    /// `sandwich`, `chernoff-constant`.
    pub theorem: String,
    /// Square dimensions; `dim_product` is their product.
    #[arg(long, value_delimiter = ',', conflicts_with = "dim_product")]
    pub dims: Option<Vec<usize>>,
    #[arg(long)]
    pub dim_product: Option<u64>,
    #[arg(long = "sigma2", default_value_t = 0.0)]
    pub sigma_sq: f64,
    #[arg(long = "T", alias = "t-bound", default_value_t = 1.0)]
    pub t_bound: f64,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub mu_max: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu_min: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu_bar_max: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu_bar_min: f64,
    #[arg(long, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// Regime for `bernstein` and `subexp`.
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum RegimeArg {
    Auto,
    General,
    Small,
    Large,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Auto => Regime::Auto,
            RegimeArg::General => Regime::General,
            RegimeArg::Small => Regime::Small,
            RegimeArg::Large => Regime::Large,
        }
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Ensemble name; defaults to the first one in the config.
    #[arg(long)]
    pub ensemble: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write `draw_<k>.json`/`.bin` pairs here instead of JSON lines on stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_hooks(args, Hooks::default(), out, err)
}

pub fn run_with_hooks<I, T>(args: I, hooks: Hooks, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Selftest(a) => selftest::command(&a, hooks, out),
        Command::Verify(a) => verify_cmd::command(&a, out),
        Command::Bound(a) => bound_cmd::command(&a, out),
        Command::Sample(a) => sample_cmd::command(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Scientific failures map to 1, everything else to 2.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) | Error::MomentCondition { .. } => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}
