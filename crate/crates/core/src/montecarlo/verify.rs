use serde::{Deserialize, Serialize};

use super::{sample_statistic_for, RunConfig, Statistic, TailEstimate, TailVerdict};
use crate::bounds::{
    evaluate, hadamard_series_params, rectangular_series_params, theta_range, BoundParams, TheoremTag,
};
use crate::ensembles::{purpose, EnsembleKind, EnsembleParams, PreparedEnsemble, Provenance, RngState};
use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 16;

/// Draws used to place quantile-based θ grids.
pub const PILOT_TRIALS: usize = 20_000;

/// How to choose the thresholds at which a theorem is checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ThetaGrid {
    Explicit {
        values: Vec<f64>,
    },
    Linspace {
        start: f64,
        stop: f64,
        points: usize,
    },
    Logspace {
        start: f64,
        stop: f64,
        points: usize,
    },
    /// θ values whose pilot tail probabilities are log-spaced from `p_max`
    /// down to `p_min`, clipped to the theorem's θ range.
    Quantiles {
        #[serde(default = "default_points")]
        points: usize,
        #[serde(default = "default_p_max")]
        p_max: f64,
        #[serde(default = "default_p_min")]
        p_min: f64,
    },
}

fn default_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_p_max() -> f64 {
    0.5
}

fn default_p_min() -> f64 {
    1e-3
}

impl Default for ThetaGrid {
    fn default() -> Self {
        ThetaGrid::Quantiles {
            points: DEFAULT_GRID_POINTS,
            p_max: default_p_max(),
            p_min: default_p_min(),
        }
    }
}

fn spaced(start: f64, stop: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::Config("theta grid needs at least one point".into()));
    }
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(Error::Config("logspace grid needs positive endpoints".into()));
    }
    let (a, b) = if log { (start.ln(), stop.ln()) } else { (start, stop) };
    Ok((0..points)
        .map(|k| {
            let x = if points == 1 {
                a
            } else {
                a + (b - a) * k as f64 / (points - 1) as f64
            };
            if log {
                x.exp()
            } else {
                x
            }
        })
        .collect())
}

/// Deliberate mis-specification of the bound parameters, used to show the
/// harness can detect violations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tamper {
    pub sigma_sq_factor: f64,
    pub mu_factor: f64,
}

impl Default for Tamper {
    fn default() -> Self {
        Self::none()
    }
}

impl Tamper {
    pub fn none() -> Self {
        Self {
            sigma_sq_factor: 1.0,
            mu_factor: 1.0,
        }
    }

    pub fn halve_sigma_sq() -> Self {
        Self {
            sigma_sq_factor: 0.5,
            ..Self::none()
        }
    }

    pub fn halve_mu() -> Self {
        Self {
            mu_factor: 0.5,
            ..Self::none()
        }
    }

    pub fn is_none(&self) -> bool {
        *self == Self::none()
    }

    pub fn apply(&self, p: &mut BoundParams) {
        p.sigma_sq *= self.sigma_sq_factor;
        p.mu_max *= self.mu_factor;
        p.mu_min *= self.mu_factor;
        p.mu_bar_max *= self.mu_factor;
        p.mu_bar_min *= self.mu_factor;
    }
}

/// Ensemble kinds whose construction satisfies the hypotheses of `tag`.
pub fn compatible_kinds(tag: TheoremTag) -> &'static [EnsembleKind] {
    use EnsembleKind::*;
    match tag {
        TheoremTag::Gaussian | TheoremTag::GaussianNorm => &[GaussianSeries, RademacherSeries],
        TheoremTag::Rectangular => &[GaussianSeries, RademacherSeries, HadamardGaussian],
        TheoremTag::Chernoff1Upper
        | TheoremTag::Chernoff1Lower
        | TheoremTag::Chernoff2Upper
        | TheoremTag::Chernoff2Lower => &[PsdBounded],
        TheoremTag::Bernstein | TheoremTag::BernsteinSmall | TheoremTag::BernsteinLarge => &[CenteredBounded],
        TheoremTag::Subexp | TheoremTag::SubexpSmall | TheoremTag::SubexpLarge => &[Subexponential, CenteredBounded],
        TheoremTag::Azuma => &[AzumaMartingale, CenteredBounded, RademacherSeries],
        TheoremTag::Hoeffding => &[CenteredBounded, RademacherSeries],
        TheoremTag::McDiarmid => &[McdiarmidFunction],
        TheoremTag::Master => &[],
    }
}

fn incompatible(tag: TheoremTag, e: &PreparedEnsemble) -> Error {
    let kind = if e.is_hermitian() {
        e.kind().to_string()
    } else {
        format!("{} (rectangular)", e.kind())
    };
    Error::Incompatible {
        theorem: tag.to_string(),
        kind,
    }
}

/// The statistic whose tail `tag` bounds, or an error when the pairing is
/// not in the compatibility table.
pub fn statistic_for(tag: TheoremTag, e: &PreparedEnsemble) -> Result<Statistic> {
    if !compatible_kinds(tag).contains(&e.kind()) {
        return Err(incompatible(tag, e));
    }
    if tag != TheoremTag::Rectangular && !e.is_hermitian() {
        return Err(incompatible(tag, e));
    }
    Ok(match tag {
        TheoremTag::GaussianNorm | TheoremTag::Rectangular => Statistic::SpectralNormSum,
        TheoremTag::Chernoff1Lower | TheoremTag::Chernoff2Lower => Statistic::LambdaMinSum,
        TheoremTag::McDiarmid => Statistic::LambdaMaxCenteredF,
        _ => Statistic::LambdaMaxSum,
    })
}

/// Bound parameters for checking `tag` on `e`. The rectangular theorem uses
/// the dilation statistics; everything else uses [`PreparedEnsemble::params`].
pub fn theorem_params(tag: TheoremTag, e: &PreparedEnsemble) -> Result<EnsembleParams> {
    if tag == TheoremTag::Rectangular {
        let coeffs = &e.spec().coefficients;
        let params = if e.kind() == EnsembleKind::HadamardGaussian {
            hadamard_series_params(&coeffs[0])?
        } else {
            rectangular_series_params(coeffs)?
        };
        return Ok(EnsembleParams {
            params,
            provenance: Provenance::Exact,
        });
    }
    e.params()
}

/// Value of the statistic that `theta` refers to.
pub fn threshold(tag: TheoremTag, p: &BoundParams, theta: f64) -> f64 {
    match tag {
        TheoremTag::Chernoff1Upper | TheoremTag::Chernoff1Lower => p.n as f64 * theta * p.t_bound,
        TheoremTag::Chernoff2Upper => (1.0 + theta) * p.mu_max,
        TheoremTag::Chernoff2Lower => (1.0 - theta) * p.mu_min,
        _ => theta,
    }
}

/// Inverse of [`threshold`].
pub fn invert_threshold(tag: TheoremTag, p: &BoundParams, x: f64) -> f64 {
    match tag {
        TheoremTag::Chernoff1Upper | TheoremTag::Chernoff1Lower => x / (p.n as f64 * p.t_bound),
        TheoremTag::Chernoff2Upper => x / p.mu_max - 1.0,
        TheoremTag::Chernoff2Lower => 1.0 - x / p.mu_min,
        _ => x,
    }
}

/// All verdicts for one (ensemble, theorem) pairing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub theorem: TheoremTag,
    pub kind: EnsembleKind,
    pub statistic: Statistic,
    pub params: BoundParams,
    pub provenance: Provenance,
    pub tamper: Tamper,
    pub seed: u64,
    pub trials: usize,
    pub alpha: f64,
    pub verdicts: Vec<TailVerdict>,
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.pass).count()
    }
}

fn quantile_thetas(
    e: &PreparedEnsemble,
    tag: TheoremTag,
    stat: Statistic,
    p: &BoundParams,
    cfg: &RunConfig,
    (points, p_max, p_min): (usize, f64, f64),
) -> Result<Vec<f64>> {
    if !(0.0 < p_min && p_min <= p_max && p_max < 1.0) {
        return Err(Error::Config(format!(
            "quantile grid needs 0 < p_min <= p_max < 1, got ({p_min}, {p_max})"
        )));
    }
    let pilot_trials = PILOT_TRIALS.min(cfg.trials.max(1000));
    let mut pilot = sample_statistic_for(e, stat, pilot_trials, cfg.seed, purpose::PILOT, cfg.workers)?;
    if stat.is_lower_tail() {
        pilot.sort_by(f64::total_cmp);
    } else {
        pilot.sort_by(|a, b| b.total_cmp(a));
    }
    let probs = spaced(p_max, p_min, points, true)?;
    let (lo, hi) = theta_range(tag, p);
    let mut thetas: Vec<f64> = probs
        .iter()
        .map(|q| {
            let k = ((q * pilot_trials as f64) as usize).min(pilot_trials - 1);
            invert_threshold(tag, p, pilot[k]).clamp(lo, hi)
        })
        .filter(|t| t.is_finite())
        .collect();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    Ok(thetas)
}

/// Estimates the tail of the statistic bounded by `tag` at every θ of the
/// grid and compares it with the analytic bound computed from the ensemble
/// description.
pub fn verify(
    e: &PreparedEnsemble,
    tag: TheoremTag,
    grid: &ThetaGrid,
    cfg: &RunConfig,
    tamper: Tamper,
) -> Result<Verification> {
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    let stat = statistic_for(tag, e)?;
    let EnsembleParams { mut params, provenance } = theorem_params(tag, e)?;
    tamper.apply(&mut params);
    params.validate()?;

    for k in 0..cfg.certify_draws.min(cfg.trials) {
        e.certify(RngState::new(cfg.seed, k as u64))?;
    }

    let thetas = match grid {
        ThetaGrid::Explicit { values } => values.clone(),
        ThetaGrid::Linspace { start, stop, points } => spaced(*start, *stop, *points, false)?,
        ThetaGrid::Logspace { start, stop, points } => spaced(*start, *stop, *points, true)?,
        ThetaGrid::Quantiles { points, p_max, p_min } => {
            quantile_thetas(e, tag, stat, &params, cfg, (*points, *p_max, *p_min))?
        }
    };

    let samples = sample_statistic_for(e, stat, cfg.trials, cfg.seed, purpose::MAIN, cfg.workers)?;
    let verdicts = thetas
        .iter()
        .map(|&theta| {
            let bound = evaluate(tag, &params, theta)?;
            let x = threshold(tag, &params, theta);
            let estimate = TailEstimate::from_samples(&samples, theta, x, stat.is_lower_tail(), cfg.alpha)?;
            Ok(TailVerdict::new(estimate, bound))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Verification {
        theorem: tag,
        kind: e.kind(),
        statistic: stat,
        params,
        provenance,
        tamper,
        seed: cfg.seed,
        trials: cfg.trials,
        alpha: cfg.alpha,
        verdicts,
    })
}
