//! Monte Carlo estimation of tail probabilities and expectations, with exact
//! binomial confidence intervals and bound-versus-empirical verdicts.
//!
//! Sample `k` of a run always comes from stream `k` of the run's
//! [`StreamFamily`], and samples are reduced in index order, so results do
//! not depend on the number of worker threads.

mod ci;
mod verify;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundValue;
use crate::ensembles::{purpose, PreparedEnsemble, StreamFamily};
use crate::error::{Error, Result};
use crate::spectral::{eigenvalues_matrix, spectral_norm_matrix};
use crate::tensor::{CMatrix, HermitianTensor};

pub use ci::{clopper_pearson_upper, DEFAULT_ALPHA};
pub use verify::{
    compatible_kinds, invert_threshold, statistic_for, theorem_params, threshold, verify, Tamper, ThetaGrid,
    Verification, DEFAULT_GRID_POINTS, PILOT_TRIALS,
};

/// Samples per parallel work unit.
pub const CHUNK: usize = 512;

/// Scalar statistic of one draw of the sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    LambdaMaxSum,
    SpectralNormSum,
    LambdaMinSum,
    /// `λ_max(F − EF)`; the McDiarmid ensemble is centered, so this is the
    /// largest eigenvalue of the draw.
    LambdaMaxCenteredF,
}

impl Statistic {
    /// Whether hits are counted as `statistic ≤ threshold`.
    pub fn is_lower_tail(self) -> bool {
        self == Statistic::LambdaMinSum
    }

    fn needs_hermitian(self) -> bool {
        self != Statistic::SpectralNormSum
    }
}

/// Statistic for expectation estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Moment {
    Norm,
    NormSq,
    LambdaMax,
}

pub(crate) fn evaluate_statistic(m: &CMatrix, hermitian: bool, stat: Statistic) -> f64 {
    if !hermitian {
        return spectral_norm_matrix(m);
    }
    let ev = eigenvalues_matrix(m);
    let (hi, lo) = (ev[0], ev[ev.len() - 1]);
    match stat {
        Statistic::LambdaMaxSum | Statistic::LambdaMaxCenteredF => hi,
        Statistic::LambdaMinSum => lo,
        Statistic::SpectralNormSum => hi.abs().max(lo.abs()),
    }
}

fn check_statistic(e: &PreparedEnsemble, stat: Statistic) -> Result<()> {
    if stat.needs_hermitian() && !e.is_hermitian() {
        return Err(Error::Incompatible {
            theorem: format!("{stat:?}"),
            kind: format!("{} with rectangular coefficients", e.kind()),
        });
    }
    Ok(())
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Runs `f` on the draw of every sample index in `0..trials` and returns the
/// results in index order.
pub(crate) fn map_draws<T: Send>(
    e: &PreparedEnsemble,
    family: &StreamFamily,
    trials: usize,
    workers: Option<usize>,
    f: impl Fn(&CMatrix) -> T + Sync,
) -> Result<Vec<T>> {
    let chunks = trials.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<T>> = pool(workers)?.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let end = ((c + 1) * CHUNK).min(trials);
                (c * CHUNK..end)
                    .map(|k| e.draw_with(&mut family.rng(k as u64), None).map(|m| f(&m)))
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(per_chunk.into_iter().flatten().collect())
}

/// Parallel run settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; `None` uses every core.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Leading draws re-checked against the theorem hypothesis.
    #[serde(default = "default_certify")]
    pub certify_draws: usize,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_certify() -> usize {
    64
}

impl RunConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: None,
            alpha: DEFAULT_ALPHA,
            certify_draws: default_certify(),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

/// `trials` values of `stat` from the main stream family of `seed`.
pub fn sample_statistic(
    e: &PreparedEnsemble,
    stat: Statistic,
    trials: usize,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<f64>> {
    sample_statistic_for(e, stat, trials, seed, purpose::MAIN, workers)
}

pub(crate) fn sample_statistic_for(
    e: &PreparedEnsemble,
    stat: Statistic,
    trials: usize,
    seed: u64,
    purpose_id: u64,
    workers: Option<usize>,
) -> Result<Vec<f64>> {
    check_statistic(e, stat)?;
    let family = StreamFamily::new(seed, purpose_id);
    let hermitian = e.is_hermitian();
    map_draws(e, &family, trials, workers, |m| evaluate_statistic(m, hermitian, stat))
}

/// Empirical tail probability with its one-sided upper confidence limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub theta: f64,
    /// Threshold actually applied to the statistic.
    pub threshold: f64,
    pub hits: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci_upper: f64,
    pub alpha: f64,
}

impl TailEstimate {
    pub fn from_counts(theta: f64, threshold: f64, hits: u64, trials: u64, alpha: f64) -> Self {
        Self {
            theta,
            threshold,
            hits,
            trials,
            p_hat: hits as f64 / trials as f64,
            ci_upper: clopper_pearson_upper(hits, trials, alpha),
            alpha,
        }
    }

    /// Counts `x ≥ threshold` (or `x ≤ threshold` when `lower`) in `samples`.
    pub fn from_samples(samples: &[f64], theta: f64, threshold: f64, lower: bool, alpha: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("need at least one trial".into()));
        }
        let hits = samples
            .iter()
            .filter(|&&x| if lower { x <= threshold } else { x >= threshold })
            .count();
        Ok(Self::from_counts(
            theta,
            threshold,
            hits as u64,
            samples.len() as u64,
            alpha,
        ))
    }
}

/// `P(stat ≥ theta)` (or `≤` for `LambdaMinSum`) from `trials` fresh draws.
pub fn estimate_tail(
    e: &PreparedEnsemble,
    stat: Statistic,
    theta: f64,
    trials: usize,
    seed: u64,
) -> Result<TailEstimate> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let samples = sample_statistic(e, stat, trials, seed, None)?;
    TailEstimate::from_samples(&samples, theta, theta, stat.is_lower_tail(), DEFAULT_ALPHA)
}

/// One empirical tail estimate checked against an analytic bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailVerdict {
    pub estimate: TailEstimate,
    pub bound: BoundValue,
    pub pass: bool,
    /// `bound / p_hat`, infinite when no hits were seen.
    pub tightness: f64,
}

impl TailVerdict {
    pub fn new(estimate: TailEstimate, bound: BoundValue) -> Self {
        let pass = bound.value >= 1.0 || estimate.ci_upper <= bound.value.min(1.0);
        let tightness = if estimate.p_hat > 0.0 {
            bound.value / estimate.p_hat
        } else {
            f64::INFINITY
        };
        Self {
            estimate,
            bound,
            pass,
            tightness,
        }
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample mean and standard error of a moment statistic.
pub fn estimate_expectation(e: &PreparedEnsemble, moment: Moment, trials: usize, seed: u64) -> Result<(f64, f64)> {
    if trials < 2 {
        return Err(Error::Domain("need at least two trials".into()));
    }
    let stat = match moment {
        Moment::LambdaMax => Statistic::LambdaMaxSum,
        Moment::Norm | Moment::NormSq => Statistic::SpectralNormSum,
    };
    let mut values = sample_statistic(e, stat, trials, seed, None)?;
    if moment == Moment::NormSq {
        values.iter_mut().for_each(|v| *v *= *v);
    }
    Ok(mean_and_se(&values))
}

/// `(ψ₁, ψ₂) = (mean, E𝒳² − (E𝒳)²)` of the draws.
pub fn empirical_cumulants(
    e: &PreparedEnsemble,
    trials: usize,
    seed: u64,
) -> Result<(HermitianTensor, HermitianTensor)> {
    if trials < 2 {
        return Err(Error::Domain("need at least two trials".into()));
    }
    check_statistic(e, Statistic::LambdaMaxSum)?;
    let family = StreamFamily::new(seed, purpose::MOMENTS);
    let pairs = map_draws(e, &family, trials, None, |m| (m.clone(), m * m))?;
    let size = e.shape().row_size();
    let (mut first, mut second) = (CMatrix::zeros(size, size), CMatrix::zeros(size, size));
    for (m, m2) in &pairs {
        first += m;
        second += m2;
    }
    let inv = Complex64::new(1.0 / trials as f64, 0.0);
    let psi1 = first * inv;
    let psi2 = second * inv - &psi1 * &psi1;
    Ok((
        HermitianTensor::from_matrix_symmetrized(&psi1, e.dims())?,
        HermitianTensor::from_matrix_symmetrized(&psi2, e.dims())?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{BoundParams, TheoremTag};
    use crate::ensembles::{EnsembleKind, EnsembleSpec};
    use crate::tensor::DenseTensor;

    fn scalar_gaussian() -> PreparedEnsemble {
        let one = DenseTensor::identity(&[1]).unwrap();
        EnsembleSpec::series(EnsembleKind::GaussianSeries, vec![one])
            .prepare()
            .unwrap()
    }

    #[test]
    fn worker_count_does_not_change_samples() {
        let e = scalar_gaussian();
        let a = sample_statistic(&e, Statistic::LambdaMaxSum, 3000, 9, Some(1)).unwrap();
        let b = sample_statistic(&e, Statistic::LambdaMaxSum, 3000, 9, Some(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn theta_below_support_gives_one() {
        let e = scalar_gaussian();
        let est = estimate_tail(&e, Statistic::SpectralNormSum, -1.0, 200, 1).unwrap();
        assert_eq!(est.p_hat, 1.0);
        assert_eq!(est.ci_upper, 1.0);
    }

    #[test]
    fn verdict_rules() {
        let est = TailEstimate::from_counts(1.0, 1.0, 0, 1000, 1e-3);
        let bound = |value| BoundValue {
            value,
            theorem: TheoremTag::Gaussian,
            params: BoundParams::new(1),
            theta: 1.0,
        };
        assert!(TailVerdict::new(est.clone(), bound(0.5)).pass);
        assert!(!TailVerdict::new(est.clone(), bound(1e-4)).pass);
        assert!(TailVerdict::new(est.clone(), bound(3.0)).pass);
        assert!(TailVerdict::new(est, bound(0.5)).tightness.is_infinite());
    }
}
