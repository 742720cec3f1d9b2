//! Seedable random tensor ensembles that satisfy the hypotheses of the tail
//! theorems, and exact computation of the statistics the bounds consume.

pub mod random;
mod rng;
mod samplers;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bounds::{hadamard_series_params, rectangular_series_params, BoundParams};
use crate::error::{Error, Result};
use crate::spectral::{eigenvalues_matrix, PD_FLOOR_REL};
use crate::tensor::{CMatrix, DenseTensor, HermitianTensor, Shape};

pub use rng::{purpose, RngState, StreamFamily};
pub use samplers::{
    check_subexp_moments, mcdiarmid_instance, sample_azuma_sequence, sample_centered_bounded, sample_hadamard_gaussian,
    sample_psd_bounded, sample_series, sample_subexponential, subexp_moment, SUBEXP_CAP,
};

use samplers::{
    adaptive_scale, lambda_max_matrix, psd_summand, rademacher, subexp_moments_ok, subexp_scale, weighted_sum,
};

/// Draws used to estimate `E𝒳` when the profile has no closed-form mean.
pub const MEAN_ESTIMATE_SAMPLES: usize = 20_000;

/// Relative slack for the per-draw hypothesis checks.
pub const CERTIFY_REL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    GaussianSeries,
    RademacherSeries,
    HadamardGaussian,
    PsdBounded,
    CenteredBounded,
    Subexponential,
    AzumaMartingale,
    McdiarmidFunction,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 8] = [
        EnsembleKind::GaussianSeries,
        EnsembleKind::RademacherSeries,
        EnsembleKind::HadamardGaussian,
        EnsembleKind::PsdBounded,
        EnsembleKind::CenteredBounded,
        EnsembleKind::Subexponential,
        EnsembleKind::AzumaMartingale,
        EnsembleKind::McdiarmidFunction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::GaussianSeries => "gaussian_series",
            EnsembleKind::RademacherSeries => "rademacher_series",
            EnsembleKind::HadamardGaussian => "hadamard_gaussian",
            EnsembleKind::PsdBounded => "psd_bounded",
            EnsembleKind::CenteredBounded => "centered_bounded",
            EnsembleKind::Subexponential => "subexponential",
            EnsembleKind::AzumaMartingale => "azuma_martingale",
            EnsembleKind::McdiarmidFunction => "mcdiarmid_function",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnsembleKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown ensemble kind `{s}`")))
    }
}

/// Eigenvalue law of a bounded PSD summand.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Profile {
    /// Haar eigenbasis, eigenvalues i.i.d. uniform on `[0, T]`.
    #[default]
    Uniform,
    /// Haar eigenbasis, eigenvalues `T · Beta(a, b)`.
    Beta { a: f64, b: f64 },
    /// Eigenbasis from the QR of `concentration·I + G`, eigenvalues sorted
    /// descending. The mean is not isotropic and has to be estimated.
    Aligned { concentration: f64 },
}

impl Profile {
    /// Closed-form `E λ` of one eigenvalue divided by `T`, when the profile is
    /// isotropic.
    pub fn isotropic_mean(&self) -> Option<f64> {
        match self {
            Profile::Uniform => Some(0.5),
            Profile::Beta { a, b } => Some(a / (a + b)),
            Profile::Aligned { .. } => None,
        }
    }
}

fn default_t() -> f64 {
    1.0
}

/// Description of one random tensor generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    /// Fixed coefficients `𝒜ᵢ`, or the single mask for `HadamardGaussian`.
    #[serde(default)]
    pub coefficients: Vec<DenseTensor>,
    #[serde(rename = "T", default = "default_t")]
    pub t_bound: f64,
    /// Summand count for `PsdBounded`; the other kinds use one summand per
    /// coefficient.
    #[serde(default)]
    pub n: usize,
    /// Square mode sizes for `PsdBounded`.
    #[serde(default)]
    pub dims: Vec<usize>,
    #[serde(default)]
    pub profile: Profile,
    #[serde(default, rename = "adaptivity")]
    pub adaptive: bool,
    /// Overrides the run seed for this ensemble.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl EnsembleSpec {
    fn base(kind: EnsembleKind, coefficients: Vec<DenseTensor>) -> Self {
        Self {
            kind,
            coefficients,
            t_bound: 1.0,
            n: 0,
            dims: Vec::new(),
            profile: Profile::Uniform,
            adaptive: false,
            seed: None,
        }
    }

    /// Gaussian or Rademacher series `Σ αᵢ𝒜ᵢ`.
    pub fn series(kind: EnsembleKind, coefficients: Vec<DenseTensor>) -> Self {
        Self::base(kind, coefficients)
    }

    pub fn hadamard(mask: DenseTensor) -> Self {
        Self::base(EnsembleKind::HadamardGaussian, vec![mask])
    }

    pub fn psd_bounded(dims: &[usize], t_bound: f64, n: usize, profile: Profile) -> Self {
        Self {
            t_bound,
            n,
            dims: dims.to_vec(),
            profile,
            ..Self::base(EnsembleKind::PsdBounded, Vec::new())
        }
    }

    pub fn centered_bounded(coefficients: Vec<DenseTensor>, t_bound: f64) -> Self {
        Self {
            t_bound,
            ..Self::base(EnsembleKind::CenteredBounded, coefficients)
        }
    }

    pub fn subexponential(coefficients: Vec<DenseTensor>, t_bound: f64) -> Self {
        Self {
            t_bound,
            ..Self::base(EnsembleKind::Subexponential, coefficients)
        }
    }

    pub fn azuma(coefficients: Vec<DenseTensor>, adaptive: bool) -> Self {
        Self {
            adaptive,
            ..Self::base(EnsembleKind::AzumaMartingale, coefficients)
        }
    }

    pub fn mcdiarmid(coefficients: Vec<DenseTensor>) -> Self {
        Self::base(EnsembleKind::McdiarmidFunction, coefficients)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Validates the spec and precomputes the unfolded coefficients.
    pub fn prepare(&self) -> Result<PreparedEnsemble> {
        PreparedEnsemble::new(self.clone())
    }
}

/// Where the `μ` statistics came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Estimated { samples: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub params: BoundParams,
    pub provenance: Provenance,
}

/// Exact (or, for non-isotropic PSD profiles, estimated) bound parameters
/// for `spec`.
pub fn compute_params(spec: &EnsembleSpec) -> Result<EnsembleParams> {
    spec.prepare()?.params()
}

/// A validated ensemble ready for sampling.
#[derive(Clone, Debug)]
pub struct PreparedEnsemble {
    spec: EnsembleSpec,
    coeffs: Vec<CMatrix>,
    /// Square mode sizes of the Hermitian output, empty for rectangular draws.
    dims: Vec<usize>,
    shape: Shape,
    hermitian: bool,
}

fn as_hermitian(t: &DenseTensor) -> Option<HermitianTensor> {
    HermitianTensor::new(t.clone()).ok()
}

fn equal_mode_counts(shape: &Shape) -> Result<()> {
    if shape.row_dims().len() != shape.col_dims().len() {
        return Err(Error::InvalidShape(format!(
            "{shape} needs equal row and column mode counts"
        )));
    }
    Ok(())
}

impl PreparedEnsemble {
    fn new(spec: EnsembleSpec) -> Result<Self> {
        use EnsembleKind::*;
        if !spec.t_bound.is_finite() || spec.t_bound <= 0.0 {
            return Err(Error::Config(format!("T = {} must be positive", spec.t_bound)));
        }
        if spec.kind == PsdBounded {
            if !spec.coefficients.is_empty() {
                return Err(Error::Config("psd_bounded takes dims, not coefficients".into()));
            }
            if spec.n == 0 {
                return Err(Error::Config("psd_bounded needs n >= 1".into()));
            }
            match spec.profile {
                Profile::Beta { a, b } if !(a > 0.0 && b > 0.0) => {
                    return Err(Error::Config(format!("beta profile needs a, b > 0, got ({a}, {b})")));
                }
                Profile::Aligned { concentration } if !(concentration >= 0.0 && concentration.is_finite()) => {
                    return Err(Error::Config(format!("concentration {concentration} must be >= 0")));
                }
                _ => {}
            }
            let shape = Shape::square(&spec.dims)?;
            return Ok(Self {
                dims: spec.dims.clone(),
                spec,
                coeffs: Vec::new(),
                shape,
                hermitian: true,
            });
        }

        let first = spec
            .coefficients
            .first()
            .ok_or_else(|| Error::Config(format!("{} needs at least one coefficient", spec.kind)))?;
        let shape = first.shape().clone();
        for a in &spec.coefficients {
            if a.shape() != &shape {
                return Err(Error::ShapeMismatch {
                    context: "coefficients",
                    left: shape.to_string(),
                    right: a.shape().to_string(),
                });
            }
        }
        if spec.kind == HadamardGaussian {
            if spec.coefficients.len() != 1 {
                return Err(Error::Config("hadamard_gaussian takes exactly one mask".into()));
            }
            equal_mode_counts(&shape)?;
            return Ok(Self {
                coeffs: vec![first.unfold()],
                spec,
                dims: Vec::new(),
                shape,
                hermitian: false,
            });
        }

        let hermitian: Option<Vec<HermitianTensor>> = spec.coefficients.iter().map(as_hermitian).collect();
        let hermitian = match (hermitian, spec.kind) {
            (Some(h), _) => h,
            (None, GaussianSeries | RademacherSeries) => {
                equal_mode_counts(&shape)?;
                let coeffs = spec.coefficients.iter().map(DenseTensor::unfold).collect();
                return Ok(Self {
                    spec,
                    coeffs,
                    dims: Vec::new(),
                    shape,
                    hermitian: false,
                });
            }
            (None, kind) => {
                return Err(Error::Config(format!("{kind} needs Hermitian coefficients")));
            }
        };
        if matches!(spec.kind, CenteredBounded | Subexponential) {
            for a in &hermitian {
                let norm = crate::spectral::spectral_norm(a);
                if norm > spec.t_bound * (1.0 + 1e-12) {
                    return Err(Error::Hypothesis(format!(
                        "coefficient norm {norm} exceeds T = {}",
                        spec.t_bound
                    )));
                }
            }
        }
        if spec.kind == Subexponential {
            subexp_moments_ok()?;
        }
        let dims = hermitian[0].dims().to_vec();
        let coeffs = hermitian.iter().map(|a| a.unfold()).collect();
        Ok(Self {
            spec,
            coeffs,
            dims,
            shape,
            hermitian: true,
        })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn kind(&self) -> EnsembleKind {
        self.spec.kind
    }

    /// Shape of one draw of the sum.
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Whether draws are Hermitian (square) rather than rectangular.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Square mode sizes of Hermitian draws.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn summand_count(&self) -> usize {
        match self.spec.kind {
            EnsembleKind::PsdBounded => self.spec.n,
            EnsembleKind::HadamardGaussian => self.shape.len(),
            _ => self.coeffs.len(),
        }
    }

    /// Draws one realization of the sum, recording the summands when asked.
    pub(crate) fn draw_with<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        mut record: Option<&mut Vec<CMatrix>>,
    ) -> Result<CMatrix> {
        use EnsembleKind::*;
        let mut push = |m: &CMatrix| {
            if let Some(out) = record.as_deref_mut() {
                out.push(m.clone());
            }
        };
        let one = |w: f64| Complex64::new(w, 0.0);
        let sum = match self.spec.kind {
            GaussianSeries | RademacherSeries | CenteredBounded | Subexponential | McdiarmidFunction => {
                let (r, c) = self.coeffs[0].shape();
                let mut sum = CMatrix::zeros(r, c);
                for a in &self.coeffs {
                    let w = match self.spec.kind {
                        GaussianSeries => rng.sample(StandardNormal),
                        Subexponential => {
                            let s = subexp_scale(rng, SUBEXP_CAP);
                            s * rademacher(rng)
                        }
                        McdiarmidFunction => 0.5 * rademacher(rng),
                        _ => rademacher(rng),
                    };
                    let x = a * one(w);
                    push(&x);
                    sum += x;
                }
                sum
            }
            HadamardGaussian => {
                let mask = &self.coeffs[0];
                let (r, c) = mask.shape();
                let mut out = CMatrix::zeros(r, c);
                for i in 0..r {
                    for j in 0..c {
                        let g: f64 = rng.sample(StandardNormal);
                        out[(i, j)] = mask[(i, j)] * g;
                    }
                }
                push(&out);
                out
            }
            PsdBounded => {
                let size = self.shape.row_size();
                let mut sum = CMatrix::zeros(size, size);
                for _ in 0..self.spec.n {
                    let x = psd_summand(size, self.spec.t_bound, &self.spec.profile, rng)?;
                    push(&x);
                    sum += x;
                }
                sum
            }
            AzumaMartingale => {
                let size = self.shape.row_size();
                let mut sum = CMatrix::zeros(size, size);
                for a in &self.coeffs {
                    let s = if self.spec.adaptive {
                        adaptive_scale(lambda_max_matrix(&sum))
                    } else {
                        1.0
                    };
                    let x = a * one(s * rademacher(rng));
                    push(&x);
                    sum += x;
                }
                sum
            }
        };
        Ok(if self.hermitian { symmetrize(&sum) } else { sum })
    }

    /// The sum for one stream.
    pub fn sample(&self, state: RngState) -> Result<DenseTensor> {
        let m = self.draw_with(&mut state.rng(), None)?;
        DenseTensor::refold(&m, self.shape.clone())
    }

    /// The individual summands for one stream, in order.
    pub fn sample_summands(&self, state: RngState) -> Result<Vec<DenseTensor>> {
        let mut parts = Vec::new();
        self.draw_with(&mut state.rng(), Some(&mut parts))?;
        parts
            .iter()
            .map(|m| DenseTensor::refold(m, self.shape.clone()))
            .collect()
    }

    /// Re-draws the summands of one stream and checks the theorem hypothesis
    /// on each of them.
    pub fn certify(&self, state: RngState) -> Result<()> {
        use EnsembleKind::*;
        let mut parts = Vec::new();
        self.draw_with(&mut state.rng(), Some(&mut parts))?;
        let t = self.spec.t_bound;
        let slack = CERTIFY_REL_TOL * t.max(1.0);
        for (i, x) in parts.iter().enumerate() {
            if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::Hypothesis(format!("summand {i} has non-finite entries")));
            }
            match self.spec.kind {
                PsdBounded => {
                    let ev = eigenvalues_matrix(x);
                    let (hi, lo) = (ev[0], ev[ev.len() - 1]);
                    if lo < -slack || hi > t + slack {
                        return Err(Error::Hypothesis(format!(
                            "summand {i} spectrum [{lo}, {hi}] leaves [0, {t}]"
                        )));
                    }
                }
                CenteredBounded => {
                    let hi = eigenvalues_matrix(x)[0];
                    if hi > t + slack {
                        return Err(Error::Hypothesis(format!("summand {i} has lambda_max {hi} > T = {t}")));
                    }
                    dominated(i, x, &self.coeffs[i], 1.0)?;
                }
                Subexponential => {
                    let ratio = x.norm() / self.coeffs[i].norm().max(f64::MIN_POSITIVE);
                    if ratio > SUBEXP_CAP * (1.0 + 1e-12) {
                        return Err(Error::Hypothesis(format!("summand {i} scale {ratio} exceeds the cap")));
                    }
                }
                AzumaMartingale => dominated(i, x, &self.coeffs[i], 1.0)?,
                // (F(..xᵢ..) − F(..xᵢ'..))² = (xᵢ − xᵢ')²𝒜ᵢ² with xᵢ' = −xᵢ
                McdiarmidFunction => dominated(i, &(x * Complex64::new(2.0, 0.0)), &self.coeffs[i], 1.0)?,
                GaussianSeries | RademacherSeries | HadamardGaussian => {}
            }
        }
        if self.spec.kind == Subexponential {
            subexp_moments_ok()?;
        }
        Ok(())
    }

    pub fn params(&self) -> Result<EnsembleParams> {
        use EnsembleKind::*;
        let n = self.summand_count();
        let t = self.spec.t_bound;
        match self.spec.kind {
            HadamardGaussian => Ok(EnsembleParams {
                params: hadamard_series_params(&self.spec.coefficients[0])?.with_t(t),
                provenance: Provenance::Exact,
            }),
            GaussianSeries | RademacherSeries if !self.hermitian => Ok(EnsembleParams {
                params: rectangular_series_params(&self.spec.coefficients)?.with_t(t),
                provenance: Provenance::Exact,
            }),
            PsdBounded => {
                let (mu_min, mu_max, provenance) = match self.spec.profile.isotropic_mean() {
                    Some(m) => (n as f64 * t * m, n as f64 * t * m, Provenance::Exact),
                    None => {
                        let mean = self.estimate_summand_mean()?;
                        let ev = eigenvalues_matrix(&mean);
                        let k = n as f64;
                        (
                            k * ev[ev.len() - 1],
                            k * ev[0],
                            Provenance::Estimated {
                                samples: MEAN_ESTIMATE_SAMPLES,
                            },
                        )
                    }
                };
                let scale = n as f64 * t;
                let params = BoundParams::from_dims(&self.dims)
                    .with_t(t)
                    .with_n(n)
                    .with_mu(mu_min, mu_max)
                    .with_mu_bar(mu_min / scale, mu_max / scale);
                Ok(EnsembleParams { params, provenance })
            }
            _ => {
                let squares: Vec<CMatrix> = self.coeffs.iter().map(|a| a * a).collect();
                let total = symmetrize(&weighted_sum(&squares, std::iter::repeat(1.0)));
                let sigma_sq = eigenvalues_matrix(&total)[0].max(0.0);
                Ok(EnsembleParams {
                    params: BoundParams::from_dims(&self.dims)
                        .with_sigma_sq(sigma_sq)
                        .with_t(t)
                        .with_n(n),
                    provenance: Provenance::Exact,
                })
            }
        }
    }

    fn estimate_summand_mean(&self) -> Result<CMatrix> {
        let family = StreamFamily::new(self.spec.seed.unwrap_or(0), purpose::MEAN_ESTIMATE);
        let size = self.shape.row_size();
        let mut sum = CMatrix::zeros(size, size);
        for k in 0..MEAN_ESTIMATE_SAMPLES {
            sum += psd_summand(size, self.spec.t_bound, &self.spec.profile, &mut family.rng(k as u64))?;
        }
        Ok(symmetrize(&(sum / Complex64::new(MEAN_ESTIMATE_SAMPLES as f64, 0.0))))
    }
}

fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

// Checks c²·x² ⪯ a² up to a relative floor.
fn dominated(i: usize, x: &CMatrix, a: &CMatrix, c: f64) -> Result<()> {
    let a2 = a * a;
    let diff = symmetrize(&(&a2 - x * x * Complex64::new(c * c, 0.0)));
    let lo = *eigenvalues_matrix(&diff).last().expect("non-empty");
    let floor = -(CERTIFY_REL_TOL + PD_FLOOR_REL) * a2.norm().max(1.0);
    if lo < floor {
        return Err(Error::Hypothesis(format!(
            "summand {i}: X^2 is not dominated by A^2 (lambda_min of difference {lo:e})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> DenseTensor {
        HermitianTensor::from_diagonal(&[values.len()], values)
            .unwrap()
            .into_tensor()
    }

    #[test]
    fn kind_names_round_trip() {
        for k in EnsembleKind::ALL {
            assert_eq!(k.as_str().parse::<EnsembleKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{k}\""));
        }
    }

    #[test]
    fn psd_uniform_mu() {
        let spec = EnsembleSpec::psd_bounded(&[2, 2], 1.0, 8, Profile::Uniform);
        let p = compute_params(&spec).unwrap();
        assert_eq!(p.params.mu_max, 4.0);
        assert_eq!(p.params.mu_min, 4.0);
        assert_eq!(p.params.mu_bar_max, 0.5);
        assert_eq!(p.params.dim_product, 4);
        assert_eq!(p.provenance, Provenance::Exact);
    }

    #[test]
    fn series_sigma_sq() {
        let spec = EnsembleSpec::series(EnsembleKind::GaussianSeries, vec![diag(&[1.0, 0.0]), diag(&[1.0, 2.0])]);
        let p = compute_params(&spec).unwrap().params;
        assert!((p.sigma_sq - 4.0).abs() < 1e-12);
        assert_eq!(p.n, 2);
    }

    #[test]
    fn sample_matches_summands() {
        let spec = EnsembleSpec::azuma(vec![diag(&[1.0, -1.0]), diag(&[0.5, 2.0]), diag(&[1.0, 1.0])], true);
        let e = spec.prepare().unwrap();
        let state = RngState::new(11, 5);
        let total = e.sample(state).unwrap();
        let parts = e.sample_summands(state).unwrap();
        let mut acc = DenseTensor::zeros(e.shape().clone());
        for p in &parts {
            acc = acc.add(p).unwrap();
        }
        assert!(acc.sub(&total).unwrap().max_abs() < 1e-14);
        e.certify(state).unwrap();
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(EnsembleSpec::series(EnsembleKind::GaussianSeries, vec![])
            .prepare()
            .is_err());
        assert!(EnsembleSpec::centered_bounded(vec![diag(&[2.0, 0.0])], 1.0)
            .prepare()
            .is_err());
        assert!(EnsembleSpec::psd_bounded(&[2], 1.0, 0, Profile::Uniform)
            .prepare()
            .is_err());
        let rect = DenseTensor::ones(Shape::new(vec![2], vec![3]).unwrap());
        assert!(EnsembleSpec::azuma(vec![rect], false).prepare().is_err());
    }
}
