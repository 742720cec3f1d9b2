//! Per-kind samplers. Each construction meets its theorem's hypothesis by
//! algebra, so a bound violation can only come from a bug elsewhere.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1, StandardNormal};

use super::random::{conjugate_by, ginibre, haar_unitary, unitary_factor};
use super::{EnsembleKind, Profile};
use crate::bounds::numeric::integrate;
use crate::error::{Error, Result};
use crate::spectral::{eigenvalues_matrix, lambda_max, spectral_norm};
use crate::tensor::{CMatrix, DenseTensor, HermitianTensor};

/// Cap on the subexponential scale variable.
pub const SUBEXP_CAP: f64 = 30.0;

pub(crate) fn rademacher<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// `s = min(E/√2, cap)` with `E ~ Exp(1)`.
pub(crate) fn subexp_scale<R: Rng + ?Sized>(rng: &mut R, cap: f64) -> f64 {
    let e: f64 = rng.sample(Exp1);
    (e * std::f64::consts::FRAC_1_SQRT_2).min(cap)
}

/// `E s^p` for `s = min(E/√2, cap)`, as `∫₀^cap p y^{p−1} e^{−√2 y} dy`.
pub fn subexp_moment(p: u32, cap: f64) -> f64 {
    let pf = p as f64;
    integrate(
        |y| pf * y.powi(p as i32 - 1) * (-std::f64::consts::SQRT_2 * y).exp(),
        0.0,
        cap,
        1e-13,
    )
}

/// Checks `E s^p ≤ p!/2` for `2 ≤ p ≤ 8`.
pub fn check_subexp_moments(cap: f64) -> Result<()> {
    let mut factorial = 1.0;
    for p in 1..=8u32 {
        factorial *= p as f64;
        if p < 2 {
            continue;
        }
        let lhs = subexp_moment(p, cap);
        let rhs = factorial / 2.0;
        if lhs > rhs {
            return Err(Error::MomentCondition { p, lhs, rhs });
        }
    }
    Ok(())
}

pub(crate) fn subexp_moments_ok() -> Result<()> {
    static CHECK: OnceLock<Result<()>> = OnceLock::new();
    CHECK.get_or_init(|| check_subexp_moments(SUBEXP_CAP)).clone()
}

fn accumulate(coeffs: &[CMatrix], weights: impl IntoIterator<Item = f64>) -> CMatrix {
    let (r, c) = coeffs[0].shape();
    let mut sum = CMatrix::zeros(r, c);
    for (a, w) in coeffs.iter().zip(weights) {
        sum += a * Complex64::new(w, 0.0);
    }
    sum
}

fn unfold_all(coeffs: &[HermitianTensor]) -> Result<Vec<CMatrix>> {
    let first = coeffs
        .first()
        .ok_or_else(|| Error::Domain("empty coefficient list".into()))?;
    coeffs
        .iter()
        .map(|a| {
            if a.dims() != first.dims() {
                return Err(Error::ShapeMismatch {
                    context: "coefficients",
                    left: first.shape().to_string(),
                    right: a.shape().to_string(),
                });
            }
            Ok(a.unfold())
        })
        .collect()
}

/// `Σ αᵢ𝒜ᵢ` with `αᵢ` standard normal (`GaussianSeries`) or Rademacher
/// (`RademacherSeries`).
pub fn sample_series<R: Rng + ?Sized>(
    kind: EnsembleKind,
    coeffs: &[HermitianTensor],
    rng: &mut R,
) -> Result<HermitianTensor> {
    let mats = unfold_all(coeffs)?;
    let weights: Vec<f64> = match kind {
        EnsembleKind::GaussianSeries => (0..mats.len()).map(|_| rng.sample(StandardNormal)).collect(),
        EnsembleKind::RademacherSeries => (0..mats.len()).map(|_| rademacher(rng)).collect(),
        other => {
            return Err(Error::Domain(format!("sample_series does not handle {other}")));
        }
    };
    HermitianTensor::from_matrix_symmetrized(&accumulate(&mats, weights), coeffs[0].dims())
}

/// `𝒢 ∘ 𝒜` with `𝒢` entrywise i.i.d. real standard normal.
pub fn sample_hadamard_gaussian<R: Rng + ?Sized>(mask: &DenseTensor, rng: &mut R) -> DenseTensor {
    let data = mask
        .data()
        .iter()
        .map(|a| a * rng.sample::<f64, _>(StandardNormal))
        .collect();
    DenseTensor::new(mask.shape().clone(), data).expect("same shape, finite entries")
}

/// Eigenvalues for one bounded PSD summand under `profile`.
pub(crate) fn profile_eigenvalues<R: Rng + ?Sized>(
    n: usize,
    t: f64,
    profile: &Profile,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut values: Vec<f64> = match profile {
        Profile::Uniform | Profile::Aligned { .. } => (0..n).map(|_| t * rng.random::<f64>()).collect(),
        Profile::Beta { a, b } => {
            let beta = Beta::new(*a, *b).map_err(|e| Error::Config(format!("beta profile: {e}")))?;
            (0..n).map(|_| t * beta.sample(rng)).collect()
        }
    };
    if matches!(profile, Profile::Aligned { .. }) {
        values.sort_by(|x, y| y.total_cmp(x));
    }
    Ok(values)
}

pub(crate) fn psd_summand<R: Rng + ?Sized>(n: usize, t: f64, profile: &Profile, rng: &mut R) -> Result<CMatrix> {
    let u = match profile {
        Profile::Aligned { concentration } => {
            let g = ginibre(n, rng);
            unitary_factor(g + CMatrix::identity(n, n) * Complex64::new(*concentration, 0.0))
        }
        _ => haar_unitary(n, rng),
    };
    let values = profile_eigenvalues(n, t, profile, rng)?;
    Ok(conjugate_by(&u, &values))
}

/// `𝒰 Λ 𝒰ᴴ` with eigenvalues in `[0, T]`, so `0 ⪯ 𝒳` and `λ_max(𝒳) ≤ T`.
pub fn sample_psd_bounded<R: Rng + ?Sized>(
    dims: &[usize],
    t: f64,
    rng: &mut R,
    profile: &Profile,
) -> Result<HermitianTensor> {
    if t <= 0.0 {
        return Err(Error::Domain(format!("T = {t} must be positive")));
    }
    let n: usize = crate::tensor::Shape::square(dims)?.row_size();
    HermitianTensor::from_matrix_symmetrized(&psd_summand(n, t, profile, rng)?, dims)
}

fn check_norm(coeff: &HermitianTensor, t: f64) -> Result<()> {
    let norm = spectral_norm(coeff);
    if norm > t * (1.0 + 1e-12) {
        return Err(Error::Hypothesis(format!("coefficient norm {norm} exceeds T = {t}")));
    }
    Ok(())
}

/// `β𝒜` with `β` Rademacher.
pub fn sample_centered_bounded<R: Rng + ?Sized>(
    coeff: &HermitianTensor,
    t: f64,
    rng: &mut R,
) -> Result<HermitianTensor> {
    check_norm(coeff, t)?;
    coeff.scale(rademacher(rng))
}

/// `sβ𝒜` with `β` Rademacher and `s = min(Exp(1)/√2, 30)`.
pub fn sample_subexponential<R: Rng + ?Sized>(coeff: &HermitianTensor, t: f64, rng: &mut R) -> Result<HermitianTensor> {
    check_norm(coeff, t)?;
    subexp_moments_ok()?;
    let s = subexp_scale(rng, SUBEXP_CAP);
    coeff.scale(s * rademacher(rng))
}

/// Martingale differences `𝒳ᵢ = sᵢβᵢ𝒜ᵢ`, with `sᵢ = (1 + tanh λ_max(Σ_{k<i} 𝒳ₖ))/2`
/// when `adaptive` and `sᵢ = 1` otherwise.
pub fn sample_azuma_sequence<R: Rng + ?Sized>(
    coeffs: &[HermitianTensor],
    rng: &mut R,
    adaptive: bool,
) -> Result<Vec<HermitianTensor>> {
    unfold_all(coeffs)?;
    let mut partial = HermitianTensor::zero(coeffs[0].dims())?;
    let mut out = Vec::with_capacity(coeffs.len());
    for a in coeffs {
        let s = if adaptive {
            adaptive_scale(lambda_max(&partial))
        } else {
            1.0
        };
        let x = a.scale(s * rademacher(rng))?;
        partial = partial.add(&x)?;
        out.push(x);
    }
    Ok(out)
}

/// `F = Σ xᵢ𝒜ᵢ` with `xᵢ` uniform on `{−½, +½}`, and its mean (zero).
pub fn mcdiarmid_instance<R: Rng + ?Sized>(
    weights: &[HermitianTensor],
    rng: &mut R,
) -> Result<(HermitianTensor, HermitianTensor)> {
    let mats = unfold_all(weights)?;
    let xs: Vec<f64> = (0..mats.len()).map(|_| 0.5 * rademacher(rng)).collect();
    let f = HermitianTensor::from_matrix_symmetrized(&accumulate(&mats, xs), weights[0].dims())?;
    Ok((f, HermitianTensor::zero(weights[0].dims())?))
}

pub(crate) fn weighted_sum(coeffs: &[CMatrix], weights: impl IntoIterator<Item = f64>) -> CMatrix {
    accumulate(coeffs, weights)
}

/// Predictable step size in `(0, 1)` driven by the running maximum eigenvalue.
pub(crate) fn adaptive_scale(lambda_max: f64) -> f64 {
    0.5 * (1.0 + lambda_max.tanh())
}

pub(crate) fn lambda_max_matrix(m: &CMatrix) -> f64 {
    eigenvalues_matrix(m)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::RngState;

    #[test]
    fn moments_hold_at_default_cap() {
        check_subexp_moments(SUBEXP_CAP).unwrap();
        // uncapped law: E s^p = p!/2^{p/2}
        assert!((subexp_moment(2, SUBEXP_CAP) - 1.0).abs() < 1e-12);
        assert!((subexp_moment(4, SUBEXP_CAP) - 6.0).abs() < 1e-10);
    }

    #[test]
    fn unscaled_exponential_fails_moment_check() {
        // E Exp(1)^2 = 2 > 1 is exactly what the √2 rescaling fixes
        let second = integrate(|y| 2.0 * y * (-y).exp(), 0.0, SUBEXP_CAP, 1e-13);
        assert!(second > 1.0);
    }

    #[test]
    fn rademacher_single_coefficient() {
        let a = HermitianTensor::from_diagonal(&[2], &[1.0, -2.0]).unwrap();
        let mut rng = RngState::new(3, 0).rng();
        for _ in 0..20 {
            let x = sample_series(EnsembleKind::RademacherSeries, std::slice::from_ref(&a), &mut rng).unwrap();
            let plus = x.sub(&a).unwrap().max_abs() == 0.0;
            let minus = x.add(&a).unwrap().max_abs() == 0.0;
            assert!(plus || minus);
        }
    }

    #[test]
    fn centered_rejects_large_coefficient() {
        let a = HermitianTensor::from_diagonal(&[2], &[3.0, 0.0]).unwrap();
        let mut rng = RngState::new(3, 0).rng();
        assert!(matches!(
            sample_centered_bounded(&a, 1.0, &mut rng),
            Err(Error::Hypothesis(_))
        ));
    }
}
