use super::{bound_value, check_theta, BoundParams, BoundValue, TheoremTag};
use crate::error::{Error, Result};
use crate::spectral::spectral_norm_matrix;
use crate::tensor::{CMatrix, DenseTensor};

/// `𝕀 e^{−θ²/(2σ²)}`, doubled for the two-sided (norm) version.
pub fn gaussian_series_bound(p: &BoundParams, theta: f64, two_sided: bool) -> Result<BoundValue> {
    p.validate()?;
    check_theta(theta)?;
    let tag = if two_sided {
        TheoremTag::GaussianNorm
    } else {
        TheoremTag::Gaussian
    };
    let factor = if two_sided { 2.0 } else { 1.0 };
    let value = if theta == 0.0 {
        factor * p.dim()
    } else if p.sigma_sq == 0.0 {
        return Err(Error::Degenerate("sigma_sq = 0 with theta > 0".into()));
    } else {
        factor * p.dim() * (-theta * theta / (2.0 * p.sigma_sq)).exp()
    };
    Ok(bound_value(tag, p, theta, value))
}

/// Parameters for a Gaussian or Rademacher series with rectangular
/// coefficients: `σ² = max(‖Σ AᵢAᵢᴴ‖, ‖Σ AᵢᴴAᵢ‖)` and `𝕀 = ∏(I_m + J_m)`.
pub fn rectangular_series_params(coeffs: &[DenseTensor]) -> Result<BoundParams> {
    let first = coeffs
        .first()
        .ok_or_else(|| Error::Domain("empty coefficient list".into()))?;
    let shape = first.shape();
    if shape.row_dims().len() != shape.col_dims().len() {
        return Err(Error::InvalidShape(format!(
            "{shape} needs equal row and column mode counts"
        )));
    }
    let mut left = CMatrix::zeros(shape.row_size(), shape.row_size());
    let mut right = CMatrix::zeros(shape.col_size(), shape.col_size());
    for a in coeffs {
        if a.shape() != shape {
            return Err(Error::ShapeMismatch {
                context: "rectangular_series_params",
                left: shape.to_string(),
                right: a.shape().to_string(),
            });
        }
        let m = a.unfold();
        let mh = m.adjoint();
        left += &m * &mh;
        right += &mh * &m;
    }
    let sigma_sq = spectral_norm_matrix(&left).max(spectral_norm_matrix(&right));
    let dim_product = shape
        .row_dims()
        .iter()
        .zip(shape.col_dims())
        .map(|(i, j)| (i + j) as u64)
        .product();
    Ok(BoundParams::new(dim_product)
        .with_sigma_sq(sigma_sq)
        .with_n(coeffs.len()))
}

/// Largest squared Frobenius norm over all row slices and all column slices
/// of the unfolding of `a`.
pub fn nonuniform_gaussian_sigma(a: &DenseTensor) -> f64 {
    let m = a.unfold();
    let rows = m.row_iter().map(|r| r.norm_squared()).fold(0.0, f64::max);
    let cols = m.column_iter().map(|c| c.norm_squared()).fold(0.0, f64::max);
    rows.max(cols)
}

/// Parameters for the Hadamard-masked Gaussian tensor `𝒜 ⊙ 𝒢`.
pub fn hadamard_series_params(mask: &DenseTensor) -> Result<BoundParams> {
    let shape = mask.shape();
    if shape.row_dims().len() != shape.col_dims().len() {
        return Err(Error::InvalidShape(format!(
            "{shape} needs equal row and column mode counts"
        )));
    }
    let dim_product = shape
        .row_dims()
        .iter()
        .zip(shape.col_dims())
        .map(|(i, j)| (i + j) as u64)
        .product();
    Ok(BoundParams::new(dim_product)
        .with_sigma_sq(nonuniform_gaussian_sigma(mask))
        .with_n(shape.len()))
}

/// `(σ², 2σ² log(2e𝕀))`, bracketing `E‖𝒳‖²` for a Gaussian series.
pub fn expectation_norm_sandwich(p: &BoundParams) -> (f64, f64) {
    if p.sigma_sq == 0.0 {
        return (0.0, 0.0);
    }
    let upper = 2.0 * p.sigma_sq * (2.0 * std::f64::consts::E * p.dim()).ln();
    (p.sigma_sq, upper)
}

/// `𝕀 e^{−θ²/(8σ²)}`, shared by the Azuma, McDiarmid and Hoeffding forms.
pub fn azuma_mcdiarmid_bound(p: &BoundParams, theta: f64) -> Result<BoundValue> {
    p.validate()?;
    check_theta(theta)?;
    let value = if theta == 0.0 {
        p.dim()
    } else if p.sigma_sq == 0.0 {
        return Err(Error::Degenerate("sigma_sq = 0 with theta > 0".into()));
    } else {
        p.dim() * (-theta * theta / (8.0 * p.sigma_sq)).exp()
    };
    Ok(bound_value(TheoremTag::Azuma, p, theta, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Shape;

    #[test]
    fn gaussian_examples() {
        let p = BoundParams::new(4).with_sigma_sq(1.0);
        assert_eq!(gaussian_series_bound(&p, 0.0, false).unwrap().value, 4.0);
        let one = gaussian_series_bound(&p, 2.0, false).unwrap().value;
        assert!((one - 0.541_341_132_946_450_5).abs() < 1e-15);
        assert_eq!(gaussian_series_bound(&p, 2.0, true).unwrap().value, 2.0 * one);
        let degenerate = BoundParams::new(4);
        assert!(matches!(
            gaussian_series_bound(&degenerate, 1.0, false),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn nonuniform_sigma_all_ones() {
        let a = DenseTensor::ones(Shape::new(vec![2], vec![3]).unwrap());
        assert_eq!(nonuniform_gaussian_sigma(&a), 3.0);
    }

    #[test]
    fn rectangular_identity() {
        let p = rectangular_series_params(&[DenseTensor::identity(&[2, 2]).unwrap()]).unwrap();
        assert!((p.sigma_sq - 1.0).abs() < 1e-12);
        assert_eq!(p.dim_product, 16);
        assert!(rectangular_series_params(&[]).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let (lo, hi) = expectation_norm_sandwich(&BoundParams::new(1).with_sigma_sq(1.0));
        assert_eq!(lo, 1.0);
        assert!((hi - 3.386_294_361_119_891).abs() < 1e-12);
        assert_eq!(expectation_norm_sandwich(&BoundParams::new(3)), (0.0, 0.0));
    }

    #[test]
    fn azuma_example() {
        let p = BoundParams::new(4).with_sigma_sq(1.0);
        let v = azuma_mcdiarmid_bound(&p, 2.0).unwrap().value;
        assert!((v - 4.0 * (-0.5f64).exp()).abs() < 1e-15);
    }
}
