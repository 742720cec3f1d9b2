use super::{eigh_matrix, hermitian_eig, recompose_matrix, tensor_function, SpectralFn, PD_FLOOR_REL};
use crate::error::{Error, Result};
use crate::tensor::HermitianTensor;

/// Commutation test scale: `‖XY − YX‖_F ≤ 1e-9 ‖X‖_F ‖Y‖_F`.
pub const COMMUTATION_REL_TOL: f64 = 1e-9;

/// `D(A‖B) = Tr A ⋆ (log A − log B)` for positive definite `A`, `B`.
pub fn relative_entropy(a: &HermitianTensor, b: &HermitianTensor) -> Result<f64> {
    if a.dims() != b.dims() {
        return Err(Error::ShapeMismatch {
            context: "relative_entropy",
            left: a.shape().to_string(),
            right: b.shape().to_string(),
        });
    }
    let sa = hermitian_eig(a)?;
    let sb = hermitian_eig(b)?;
    for s in [&sa, &sb] {
        if !s.is_positive_definite() {
            return Err(Error::NotPositiveDefinite {
                function: "relative_entropy",
                lambda_min: s.lambda_min(),
                floor: s.pd_floor(),
            });
        }
    }
    let a_log_a: f64 = sa.eigenvalues.iter().map(|&l| l * l.ln()).sum();
    let logs: Vec<f64> = sb.eigenvalues.iter().map(|l| l.ln()).collect();
    let log_b = recompose_matrix(&sb.basis, &logs);
    let a_log_b = (a.unfold() * log_b).trace().re;
    Ok(a_log_a - a_log_b)
}

/// Perspective `h(X, Y) = f(X ⋆ Y⁻¹) ⋆ Y` for commuting `X`, `Y` with `Y`
/// invertible.
pub fn perspective_map(x: &HermitianTensor, y: &HermitianTensor, f: &SpectralFn) -> Result<HermitianTensor> {
    if x.dims() != y.dims() {
        return Err(Error::ShapeMismatch {
            context: "perspective_map",
            left: x.shape().to_string(),
            right: y.shape().to_string(),
        });
    }
    let (xm, ym) = (x.unfold(), y.unfold());
    let residual = (&xm * &ym - &ym * &xm).norm();
    let tolerance = COMMUTATION_REL_TOL * xm.norm() * ym.norm();
    if residual > tolerance {
        return Err(Error::NonCommuting { residual, tolerance });
    }
    let (values, basis) = eigh_matrix(&ym)?;
    let largest = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let smallest = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if largest == 0.0 || smallest <= PD_FLOOR_REL * largest {
        return Err(Error::Domain(format!(
            "perspective needs an invertible second argument (smallest |lambda| = {smallest:e})"
        )));
    }
    let inv: Vec<f64> = values.iter().map(|v| 1.0 / v).collect();
    let ratio = HermitianTensor::from_matrix_symmetrized(&(&xm * recompose_matrix(&basis, &inv)), x.dims())?;
    let mapped = tensor_function(&ratio, f)?;
    HermitianTensor::from_matrix_symmetrized(&(mapped.unfold() * ym), x.dims())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_of_identity_is_zero() {
        let id = HermitianTensor::identity(&[2, 3]).unwrap();
        assert!(relative_entropy(&id, &id).unwrap().abs() < 1e-15);
    }

    #[test]
    fn entropy_commuting_diagonal_case() {
        let a = HermitianTensor::identity(&[2]).unwrap().scale(2.0).unwrap();
        let b = HermitianTensor::identity(&[2]).unwrap();
        let d = relative_entropy(&a, &b).unwrap();
        assert!((d - 4.0 * 2f64.ln()).abs() < 1e-14);
        assert!((d - 2.7726).abs() < 1e-4);
    }

    #[test]
    fn entropy_rejects_singular() {
        let a = HermitianTensor::from_diagonal(&[2], &[1.0, 0.0]).unwrap();
        let b = HermitianTensor::identity(&[2]).unwrap();
        assert!(matches!(
            relative_entropy(&a, &b),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(relative_entropy(&b, &a).is_err());
    }

    #[test]
    fn perspective_with_identity_is_plain_function() {
        let x = HermitianTensor::from_diagonal(&[3], &[0.5, 1.5, 2.0]).unwrap();
        let id = HermitianTensor::identity(&[3]).unwrap();
        let h = perspective_map(&x, &id, &SpectralFn::XLogX).unwrap();
        let f = tensor_function(&x, &SpectralFn::XLogX).unwrap();
        assert!(h.sub(&f).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn perspective_zero_numerator_uses_limit() {
        let zero = HermitianTensor::zero(&[2]).unwrap();
        let y = HermitianTensor::from_diagonal(&[2], &[1.0, 3.0]).unwrap();
        let h = perspective_map(&zero, &y, &SpectralFn::XLogX).unwrap();
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn perspective_errors() {
        let x = HermitianTensor::from_diagonal(&[2], &[1.0, 2.0]).unwrap();
        let singular = HermitianTensor::from_diagonal(&[2], &[1.0, 0.0]).unwrap();
        assert!(matches!(
            perspective_map(&x, &singular, &SpectralFn::Exp),
            Err(Error::Domain(_))
        ));
        let shape = crate::tensor::Shape::square(&[2]).unwrap();
        let off = crate::tensor::DenseTensor::from_real(shape, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let off = HermitianTensor::new(off).unwrap();
        assert!(matches!(
            perspective_map(&x, &off, &SpectralFn::Exp),
            Err(Error::NonCommuting { .. })
        ));
    }
}
