use std::ops::Deref;

use num_complex::Complex64;

use super::dense::{CMatrix, DenseTensor};
use super::shape::Shape;
use crate::error::{Error, Result};

/// Relative tolerance for accepting a tensor as Hermitian, scaled by the
/// largest entry modulus.
pub const HERMITIAN_REL_TOL: f64 = 1e-10;

/// Square tensor with `X = Xᴴ`. Stored in symmetrized form `(X + Xᴴ)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianTensor(DenseTensor);

impl HermitianTensor {
    /// Accepts `t` when `max |X - Xᴴ| ≤ 1e-10 · max |X|`.
    pub fn new(t: DenseTensor) -> Result<Self> {
        let tol = HERMITIAN_REL_TOL * t.max_abs();
        Self::with_tolerance(t, tol)
    }

    pub fn with_tolerance(t: DenseTensor, tolerance: f64) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::InvalidShape(format!(
                "Hermitian tensor must be square, got {}",
                t.shape()
            )));
        }
        let deviation = hermitian_deviation(&t);
        if deviation > tolerance {
            return Err(Error::NotHermitian { deviation, tolerance });
        }
        Ok(HermitianTensor(symmetrize(t)))
    }

    /// Wraps an unfolded matrix for square dims `dims × dims`, symmetrizing it.
    /// The caller guarantees the matrix is Hermitian up to rounding.
    pub(crate) fn from_matrix_symmetrized(m: &CMatrix, dims: &[usize]) -> Result<Self> {
        let shape = Shape::square(dims)?;
        Ok(HermitianTensor(symmetrize(DenseTensor::refold(m, shape)?)))
    }

    pub fn from_matrix(m: &CMatrix, dims: &[usize]) -> Result<Self> {
        HermitianTensor::new(DenseTensor::refold(m, Shape::square(dims)?)?)
    }

    pub fn identity(dims: &[usize]) -> Result<Self> {
        Ok(HermitianTensor(DenseTensor::identity(dims)?))
    }

    pub fn zero(dims: &[usize]) -> Result<Self> {
        Ok(HermitianTensor(DenseTensor::zeros(Shape::square(dims)?)))
    }

    /// Diagonal tensor (in the unfolded sense) with the given real diagonal.
    pub fn from_diagonal(dims: &[usize], diagonal: &[f64]) -> Result<Self> {
        let shape = Shape::square(dims)?;
        let n = shape.row_size();
        if diagonal.len() != n {
            return Err(Error::InvalidShape(format!(
                "diagonal of length {} for unfolded size {n}",
                diagonal.len()
            )));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, &d) in diagonal.iter().enumerate() {
            data[k * n + k] = Complex64::new(d, 0.0);
        }
        Ok(HermitianTensor(DenseTensor::new(shape, data)?))
    }

    /// The mode dimensions (shared by rows and columns).
    pub fn dims(&self) -> &[usize] {
        self.0.shape().row_dims()
    }

    /// Unfolded side length `∏ I_m`.
    pub fn size(&self) -> usize {
        self.0.shape().row_size()
    }

    pub fn as_tensor(&self) -> &DenseTensor {
        &self.0
    }

    pub fn into_tensor(self) -> DenseTensor {
        self.0
    }

    pub fn add(&self, other: &HermitianTensor) -> Result<Self> {
        Ok(HermitianTensor(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &HermitianTensor) -> Result<Self> {
        Ok(HermitianTensor(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Ok(HermitianTensor(self.0.scale_real(c)?))
    }

    /// Real trace (the imaginary part of a Hermitian trace is rounding noise).
    pub fn trace_real(&self) -> f64 {
        let n = self.size();
        (0..n).map(|k| self.0.get_unfolded(k, k).re).sum()
    }

    /// `X ⋆ X`, symmetrized.
    pub fn square(&self) -> Result<Self> {
        let m = self.0.unfold();
        HermitianTensor::from_matrix_symmetrized(&(&m * &m), self.dims())
    }
}

impl Deref for HermitianTensor {
    type Target = DenseTensor;
    fn deref(&self) -> &DenseTensor {
        &self.0
    }
}

impl TryFrom<DenseTensor> for HermitianTensor {
    type Error = Error;
    fn try_from(t: DenseTensor) -> Result<Self> {
        HermitianTensor::new(t)
    }
}

fn hermitian_deviation(t: &DenseTensor) -> f64 {
    let n = t.shape().row_size();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            let d = (t.get_unfolded(r, c) - t.get_unfolded(c, r).conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

fn symmetrize(t: DenseTensor) -> DenseTensor {
    let shape = t.shape().clone();
    let n = shape.row_size();
    let mut data = t.into_data();
    for r in 0..n {
        data[r * n + r].im = 0.0;
        for c in (r + 1)..n {
            let avg = (data[r * n + c] + data[c * n + r].conj()) * 0.5;
            data[r * n + c] = avg;
            data[c * n + r] = avg.conj();
        }
    }
    DenseTensor::new(shape, data).expect("symmetrizing finite data stays finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_small_noise_and_rejects_large() {
        let shape = Shape::square(&[2]).unwrap();
        let noisy = DenseTensor::new(
            shape.clone(),
            vec![
                Complex64::new(1.0, 1e-14),
                Complex64::new(0.5, 0.25),
                Complex64::new(0.5, -0.25 + 1e-13),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let h = HermitianTensor::with_tolerance(noisy, 1e-12).unwrap();
        assert_eq!(h.get_unfolded(0, 0).im, 0.0);
        assert_eq!(h.get_unfolded(0, 1), h.get_unfolded(1, 0).conj());

        let bad = DenseTensor::from_real(shape, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(HermitianTensor::new(bad), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rectangular_rejected() {
        let t = DenseTensor::zeros(Shape::new(vec![2], vec![3]).unwrap());
        assert!(HermitianTensor::new(t).is_err());
    }

    #[test]
    fn diagonal_constructor() {
        let h = HermitianTensor::from_diagonal(&[2, 2], &[3.0, 1.0, -2.0, 0.0]).unwrap();
        assert_eq!(h.trace_real(), 2.0);
        assert!(HermitianTensor::from_diagonal(&[2], &[1.0]).is_err());
    }
}
