//! Random test inputs: tensors, Hermitian tensors, positive definite tensors
//! and Haar unitaries.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::tensor::{CMatrix, DenseTensor, HermitianTensor, Shape};

/// Standard complex normal: real and imaginary parts `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Tensor with i.i.d. standard complex normal entries.
pub fn random_tensor<R: Rng + ?Sized>(shape: Shape, rng: &mut R) -> Result<DenseTensor> {
    let data = (0..shape.len()).map(|_| complex_normal(rng)).collect();
    DenseTensor::new(shape, data)
}

/// `scale · (G + Gᴴ)/2` with `G` complex Ginibre.
pub fn random_hermitian<R: Rng + ?Sized>(dims: &[usize], scale: f64, rng: &mut R) -> Result<HermitianTensor> {
    let g = random_tensor(Shape::square(dims)?, rng)?.unfold();
    let h = (&g + g.adjoint()) * Complex64::new(0.5 * scale, 0.0);
    HermitianTensor::from_matrix_symmetrized(&h, dims)
}

/// `U diag(λ) Uᴴ` with Haar `U` and `λ` uniform on `[lo, hi]`, `0 < lo ≤ hi`.
pub fn random_pd<R: Rng + ?Sized>(dims: &[usize], lo: f64, hi: f64, rng: &mut R) -> Result<HermitianTensor> {
    let n: usize = dims.iter().product();
    let u = haar_unitary(n, rng);
    let values: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    HermitianTensor::from_matrix_symmetrized(&conjugate_by(&u, &values), dims)
}

/// Haar-distributed unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    unitary_factor(ginibre(n, rng))
}

/// `n × n` matrix of i.i.d. standard complex normals, filled row by row.
pub(crate) fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut g = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            g[(r, c)] = complex_normal(rng);
        }
    }
    g
}

/// Unitary factor of `m` with the R-diagonal phase correction.
pub(crate) fn unitary_factor(m: CMatrix) -> CMatrix {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// `U diag(values) Uᴴ`.
pub(crate) fn conjugate_by(u: &CMatrix, values: &[f64]) -> CMatrix {
    let d = DVector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)));
    u * CMatrix::from_diagonal(&d) * u.adjoint()
}
