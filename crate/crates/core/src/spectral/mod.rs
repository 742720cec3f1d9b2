//! Hermitian spectral calculus on tensors.
//!
//! All spectral work goes unfold → dense Hermitian eigensolver → refold.

mod dilation;
mod entropy;
pub mod properties;

use nalgebra::{DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, DenseTensor, HermitianTensor};

pub use dilation::{dilation_blocks, hermitian_dilation};
pub use entropy::{perspective_map, relative_entropy, COMMUTATION_REL_TOL};

/// Relative floor below which an eigenvalue counts as zero for `log`,
/// negative powers and relative entropy.
pub const PD_FLOOR_REL: f64 = 1e-12;

/// Eigenvalues (descending) and an orthonormal eigenbasis of the unfolding.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, in the same order as `eigenvalues`.
    pub basis: CMatrix,
    dims: Vec<usize>,
}

impl Spectrum {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `U ⋆ f(Λ) ⋆ Uᴴ`.
    pub fn recompose(&self, f: impl Fn(f64) -> f64) -> Result<HermitianTensor> {
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        HermitianTensor::from_matrix_symmetrized(&recompose_matrix(&self.basis, &mapped), &self.dims)
    }

    /// The eigenbasis as a unitary tensor.
    pub fn basis_tensor(&self) -> Result<DenseTensor> {
        DenseTensor::refold(&self.basis, crate::tensor::Shape::square(&self.dims)?)
    }

    /// Floor used for positive-definiteness tests: `1e-12 · λ_max`.
    pub fn pd_floor(&self) -> f64 {
        PD_FLOOR_REL * self.lambda_max().max(0.0)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.lambda_max() > 0.0 && self.lambda_min() > self.pd_floor()
    }
}

pub(crate) fn recompose_matrix(basis: &CMatrix, values: &[f64]) -> CMatrix {
    let mut scaled = basis.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    &scaled * basis.adjoint()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
pub(crate) fn eigh_matrix(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 1000 * n.max(1)).ok_or(Error::EigenNonConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let basis = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, basis))
}

/// Eigenvalues of a Hermitian matrix, descending.
pub(crate) fn eigenvalues_matrix(m: &CMatrix) -> Vec<f64> {
    let ev: DVector<f64> = m.symmetric_eigenvalues();
    let mut v: Vec<f64> = ev.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn hermitian_eig(x: &HermitianTensor) -> Result<Spectrum> {
    let (eigenvalues, basis) = eigh_matrix(&x.unfold())?;
    Ok(Spectrum {
        eigenvalues,
        basis,
        dims: x.dims().to_vec(),
    })
}

/// Eigenvalues only, descending.
pub fn eigenvalues(x: &HermitianTensor) -> Vec<f64> {
    eigenvalues_matrix(&x.unfold())
}

pub fn lambda_max(x: &HermitianTensor) -> f64 {
    eigenvalues(x)[0]
}

pub fn lambda_min(x: &HermitianTensor) -> f64 {
    *eigenvalues(x).last().expect("non-empty spectrum")
}

/// Largest singular value of the unfolding.
pub fn spectral_norm(a: &DenseTensor) -> f64 {
    spectral_norm_matrix(&a.unfold())
}

pub(crate) fn spectral_norm_matrix(m: &CMatrix) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Scalar maps that can be lifted to Hermitian tensors.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralFn {
    Exp,
    /// Natural logarithm; needs a positive definite argument.
    Log,
    /// `x^p`. Negative `p` needs a positive definite argument, fractional `p`
    /// a positive semidefinite one.
    Power(f64),
    /// `Σ c_k x^k`, coefficients in ascending degree.
    Polynomial(Vec<f64>),
    /// `x log x` with `0 log 0 = 0`; needs a positive semidefinite argument.
    XLogX,
}

impl SpectralFn {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SpectralFn::Exp => x.exp(),
            SpectralFn::Log => x.ln(),
            SpectralFn::Power(p) => {
                if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
                    x.powi(*p as i32)
                } else {
                    x.max(0.0).powf(*p)
                }
            }
            SpectralFn::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            SpectralFn::XLogX => {
                if x <= 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
        }
    }

    fn name(&self) -> &'static str {
        match self {
            SpectralFn::Exp => "exp",
            SpectralFn::Log => "log",
            SpectralFn::Power(_) => "power",
            SpectralFn::Polynomial(_) => "polynomial",
            SpectralFn::XLogX => "x log x",
        }
    }

    fn check_domain(&self, spectrum: &Spectrum) -> Result<()> {
        let floor = spectrum.pd_floor();
        let lmin = spectrum.lambda_min();
        let needs_pd = match self {
            SpectralFn::Log => true,
            SpectralFn::Power(p) => *p < 0.0,
            _ => false,
        };
        let needs_psd = match self {
            SpectralFn::XLogX => true,
            SpectralFn::Power(p) => p.fract() != 0.0,
            _ => false,
        };
        if needs_pd && !spectrum.is_positive_definite() {
            return Err(Error::NotPositiveDefinite {
                function: self.name(),
                lambda_min: lmin,
                floor,
            });
        }
        if needs_psd && lmin < -floor.max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!(
                "{} needs a positive semidefinite argument, lambda_min = {lmin:e}",
                self.name()
            )));
        }
        Ok(())
    }
}

/// `f(X) = U ⋆ f(Λ) ⋆ Uᴴ`.
pub fn tensor_function(x: &HermitianTensor, f: &SpectralFn) -> Result<HermitianTensor> {
    let spectrum = hermitian_eig(x)?;
    f.check_domain(&spectrum)?;
    spectrum.recompose(|l| f.eval(l))
}

/// Applies an arbitrary scalar map to the spectrum, without domain checks.
pub fn map_spectrum(x: &HermitianTensor, f: impl Fn(f64) -> f64) -> Result<HermitianTensor> {
    hermitian_eig(x)?.recompose(f)
}

pub fn tensor_exp(x: &HermitianTensor) -> Result<HermitianTensor> {
    tensor_function(x, &SpectralFn::Exp)
}

pub fn tensor_log(x: &HermitianTensor) -> Result<HermitianTensor> {
    tensor_function(x, &SpectralFn::Log)
}

/// `Tr e^X`, computed from the spectrum.
pub fn trace_exp(x: &HermitianTensor) -> f64 {
    eigenvalues(x).iter().map(|l| l.exp()).sum()
}

/// Outcome of a semidefinite comparison `X ⪰ Y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdVerdict {
    pub lambda_min_of_difference: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl PsdVerdict {
    pub fn from_lambda_min(lambda_min_of_difference: f64, tolerance: f64) -> Self {
        PsdVerdict {
            lambda_min_of_difference,
            tolerance,
            holds: lambda_min_of_difference >= -tolerance,
        }
    }
}

/// Checks `x ⪰ y`, i.e. `λ_min(x - y) ≥ -tol`.
pub fn psd_compare(x: &HermitianTensor, y: &HermitianTensor, tol: f64) -> Result<PsdVerdict> {
    let diff = x.sub(y)?;
    Ok(PsdVerdict::from_lambda_min(lambda_min(&diff), tol))
}

/// Product `x ⋆ y` of two square tensors as a plain tensor.
pub fn product(x: &HermitianTensor, y: &HermitianTensor) -> Result<DenseTensor> {
    x.as_tensor().einstein_product(y.as_tensor(), x.dims().len())
}
