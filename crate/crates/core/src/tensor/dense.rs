use nalgebra::DMatrix;
use num_complex::Complex64;

use super::shape::{linear_index, Shape};
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Dense complex tensor stored row-major over `(i_1..i_M, j_1..j_N)`.
///
/// Because row modes precede column modes in storage order, the flat data
/// is also the row-major layout of the `row_size × col_size` unfolding.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    shape: Shape,
    data: Vec<Complex64>,
}

fn first_non_finite(data: &[Complex64]) -> Option<usize> {
    data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite())
}

fn same_shape(context: &'static str, a: &Shape, b: &Shape) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            context,
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

impl DenseTensor {
    pub fn new(shape: Shape, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::InvalidShape(format!(
                "shape {shape} needs {} entries, got {}",
                shape.len(),
                data.len()
            )));
        }
        if let Some(i) = first_non_finite(&data) {
            return Err(Error::NonFinite(i));
        }
        Ok(DenseTensor { shape, data })
    }

    pub fn from_real(shape: Shape, data: &[f64]) -> Result<Self> {
        DenseTensor::new(shape, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a tensor by evaluating `f(row_index, col_index)` for every entry.
    pub fn from_fn(shape: Shape, mut f: impl FnMut(&[usize], &[usize]) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(shape.len());
        let mut ri = vec![0; shape.row_dims().len()];
        for _ in 0..shape.row_size() {
            let mut ci = vec![0; shape.col_dims().len()];
            for _ in 0..shape.col_size() {
                data.push(f(&ri, &ci));
                increment(&mut ci, shape.col_dims());
            }
            increment(&mut ri, shape.row_dims());
        }
        DenseTensor::new(shape, data)
    }

    pub fn zeros(shape: Shape) -> Self {
        let n = shape.len();
        DenseTensor {
            shape,
            data: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn ones(shape: Shape) -> Self {
        let n = shape.len();
        DenseTensor {
            shape,
            data: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// Identity of shape `dims × dims`: one on every diagonal index tuple.
    pub fn identity(dims: &[usize]) -> Result<Self> {
        let shape = Shape::square(dims)?;
        let n = shape.row_size();
        let mut t = DenseTensor::zeros(shape);
        for k in 0..n {
            t.data[k * n + k] = Complex64::new(1.0, 0.0);
        }
        Ok(t)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Entry at `(row_index, col_index)`.
    pub fn get(&self, row_index: &[usize], col_index: &[usize]) -> Complex64 {
        let r = linear_index(self.shape.row_dims(), row_index);
        let c = linear_index(self.shape.col_dims(), col_index);
        self.data[r * self.shape.col_size() + c]
    }

    /// Entry at the unfolded position `(r, c)`.
    pub fn get_unfolded(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.shape.col_size() + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_square(&self) -> bool {
        self.shape.is_square()
    }

    /// Same data viewed with the first `row_modes` modes as rows.
    pub fn repartition(&self, row_modes: usize) -> Result<Self> {
        Ok(DenseTensor {
            shape: self.shape.repartition(row_modes)?,
            data: self.data.clone(),
        })
    }

    pub fn add(&self, other: &DenseTensor) -> Result<Self> {
        self.zip_with("add", other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<Self> {
        self.zip_with("sub", other, |a, b| a - b)
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &DenseTensor) -> Result<Self> {
        self.zip_with("hadamard", other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Result<Self> {
        DenseTensor::new(self.shape.clone(), self.data.iter().map(|&z| z * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> Result<Self> {
        self.scale(Complex64::new(c, 0.0))
    }

    fn zip_with(
        &self,
        context: &'static str,
        other: &DenseTensor,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        same_shape(context, &self.shape, &other.shape)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        DenseTensor::new(self.shape.clone(), data)
    }

    /// `(Xᴴ)_{j,i} = conj(X_{i,j})`.
    pub fn conjugate_transpose(&self) -> Self {
        let (rows, cols) = (self.shape.row_size(), self.shape.col_size());
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..cols {
            for r in 0..rows {
                data.push(self.data[r * cols + c].conj());
            }
        }
        DenseTensor {
            shape: self.shape.transposed(),
            data,
        }
    }

    /// Sum of the diagonal entries of a square tensor.
    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::InvalidShape(format!(
                "trace of non-square tensor {}",
                self.shape
            )));
        }
        let n = self.shape.row_size();
        Ok((0..n).map(|k| self.data[k * n + k]).sum())
    }

    /// `⟨X, Y⟩ = Tr(Xᴴ ⋆ Y)`, with the trace taken over the column modes.
    ///
    /// Equals `Σ conj(x) y` over all entries.
    pub fn inner_product(&self, other: &DenseTensor) -> Result<Complex64> {
        same_shape("inner_product", &self.shape, &other.shape)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unfolding into a `row_size × col_size` matrix.
    pub fn unfold(&self) -> CMatrix {
        CMatrix::from_row_slice(self.shape.row_size(), self.shape.col_size(), &self.data)
    }

    /// Inverse of [`DenseTensor::unfold`].
    pub fn refold(m: &CMatrix, shape: Shape) -> Result<Self> {
        if m.nrows() != shape.row_size() || m.ncols() != shape.col_size() {
            return Err(Error::ShapeMismatch {
                context: "refold",
                left: format!("{}x{} matrix", m.nrows(), m.ncols()),
                right: shape.to_string(),
            });
        }
        let data = m.transpose().as_slice().to_vec();
        DenseTensor::new(shape, data)
    }

    /// Einstein product contracting the trailing `contracted_modes` modes of
    /// `self` against the leading `contracted_modes` modes of `other`.
    ///
    /// Tensors whose partition already matches are used as is; otherwise the
    /// modes are re-split so that the contracted modes are `self`'s columns
    /// and `other`'s rows.
    pub fn einstein_product(&self, other: &DenseTensor, contracted_modes: usize) -> Result<Self> {
        let a = if self.shape.col_dims().len() == contracted_modes {
            std::borrow::Cow::Borrowed(self)
        } else {
            let order = self.shape.order();
            if contracted_modes > order {
                return Err(Error::InvalidShape(format!(
                    "cannot contract {contracted_modes} modes of an order-{order} tensor"
                )));
            }
            std::borrow::Cow::Owned(self.repartition(order - contracted_modes)?)
        };
        let b = if other.shape.row_dims().len() == contracted_modes {
            std::borrow::Cow::Borrowed(other)
        } else {
            std::borrow::Cow::Owned(other.repartition(contracted_modes)?)
        };
        let (ac, br) = (a.shape.col_dims(), b.shape.row_dims());
        if let Some(mode) = ac.iter().zip(br).position(|(x, y)| x != y) {
            return Err(Error::ModeMismatch {
                context: "einstein_product",
                mode,
                left: ac[mode],
                right: br[mode],
            });
        }
        let shape = Shape::new(a.shape.row_dims().to_vec(), b.shape.col_dims().to_vec())?;
        DenseTensor::refold(&(a.unfold() * b.unfold()), shape)
    }
}

fn increment(index: &mut [usize], dims: &[usize]) {
    for (slot, &d) in index.iter_mut().zip(dims).rev() {
        *slot += 1;
        if *slot < d {
            return;
        }
        *slot = 0;
    }
}

/// Free-function form of [`DenseTensor::einstein_product`].
pub fn einstein_product(a: &DenseTensor, b: &DenseTensor, contracted_modes: usize) -> Result<DenseTensor> {
    a.einstein_product(b, contracted_modes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_entries() {
        let id = DenseTensor::identity(&[2, 2]).unwrap();
        assert_eq!(id.get(&[0, 0], &[0, 0]), c(1.0, 0.0));
        assert_eq!(id.get(&[0, 1], &[0, 0]), c(0.0, 0.0));
        assert_eq!(id.trace().unwrap(), c(4.0, 0.0));
        assert_eq!(DenseTensor::identity(&[3, 4]).unwrap().trace().unwrap(), c(12.0, 0.0));
        assert_eq!(DenseTensor::identity(&[2, 3]).unwrap().trace().unwrap(), c(6.0, 0.0));
        assert!((DenseTensor::identity(&[2, 3]).unwrap().frobenius_norm() - 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn from_fn_matches_get() {
        let shape = Shape::new(vec![2, 3], vec![2]).unwrap();
        let t = DenseTensor::from_fn(shape, |r, col| c((r[0] * 100 + r[1] * 10 + col[0]) as f64, 0.0)).unwrap();
        assert_eq!(t.get(&[1, 2], &[1]).re, 121.0);
        assert_eq!(t.get(&[0, 1], &[0]).re, 10.0);
    }

    #[test]
    fn rejects_non_finite_and_wrong_length() {
        let shape = Shape::new(vec![2], vec![1]).unwrap();
        assert_eq!(
            DenseTensor::new(shape.clone(), vec![c(1.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(1))
        );
        assert!(DenseTensor::new(shape, vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn mismatch_names_first_differing_mode() {
        let a = DenseTensor::zeros(Shape::new(vec![2], vec![3, 4]).unwrap());
        let b = DenseTensor::zeros(Shape::new(vec![3, 5], vec![2]).unwrap());
        match a.einstein_product(&b, 2) {
            Err(Error::ModeMismatch { mode, left, right, .. }) => assert_eq!((mode, left, right), (1, 4, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trace_requires_square() {
        let a = DenseTensor::zeros(Shape::new(vec![2], vec![3]).unwrap());
        assert!(a.trace().is_err());
    }

    #[test]
    fn refold_dimension_check() {
        let m = CMatrix::zeros(2, 3);
        assert!(DenseTensor::refold(&m, Shape::new(vec![3], vec![2]).unwrap()).is_err());
    }
}
