//! Dense complex tensors and the Einstein-product algebra.
//!
//! Every square-tensor computation reduces to matrix computation through the
//! unfolding: row modes and column modes are each linearized row-major, so
//! `unfold(A ⋆ B) = unfold(A) · unfold(B)`.

mod dense;
mod hermitian;
mod io;
mod shape;

pub use dense::{einstein_product, CMatrix, DenseTensor};
pub use hermitian::{HermitianTensor, HERMITIAN_REL_TOL};
pub use io::{TensorHeader, DTYPE_C128};
pub use shape::{linear_index, multi_index, Shape, MAX_UNFOLDED_SIZE};

pub use num_complex::Complex64;
