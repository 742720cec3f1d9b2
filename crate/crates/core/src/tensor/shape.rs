use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest unfolded side length accepted by any operation. Everything
/// downstream of the unfolding is dense and cubic in this size.
pub const MAX_UNFOLDED_SIZE: usize = 4096;

/// Mode layout of an order-(M+N) tensor: `M` row modes followed by `N`
/// column modes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShape", into = "RawShape")]
pub struct Shape {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    row_size: usize,
    col_size: usize,
}

#[derive(Serialize, Deserialize)]
struct RawShape {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
}

impl TryFrom<RawShape> for Shape {
    type Error = Error;
    fn try_from(raw: RawShape) -> Result<Self> {
        Shape::new(raw.row_dims, raw.col_dims)
    }
}

impl From<Shape> for RawShape {
    fn from(s: Shape) -> Self {
        RawShape {
            row_dims: s.row_dims,
            col_dims: s.col_dims,
        }
    }
}

fn checked_product(dims: &[usize]) -> Result<usize> {
    dims.iter().try_fold(1usize, |acc, &d| {
        acc.checked_mul(d)
            .ok_or_else(|| Error::InvalidShape(format!("product of {dims:?} overflows")))
    })
}

impl Shape {
    pub fn new(row_dims: Vec<usize>, col_dims: Vec<usize>) -> Result<Self> {
        if row_dims.is_empty() && col_dims.is_empty() {
            return Err(Error::InvalidShape("tensor needs at least one mode".into()));
        }
        if let Some(pos) = row_dims.iter().chain(&col_dims).position(|&d| d == 0) {
            return Err(Error::InvalidShape(format!("mode {pos} has zero length")));
        }
        let row_size = checked_product(&row_dims)?;
        let col_size = checked_product(&col_dims)?;
        if row_size > MAX_UNFOLDED_SIZE || col_size > MAX_UNFOLDED_SIZE {
            return Err(Error::TooLarge {
                rows: row_size,
                cols: col_size,
                limit: MAX_UNFOLDED_SIZE,
            });
        }
        Ok(Shape {
            row_dims,
            col_dims,
            row_size,
            col_size,
        })
    }

    /// Square shape `dims × dims`.
    pub fn square(dims: &[usize]) -> Result<Self> {
        Shape::new(dims.to_vec(), dims.to_vec())
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    /// Product of the row dimensions (the unfolded row count).
    pub fn row_size(&self) -> usize {
        self.row_size
    }

    pub fn col_size(&self) -> usize {
        self.col_size
    }

    pub fn len(&self) -> usize {
        self.row_size * self.col_size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> usize {
        self.row_dims.len() + self.col_dims.len()
    }

    pub fn is_square(&self) -> bool {
        self.row_dims == self.col_dims
    }

    /// Shape with row and column modes swapped.
    pub fn transposed(&self) -> Shape {
        Shape {
            row_dims: self.col_dims.clone(),
            col_dims: self.row_dims.clone(),
            row_size: self.col_size,
            col_size: self.row_size,
        }
    }

    /// All modes in storage order.
    pub fn all_dims(&self) -> Vec<usize> {
        let mut all = self.row_dims.clone();
        all.extend_from_slice(&self.col_dims);
        all
    }

    /// Same modes, split after `row_modes` of them instead. Storage order is
    /// unchanged, so no data movement is implied.
    pub fn repartition(&self, row_modes: usize) -> Result<Shape> {
        let all = self.all_dims();
        if row_modes > all.len() {
            return Err(Error::InvalidShape(format!(
                "cannot place {row_modes} row modes in an order-{} tensor",
                all.len()
            )));
        }
        let (r, c) = all.split_at(row_modes);
        Shape::new(r.to_vec(), c.to_vec())
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}x{:?}", self.row_dims, self.col_dims)
    }
}

/// Row-major linearization of a multi-index.
pub fn linear_index(dims: &[usize], index: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), index.len());
    index.iter().zip(dims).fold(0usize, |acc, (&i, &d)| {
        debug_assert!(i < d);
        acc * d + i
    })
}

/// Inverse of [`linear_index`].
pub fn multi_index(dims: &[usize], mut linear: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = linear % d;
        linear /= d;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_guardrail() {
        let s = Shape::new(vec![2, 3], vec![4]).unwrap();
        assert_eq!((s.row_size(), s.col_size(), s.len()), (6, 4, 24));
        assert!(matches!(Shape::new(vec![4097], vec![1]), Err(Error::TooLarge { .. })));
        assert!(Shape::new(vec![64, 65], vec![1]).is_err());
        assert!(Shape::new(vec![], vec![]).is_err());
        assert!(Shape::new(vec![2, 0], vec![1]).is_err());
        assert!(Shape::new(vec![usize::MAX, 2], vec![1]).is_err());
    }

    #[test]
    fn zero_row_modes_allowed() {
        let s = Shape::new(vec![], vec![3]).unwrap();
        assert_eq!(s.row_size(), 1);
        assert_eq!(s.col_size(), 3);
    }

    #[test]
    fn index_round_trip() {
        let dims = [2, 3, 4];
        for l in 0..24 {
            assert_eq!(linear_index(&dims, &multi_index(&dims, l)), l);
        }
        assert_eq!(linear_index(&dims, &[1, 2, 3]), 23);
    }

    #[test]
    fn repartition_keeps_modes() {
        let s = Shape::new(vec![2, 3], vec![4, 5]).unwrap();
        let r = s.repartition(1).unwrap();
        assert_eq!(r.row_dims(), &[2]);
        assert_eq!(r.col_dims(), &[3, 4, 5]);
    }
}
