use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{linear_index, multi_index, DenseTensor, HermitianTensor, Shape};

/// Hermitian dilation of `Y ∈ ℂ^{I_1..I_M × J_1..J_M}`.
///
/// The result has dims `(I_1+J_1, .., I_M+J_M)`. Mode `m` of the dilation
/// embeds the row index `i_m` as `i_m` and the column index `j_m` as
/// `I_m + j_m`; `Y` fills the (all-row, all-column) block and `Yᴴ` the
/// transposed block. Mixed index tuples are zero.
pub fn hermitian_dilation(y: &DenseTensor) -> Result<HermitianTensor> {
    let shape = y.shape();
    let (rows, cols) = (shape.row_dims(), shape.col_dims());
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::InvalidShape(format!(
            "dilation needs equal, non-zero mode counts, got {} row and {} column modes",
            rows.len(),
            cols.len()
        )));
    }
    let dims: Vec<usize> = rows.iter().zip(cols).map(|(i, j)| i + j).collect();
    let (top, bottom) = dilation_blocks(shape)?;
    let size: usize = dims.iter().product();
    let mut data = vec![Complex64::new(0.0, 0.0); size * size];
    for (r, &p) in top.iter().enumerate() {
        for (c, &q) in bottom.iter().enumerate() {
            let v = y.get_unfolded(r, c);
            data[p * size + q] = v;
            data[q * size + p] = v.conj();
        }
    }
    HermitianTensor::new(DenseTensor::new(Shape::square(&dims)?, data)?)
}

/// Unfolded positions of the two dilation blocks: entry `r` of the first
/// vector is where row `r` of `unfold(Y)` lands, entry `c` of the second is
/// where column `c` lands.
pub fn dilation_blocks(shape: &Shape) -> Result<(Vec<usize>, Vec<usize>)> {
    let (rows, cols) = (shape.row_dims(), shape.col_dims());
    if rows.len() != cols.len() {
        return Err(Error::InvalidShape("dilation needs equal mode counts".into()));
    }
    let dims: Vec<usize> = rows.iter().zip(cols).map(|(i, j)| i + j).collect();
    let top = (0..shape.row_size())
        .map(|r| linear_index(&dims, &multi_index(rows, r)))
        .collect();
    let bottom = (0..shape.col_size())
        .map(|c| {
            let shifted: Vec<usize> = multi_index(cols, c).iter().zip(rows).map(|(j, i)| i + j).collect();
            linear_index(&dims, &shifted)
        })
        .collect();
    Ok((top, bottom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lambda_max, spectral_norm};

    #[test]
    fn zero_dilates_to_zero() {
        let z = DenseTensor::zeros(Shape::new(vec![2, 1], vec![3, 2]).unwrap());
        let d = hermitian_dilation(&z).unwrap();
        assert_eq!(d.dims(), &[5, 3]);
        assert_eq!(d.max_abs(), 0.0);
        assert_eq!(lambda_max(&d), 0.0);
    }

    #[test]
    fn matrix_case_matches_block_form() {
        let y = DenseTensor::from_real(Shape::new(vec![2], vec![1]).unwrap(), &[3.0, 4.0]).unwrap();
        let d = hermitian_dilation(&y).unwrap();
        assert_eq!(d.get_unfolded(0, 2).re, 3.0);
        assert_eq!(d.get_unfolded(2, 1).re, 4.0);
        assert!((lambda_max(&d) - 5.0).abs() < 1e-12);
        assert!((spectral_norm(&y) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn mode_count_mismatch() {
        let y = DenseTensor::zeros(Shape::new(vec![2, 2], vec![3]).unwrap());
        assert!(hermitian_dilation(&y).is_err());
    }
}
