//! Dense matrix type and the structured products used by flattened CPDs.
//!
//! Matrices are `nalgebra` column-major dynamic matrices, which is exactly
//! the first-index-fastest layout of the tensor side: an unfolding and its
//! source tensor share one flat buffer order.

use crate::error::{Error, Result};

/// Dense 2-D array of reals, column-major.
pub type Matrix = nalgebra::DMatrix<f64>;

/// Kronecker product `a ⊗ b`.
///
/// Entry `(a ⊗ b)[(i-1)·P + p, (j-1)·Q + q] = a[i,j] · b[p,q]` for `b` of
/// shape `P×Q`: the second operand's index varies fastest, the standard
/// convention.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    Matrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Khatri-Rao (column-wise Kronecker) product of `a: I×R` and `b: J×R`.
///
/// Column `r` of the result is `a_r ⊗ b_r`, so row `(i-1)·J + j` holds
/// `a[i,r] · b[j,r]`. With the first-index-fastest linearization this row
/// order makes the flattened-CPD unfolding identity exact; see
/// [`crate::cpd::CpdModel::unfolding_factors`].
pub fn khatri_rao(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.ncols() != b.ncols() {
        return Err(Error::ColumnMismatch {
            left: a.ncols(),
            right: b.ncols(),
        });
    }
    let (i, r) = a.shape();
    let j = b.nrows();
    Ok(Matrix::from_fn(i * j, r, |row, col| {
        a[(row / j, col)] * b[(row % j, col)]
    }))
}
