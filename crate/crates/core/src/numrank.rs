//! Numerical matrix rank with an explicit, reportable tolerance policy.
//!
//! Rank is the number of singular values strictly above a cutoff. The
//! default cutoff is the standard pseudo-inverse one,
//! `max(rows, cols) * eps * sigma_max`, and the singular values are always
//! returned so borderline calls can be audited.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Iteration cap for the SVD; generous for desk-scale matrices.
const SVD_MAX_ITERS: usize = 2000;

/// Outcome of a numerical rank computation.
#[derive(Debug, Clone, Serialize)]
pub struct RankResult {
    /// Count of singular values strictly greater than `tolerance_used`.
    pub rank: usize,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
    /// The cutoff actually applied (0 only for an all-zero matrix).
    pub tolerance_used: f64,
}

/// Singular values of `m`, descending.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    let svd = Matrix::try_svd(m.clone(), false, false, f64::EPSILON, SVD_MAX_ITERS).ok_or(
        Error::SvdFailed {
            rows: m.nrows(),
            cols: m.ncols(),
        },
    )?;
    Ok(svd.singular_values.as_slice().to_vec())
}

/// Default cutoff: `max(rows, cols) * eps * sigma_max`.
pub fn default_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Numerical rank of `m` via full SVD.
///
/// If `tol` is `None` the default cutoff is used; an all-zero matrix then
/// has cutoff 0 and rank 0.
pub fn matrix_rank(m: &Matrix, tol: Option<f64>) -> Result<RankResult> {
    if m.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let sv = singular_values(m)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let tolerance_used = tol.unwrap_or_else(|| default_tolerance(m.nrows(), m.ncols(), sigma_max));
    let rank = sv.iter().filter(|&&s| s > tolerance_used).count();
    Ok(RankResult {
        rank,
        singular_values: sv,
        tolerance_used,
    })
}

/// Sylvester's rank inequality for a product of three conforming matrices
/// `A: N×M`, `B: M×P`, `C: P×K`:
/// `rank(ABC) >= rank(A) + rank(B) + rank(C) - M - P`.
///
/// Returns the (possibly negative) right-hand side; callers clamp at zero
/// where that is meaningful.
pub fn sylvester_bound(
    rank_a: usize,
    rank_b: usize,
    rank_c: usize,
    inner_m: usize,
    inner_p: usize,
) -> i64 {
    rank_a as i64 + rank_b as i64 + rank_c as i64 - inner_m as i64 - inner_p as i64
}
