//! Rank lower bounds from the maximally square unfolding, and the
//! rank-deficiency detection test.
//!
//! The detection logic: the matrix rank of any unfolding bounds the tensor
//! rank from below, and the bound is best for the most square unfolding.
//! When that unfolding is strictly rank-deficient, the bound generically
//! equals the tensor rank, so the rank is detected outright; when it is
//! full rank, the bound is a floor from which a rank search may commence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numrank::{matrix_rank, RankResult};
use crate::split::{balanced_split, ModeSplit, SplitStrategy};
use crate::tensor::DenseTensor;

/// Everything needed to justify a bound or a detection verdict.
#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    /// Numerical rank of the maximally square unfolding.
    pub lower_bound: usize,
    /// True when the unfolding is strictly rank-deficient (and for order-1
    /// tensors, whose rank is read off directly).
    pub detected: bool,
    /// Equal to `lower_bound` when `detected`; absent otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detected_rank: Option<usize>,
    /// Largest rank detectable for these dimensions: `min(rows, cols) - 1`.
    pub r_max: u64,
    /// The maximally square mode bipartition; absent for order-1 tensors,
    /// which admit no bipartition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<ModeSplit>,
    /// Shape of the analyzed unfolding.
    pub unfolding_shape: (u64, u64),
    /// Singular values of the analyzed unfolding, descending.
    pub singular_values: Vec<f64>,
    /// The rank cutoff actually applied.
    pub tolerance_used: f64,
}

/// Largest detectable rank for a dimension list, together with the split
/// that attains it: `r_max = min(prod_{S1} I - 1, prod_{S2} I - 1)`.
pub fn max_detectable_rank(dims: &[usize]) -> Result<(u64, ModeSplit)> {
    let split = balanced_split(dims, SplitStrategy::Exact)?;
    Ok((split.rows - 1, split))
}

/// Lower-bound the tensor rank from the maximally square unfolding and
/// apply the strict rank-deficiency detection test.
///
/// Order-1 tensors get the documented convention: rank 1 if any entry is
/// nonzero at tolerance, else 0, always detected.
pub fn rank_lower_bound(t: &DenseTensor, tol: Option<f64>) -> Result<RankReport> {
    if t.order() == 1 {
        let row = crate::matrix::Matrix::from_row_slice(1, t.len(), t.data());
        let rr = matrix_rank(&row, tol)?;
        return Ok(RankReport {
            lower_bound: rr.rank,
            detected: true,
            detected_rank: Some(rr.rank),
            r_max: 0,
            split: None,
            unfolding_shape: (1, t.len() as u64),
            singular_values: rr.singular_values,
            tolerance_used: rr.tolerance_used,
        });
    }

    let split = balanced_split(t.dims(), SplitStrategy::Exact)?;
    let (perm, k) = split.to_permutation();
    let unfolding = t.permute_modes(&perm)?.unfold(k)?;
    let rr = matrix_rank(&unfolding, tol)?;

    // rows <= cols by canonical orientation, so rows is the rank cap.
    let cap = split.rows;
    let detected = (rr.rank as u64) < cap;
    Ok(RankReport {
        lower_bound: rr.rank,
        detected,
        detected_rank: detected.then_some(rr.rank),
        r_max: cap - 1,
        split: Some(split),
        unfolding_shape: (unfolding.nrows() as u64, unfolding.ncols() as u64),
        singular_values: rr.singular_values,
        tolerance_used: rr.tolerance_used,
    })
}

/// Diagnostic sweep: numerical rank of every contiguous unfolding of the
/// tensor as given (no permutation). The maximum over the sweep is a valid,
/// possibly weaker, lower bound on the tensor rank.
pub fn all_n_ranks(t: &DenseTensor, tol: Option<f64>) -> Result<Vec<(usize, RankResult)>> {
    let order = t.order();
    if order < 2 {
        return Err(Error::NoValidSplit);
    }
    (1..order)
        .map(|n| Ok((n, matrix_rank(&t.unfold(n)?, tol)?)))
        .collect()
}
