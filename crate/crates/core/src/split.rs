//! Search for the mode bipartition whose unfolding is maximally square.
//!
//! The exact strategy enumerates all proper bipartitions of the mode set
//! and maximizes the smaller side product, which is the objective that
//! controls rank detectability. The `sum_dp` strategy instead solves the
//! number partitioning problem on the dimensions themselves (balancing
//! sums, not products) by pseudo-polynomial dynamic programming; it is kept
//! for comparison and is not guaranteed to reach the exact optimum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::ModePermutation;

/// Ordered bipartition `(s1, s2)` of the mode set, canonicalized so that
/// `rows <= cols` where `rows` and `cols` are the dimension products over
/// `s1` and `s2`. Concatenating `s1` and `s2` gives the permutation whose
/// `|s1|`-unfolding realizes this split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModeSplit {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub rows: u64,
    pub cols: u64,
}

impl ModeSplit {
    /// The smaller side product; the quantity the exact search maximizes.
    pub fn min_product(&self) -> u64 {
        self.rows
    }

    /// Permutation `s1 · s2` and the split point `k = |s1|`.
    pub fn to_permutation(&self) -> (ModePermutation, usize) {
        let mut perm = Vec::with_capacity(self.s1.len() + self.s2.len());
        perm.extend_from_slice(&self.s1);
        perm.extend_from_slice(&self.s2);
        let k = self.s1.len();
        let p = ModePermutation::new(perm).expect("s1 and s2 partition the mode set");
        (p, k)
    }
}

/// Which search realizes the bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitStrategy {
    /// Enumerate all `2^(N-1) - 1` proper bipartitions; exact optimum.
    Exact,
    /// Balance dimension sums by subset-sum dynamic programming.
    SumDp,
}

fn product(dims: &[usize], modes: &[usize]) -> Result<u64> {
    let mut acc: u128 = 1;
    for &m in modes {
        acc = acc.checked_mul(dims[m - 1] as u128).ok_or(Error::ProductOverflow)?;
        if acc > u64::MAX as u128 {
            return Err(Error::ProductOverflow);
        }
    }
    Ok(acc as u64)
}

/// Build the canonical split from one side of a bipartition.
fn canonical(dims: &[usize], side: &[usize]) -> Result<ModeSplit> {
    let other: Vec<usize> = (1..=dims.len()).filter(|m| !side.contains(m)).collect();
    let p_side = product(dims, side)?;
    let p_other = product(dims, &other)?;
    let side = side.to_vec();
    let (s1, s2, rows, cols) = if p_side < p_other || (p_side == p_other && side < other) {
        (side, other, p_side, p_other)
    } else {
        (other, side, p_other, p_side)
    };
    Ok(ModeSplit { s1, s2, rows, cols })
}

/// Preference order among candidate splits: larger min-product first, then
/// squarer shape, then lexicographically smallest `s1`.
fn better(candidate: &ModeSplit, incumbent: &ModeSplit) -> bool {
    let c_gap = candidate.cols - candidate.rows;
    let i_gap = incumbent.cols - incumbent.rows;
    (candidate.min_product(), std::cmp::Reverse(c_gap))
        .cmp(&(incumbent.min_product(), std::cmp::Reverse(i_gap)))
        .then_with(|| incumbent.s1.cmp(&candidate.s1))
        .is_gt()
}

fn balanced_split_exact(dims: &[usize]) -> Result<ModeSplit> {
    let n = dims.len();
    if n > 32 {
        return Err(Error::TooManyModes(n));
    }
    // Mode n stays on the complement side, so each unordered bipartition is
    // visited exactly once.
    let mut best: Option<ModeSplit> = None;
    for mask in 1u64..(1u64 << (n - 1)) {
        let side: Vec<usize> = (1..n).filter(|m| mask >> (m - 1) & 1 == 1).collect();
        let split = canonical(dims, &side)?;
        if best.as_ref().is_none_or(|b| better(&split, b)) {
            best = Some(split);
        }
    }
    Ok(best.expect("n >= 2 yields at least one bipartition"))
}

fn balanced_split_sum_dp(dims: &[usize]) -> Result<ModeSplit> {
    let n = dims.len();
    let total: usize = dims.iter().sum();
    // reachable[i][s]: some subset of the first i dims sums to s.
    let mut reachable = vec![vec![false; total + 1]; n + 1];
    reachable[0][0] = true;
    for i in 1..=n {
        let v = dims[i - 1];
        for s in 0..=total {
            reachable[i][s] = reachable[i - 1][s] || (s >= v && reachable[i - 1][s - v]);
        }
    }
    // Best proper-subset sum: minimize |total - 2s|, ties to the smaller s.
    let target = (1..total)
        .filter(|&s| reachable[n][s])
        .min_by_key(|&s| ((total as i64 - 2 * s as i64).abs(), s))
        .ok_or(Error::NoValidSplit)?;

    let mut side = Vec::new();
    let mut s = target;
    for i in (1..=n).rev() {
        if !reachable[i - 1][s] {
            side.push(i);
            s -= dims[i - 1];
        }
    }
    debug_assert_eq!(s, 0);
    side.reverse();
    canonical(dims, &side)
}

/// Find the bipartition of `1..=N` whose unfolding is maximally square.
pub fn balanced_split(dims: &[usize], strategy: SplitStrategy) -> Result<ModeSplit> {
    if dims.len() < 2 {
        return Err(Error::NoValidSplit);
    }
    if let Some(m) = dims.iter().position(|&d| d == 0) {
        return Err(Error::ZeroDim { mode: m + 1 });
    }
    match strategy {
        SplitStrategy::Exact => balanced_split_exact(dims),
        SplitStrategy::SumDp => balanced_split_sum_dp(dims),
    }
}
