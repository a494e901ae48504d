//! Dense N-way tensor storage, multi-index linearization, unfoldings and
//! mode permutations.
//!
//! Multi-indices are 1-based throughout, matching the usual tensor notation;
//! flat offsets are 0-based. The single linearization convention is
//! first-index-fastest: `(i_1, .., i_N)` maps to
//! `sum_j (i_j - 1) * prod_{l<j} I_l`. Every operation in this crate relies
//! on that one convention, which is what makes `unfold` a plain reshape.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Strides of the first-index-fastest layout: `stride[0] = 1`,
/// `stride[k] = stride[k-1] * dims[k-1]`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = Vec::with_capacity(dims.len());
    let mut acc = 1usize;
    for &d in dims {
        s.push(acc);
        acc *= d;
    }
    s
}

/// Map a 1-based multi-index to its flat offset.
///
/// Returns an error naming the offending mode if any component is out of
/// range. The map is a bijection onto `0..dims.iter().product()`.
pub fn linearize(index: &[usize], dims: &[usize]) -> Result<usize> {
    if index.len() != dims.len() {
        return Err(Error::IndexArity {
            index_len: index.len(),
            order: dims.len(),
        });
    }
    let mut offset = 0usize;
    let mut stride = 1usize;
    for (mode, (&i, &d)) in index.iter().zip(dims).enumerate() {
        if i < 1 || i > d {
            return Err(Error::IndexOutOfRange {
                mode: mode + 1,
                index: i,
                bound: d,
            });
        }
        offset += (i - 1) * stride;
        stride *= d;
    }
    Ok(offset)
}

fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::EmptyDims);
    }
    for (mode, &d) in dims.iter().enumerate() {
        if d == 0 {
            return Err(Error::ZeroDim { mode: mode + 1 });
        }
    }
    Ok(())
}

/// A bijection on the mode set `{1..N}`, stored as the image array
/// `[p(1), .., p(N)]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModePermutation {
    perm: Vec<usize>,
}

impl ModePermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if n == 0 {
            return Err(Error::EmptyDims);
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p < 1 || p > n || seen[p - 1] {
                return Err(Error::InvalidPermutation { perm, order: n });
            }
            seen[p - 1] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(order: usize) -> Self {
        Self {
            perm: (1..=order).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Image of mode `m` (1-based in, 1-based out).
    pub fn apply(&self, m: usize) -> usize {
        self.perm[m - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.perm.len()];
        for (m, &p) in self.perm.iter().enumerate() {
            inv[p - 1] = m + 1;
        }
        Self { perm: inv }
    }

    /// Dimensions of the permuted tensor: `J_m = I_{p(m)}`.
    pub fn permute_dims(&self, dims: &[usize]) -> Vec<usize> {
        self.perm.iter().map(|&p| dims[p - 1]).collect()
    }
}

/// Dense real tensor of order N with an explicit dimension list.
///
/// `data` holds the entries in first-index-fastest order; its length always
/// equals the product of `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        validate_dims(&dims)?;
        let expected: usize = dims.iter().product();
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        validate_dims(&dims)?;
        let len = dims.iter().product();
        Ok(Self {
            dims,
            data: vec![0.0; len],
        })
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Entry at a 1-based multi-index.
    pub fn get(&self, index: &[usize]) -> Result<f64> {
        Ok(self.data[linearize(index, &self.dims)?])
    }

    pub fn set(&mut self, index: &[usize], value: f64) -> Result<()> {
        let off = linearize(index, &self.dims)?;
        self.data[off] = value;
        Ok(())
    }

    /// Entrywise scalar multiple.
    pub fn scale(&self, c: f64) -> DenseTensor {
        DenseTensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// n-unfolding: modes `1..=n` become rows, modes `n+1..=N` columns.
    ///
    /// Under the first-index-fastest convention this is a reshape; the
    /// returned matrix shares the exact flat element order of the tensor.
    pub fn unfold(&self, n: usize) -> Result<Matrix> {
        let order = self.order();
        if order < 2 || n < 1 || n > order - 1 {
            return Err(Error::InvalidSplit { split: n, order });
        }
        let rows: usize = self.dims[..n].iter().product();
        let cols: usize = self.dims[n..].iter().product();
        Ok(Matrix::from_vec(rows, cols, self.data.clone()))
    }

    /// Permuted tensor: the result has dims `[I_{p(1)}, .., I_{p(N)}]` and
    /// entry `(j_1, .., j_N)` equal to the source entry whose index at
    /// position `p(m)` is `j_m`.
    pub fn permute_modes(&self, p: &ModePermutation) -> Result<DenseTensor> {
        let order = self.order();
        if p.len() != order {
            return Err(Error::PermutationArity {
                perm_len: p.len(),
                order,
            });
        }
        let out_dims = p.permute_dims(&self.dims);
        let src_strides = strides(&self.dims);
        // stride in the source for a unit step of result mode m
        let step: Vec<usize> = (1..=order).map(|m| src_strides[p.apply(m) - 1]).collect();

        let mut out = vec![0.0; self.data.len()];
        let mut idx = vec![0usize; order]; // 0-based odometer over out_dims
        let mut src = 0usize;
        for slot in out.iter_mut() {
            *slot = self.data[src];
            for m in 0..order {
                idx[m] += 1;
                src += step[m];
                if idx[m] < out_dims[m] {
                    break;
                }
                idx[m] = 0;
                src -= out_dims[m] * step[m];
            }
        }
        Ok(DenseTensor {
            dims: out_dims,
            data: out,
        })
    }
}
