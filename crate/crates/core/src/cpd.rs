//! Weighted canonical polyadic models and their synthesis to dense tensors.
//!
//! A `CpdModel` is a weight vector and N factor matrices with a shared
//! column count R. The implied R×..×R diagonal core is never materialized;
//! it exists only as the weights.

use crate::error::{Error, Result};
use crate::matrix::{khatri_rao, Matrix};
use crate::tensor::{DenseTensor, ModePermutation};

/// Weight vector plus factor matrices `A^(n)` of shape `I_n × R`.
#[derive(Debug, Clone, PartialEq)]
pub struct CpdModel {
    weights: Vec<f64>,
    factors: Vec<Matrix>,
}

impl CpdModel {
    pub fn new(weights: Vec<f64>, factors: Vec<Matrix>) -> Result<Self> {
        let r = weights.len();
        if r == 0 {
            return Err(Error::InvalidRank);
        }
        if factors.is_empty() {
            return Err(Error::EmptyDims);
        }
        for (mode, f) in factors.iter().enumerate() {
            if f.ncols() != r {
                return Err(Error::FactorColumns {
                    mode: mode + 1,
                    expected: r,
                    actual: f.ncols(),
                });
            }
            if f.nrows() == 0 {
                return Err(Error::ZeroDim { mode: mode + 1 });
            }
        }
        Ok(Self { weights, factors })
    }

    /// An unweighted model is one with all weights equal to one.
    pub fn with_unit_weights(factors: Vec<Matrix>) -> Result<Self> {
        let r = factors.first().map(Matrix::ncols).unwrap_or(0);
        Self::new(vec![1.0; r], factors)
    }

    /// Constructed rank: the shared column count R. The tensor rank of the
    /// synthesized tensor is at most this.
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Matrix::nrows).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    pub fn factor(&self, mode: usize) -> &Matrix {
        &self.factors[mode - 1]
    }

    /// Reorder the factor list by a mode permutation: factor `m` of the
    /// result is factor `p(m)` of the source. Synthesizing the permuted
    /// model equals permuting the synthesized tensor.
    pub fn permute_modes(&self, p: &ModePermutation) -> Result<CpdModel> {
        if p.len() != self.order() {
            return Err(Error::PermutationArity {
                perm_len: p.len(),
                order: self.order(),
            });
        }
        let factors = (1..=self.order())
            .map(|m| self.factors[p.apply(m) - 1].clone())
            .collect();
        Ok(CpdModel {
            weights: self.weights.clone(),
            factors,
        })
    }

    /// Evaluate the model as a dense tensor:
    /// `x(i_1..i_N) = sum_r w_r * prod_n A^(n)(i_n, r)`.
    ///
    /// Direct elementwise evaluation, O(R · prod I_n · N); deliberately not
    /// routed through the matrix identities so the two paths can check each
    /// other.
    pub fn synthesize(&self) -> DenseTensor {
        let dims = self.dims();
        let order = dims.len();
        let len: usize = dims.iter().product();

        let mut data = vec![0.0; len];
        let mut idx = vec![0usize; order]; // 0-based odometer, first mode fastest
        for slot in data.iter_mut() {
            let mut acc = 0.0;
            for (r, &w) in self.weights.iter().enumerate() {
                let mut prod = w;
                for (m, &i) in idx.iter().enumerate() {
                    prod *= self.factors[m][(i, r)];
                }
                acc += prod;
            }
            *slot = acc;
            for (m, &d) in idx.iter_mut().zip(&dims) {
                *m += 1;
                if *m < d {
                    break;
                }
                *m = 0;
            }
        }
        DenseTensor::new(dims, data).expect("factor dims are valid")
    }

    /// Flattened-CPD factors of the n-unfolding: returns `(L, D, R)` with
    /// `L = A^(n) ⊙ .. ⊙ A^(1)`, `D = diag(weights)` and
    /// `R = A^(N) ⊙ .. ⊙ A^(n+1)`, so that
    /// `synthesize().unfold(n) == L * D * R.transpose()`.
    pub fn unfolding_factors(&self, n: usize) -> Result<(Matrix, Matrix, Matrix)> {
        let order = self.order();
        if order < 2 || n < 1 || n > order - 1 {
            return Err(Error::InvalidSplit { split: n, order });
        }
        let mut left = self.factors[0].clone();
        for m in 1..n {
            left = khatri_rao(&self.factors[m], &left)?;
        }
        let mut right = self.factors[n].clone();
        for m in n + 1..order {
            right = khatri_rao(&self.factors[m], &right)?;
        }
        let d = Matrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.weights));
        Ok((left, d, right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_model(rng: &mut ChaCha8Rng, dims: &[usize], r: usize) -> CpdModel {
        let factors = dims
            .iter()
            .map(|&d| Matrix::from_fn(d, r, |_, _| rng.random::<f64>() * 2.0 - 1.0))
            .collect();
        CpdModel::with_unit_weights(factors).unwrap()
    }

    fn rel_frobenius(a: &Matrix, b: &Matrix) -> f64 {
        let denom = a.norm().max(b.norm());
        if denom == 0.0 {
            0.0
        } else {
            (a - b).norm() / denom
        }
    }

    #[test]
    fn rank1_all_ones() {
        let factors = vec![
            Matrix::from_element(2, 1, 1.0),
            Matrix::from_element(3, 1, 1.0),
            Matrix::from_element(4, 1, 1.0),
        ];
        let m = CpdModel::new(vec![1.0], factors).unwrap();
        let t = m.synthesize();
        assert_eq!(t.dims(), &[2, 3, 4]);
        assert!(t.data().iter().all(|&x| x == 1.0));
    }

    #[test]
    fn rank1_entries_are_vector_products() {
        let a = [0.5, -1.0, 2.0];
        let b = [3.0, 4.0];
        let c = [1.0, -2.0, 0.25, 8.0];
        let factors = vec![
            Matrix::from_column_slice(3, 1, &a),
            Matrix::from_column_slice(2, 1, &b),
            Matrix::from_column_slice(4, 1, &c),
        ];
        let t = CpdModel::with_unit_weights(factors).unwrap().synthesize();
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                for (k, &ck) in c.iter().enumerate() {
                    assert_eq!(t.get(&[i + 1, j + 1, k + 1]).unwrap(), ai * bj * ck);
                }
            }
        }
    }

    #[test]
    fn khatri_rao_order_pinned_by_rank1_unfolding() {
        // Order-3 model with a trivial first mode: the 1 x (J*I) unfolding
        // at n=1 is exactly khatri_rao(A, B) transposed, which pins the
        // Khatri-Rao row order against the linearization convention.
        let a = Matrix::from_column_slice(2, 1, &[1.0, 2.0]);
        let b = Matrix::from_column_slice(2, 1, &[3.0, 4.0]);
        let one = Matrix::from_element(1, 1, 1.0);
        let m = CpdModel::with_unit_weights(vec![one, b.clone(), a.clone()]).unwrap();
        let row = m.synthesize().unfold(1).unwrap();
        let kr = khatri_rao(&a, &b).unwrap();
        assert_eq!(row.transpose(), kr);
        assert_eq!(kr.as_slice(), &[3.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn unfolding_factors_order2_is_plain_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_model(&mut rng, &[4, 5], 3);
        let (l, d, r) = m.unfolding_factors(1).unwrap();
        assert_eq!(l, m.factors()[0]);
        assert_eq!(r, m.factors()[1]);
        let product = &l * &d * r.transpose();
        let unfolded = m.synthesize().unfold(1).unwrap();
        assert!(rel_frobenius(&product, &unfolded) < 1e-12);
    }

    #[test]
    fn dual_path_identity_order3() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_model(&mut rng, &[3, 4, 5], 2);
        for n in 1..=2 {
            let (l, d, r) = m.unfolding_factors(n).unwrap();
            let product = &l * &d * r.transpose();
            let unfolded = m.synthesize().unfold(n).unwrap();
            assert!(rel_frobenius(&product, &unfolded) < 1e-12);
        }
    }

    #[test]
    fn dual_path_identity_order4() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = random_model(&mut rng, &[2, 3, 2, 4], 5);
        let (l, d, r) = m.unfolding_factors(2).unwrap();
        let product = &l * &d * r.transpose();
        let unfolded = m.synthesize().unfold(2).unwrap();
        assert!(rel_frobenius(&product, &unfolded) < 1e-12);
    }

    #[test]
    fn permuted_model_matches_permuted_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = random_model(&mut rng, &[2, 3, 4], 3);
        let p = ModePermutation::new(vec![3, 1, 2]).unwrap();
        let direct = m.permute_modes(&p).unwrap().synthesize();
        let via_tensor = m.synthesize().permute_modes(&p).unwrap();
        assert_eq!(direct.dims(), via_tensor.dims());
        for (x, y) in direct.data().iter().zip(via_tensor.data()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_mismatched_factor_columns() {
        let factors = vec![Matrix::zeros(2, 2), Matrix::zeros(3, 3)];
        assert!(matches!(
            CpdModel::new(vec![1.0, 1.0], factors),
            Err(Error::FactorColumns { mode: 2, .. })
        ));
    }

    #[test]
    fn rejects_empty_weights() {
        assert!(matches!(
            CpdModel::new(vec![], vec![Matrix::zeros(2, 0)]),
            Err(Error::InvalidRank)
        ));
    }
}
