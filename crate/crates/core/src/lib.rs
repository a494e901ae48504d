//! Tight lower bounds on the CP rank of dense tensors.
//!
//! The matrix rank of any unfolding of a tensor bounds its CP rank from
//! below, and the strongest such bound comes from the unfolding that is as
//! square as possible. This crate finds that maximally square unfolding by
//! searching mode bipartitions, computes its numerical rank, and applies
//! the detection test: when the unfolding is strictly rank-deficient, the
//! bound generically *equals* the tensor rank.
//!
//! The pieces:
//!
//! - [`tensor`]: dense N-way storage, linearization, unfolding, permutation.
//! - [`matrix`]: Khatri-Rao and Kronecker products on dense matrices.
//! - [`cpd`]: weighted CP models, synthesis, and flattened-CPD factors.
//! - [`numrank`]: SVD-based numerical rank with a reportable tolerance.
//! - [`split`]: maximally square bipartition search (exact and sum-DP).
//! - [`detect`]: the rank lower bound, detection verdict and `R_max`.
//! - [`synth`]: seeded known-rank tensor generation and Monte Carlo trials.
//! - [`textfmt`]: the tensor file format and the detectability table.

pub mod cpd;
pub mod detect;
pub mod error;
pub mod matrix;
pub mod numrank;
pub mod split;
pub mod synth;
pub mod tensor;
pub mod textfmt;

pub use cpd::CpdModel;
pub use detect::{all_n_ranks, max_detectable_rank, rank_lower_bound, RankReport};
pub use error::{Error, Result};
pub use matrix::{khatri_rao, kronecker, Matrix};
pub use numrank::{matrix_rank, sylvester_bound, RankResult};
pub use split::{balanced_split, ModeSplit, SplitStrategy};
pub use synth::{detection_trial, synth_tensor, Distribution, RankSampling, TrialOutcome};
pub use tensor::{linearize, DenseTensor, ModePermutation};
pub use textfmt::{rmax_table, write_rmax_csv, TensorFile};
