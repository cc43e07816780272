//! Classical witness solvers.
//!
//! * [`single_witness_product`]: one arbitrary witness per nonzero entry by
//!   geometric column sampling.
//! * [`k_witness`]: up to `k` distinct witnesses per entry.
//! * [`exact_max_witness_strips`]: exact maximum witnesses through vertical
//!   and horizontal strip products.
//! * [`approx_rank_bounded`]: witnesses of rank at most `ℓ`.
//! * [`approx_multiwitness`] / [`approx_multiwitness_boosted`]: witnesses of
//!   rank `O(⌈W/k⌉)` by repeated k-witness runs on a sparsified `B`.

mod approx;
mod kwitness;
mod single;
mod strips;

use thiserror::Error;

use crate::boolmat::MatrixError;

pub use approx::{
    approx_multiwitness, approx_multiwitness_boosted, approx_multiwitness_rounds,
    approx_rank_bounded, multiwitness_rank_bound, multiwitness_round_count, ApproxParams,
};
pub use kwitness::k_witness;
pub use single::single_witness_product;
pub use strips::{
    default_strip_width, exact_max_witness_strips, largest_strip, strip_products,
    StripDecomposition,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("strip width {ell} outside [1, {n}]")]
    StripWidth { ell: usize, n: usize },
    #[error("k = {k} outside [1, {n}]")]
    KOutOfRange { k: usize, n: usize },
    #[error("k = {0} must be at least 4")]
    KTooSmall(usize),
    #[error("repetition count must be at least 1")]
    NoRepetitions,
}

pub type Result<T, E = WitnessError> = std::result::Result<T, E>;

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub(crate) fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}
