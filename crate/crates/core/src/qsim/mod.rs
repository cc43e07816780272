//! Query-counting simulation of Grover search, BBHT exponential search and
//! Dürr–Høyer minimum finding, and the quantum maximum-witness algorithms
//! built on them.
//!
//! Grover runs are not simulated as state vectors. After `j` iterations on a
//! space of size `N` with `t` marked items, measurement yields a marked item
//! with probability `sin²((2j+1)θ)`, `θ = arcsin √(t/N)`, uniformly among the
//! marked items and otherwise uniformly among the unmarked ones. The sampler
//! draws exactly from that law.
//!
//! Query accounting:
//!
//! * one Grover iteration is one oracle query;
//! * classically checking the measured index is one query;
//! * reading a table value (a Dürr–Høyer threshold, the final MaxWit
//!   comparison) is one query.
//!
//! Reported costs are query counts, never wall-clock time.

mod algorithms;
mod grover;
mod maxwit;
mod minimum;
mod tradeoff;

use thiserror::Error;

use crate::boolmat::MatrixError;
use crate::witness::WitnessError;

pub use algorithms::{
    algorithm1, algorithm2, algorithm3, algorithm4, ColumnIndexTables, QueryStats, SimOutput,
};
pub use grover::{
    bbht_search, bbht_search_with, grover_sample, marked_probability, MarkedSet, SearchSpace,
};
pub use maxwit::{max_wit, max_wit_repetitions, max_wit_table};
pub use minimum::{
    durr_hoyer_min, durr_hoyer_min_with, SearchConfig, ThresholdSpace, VirtualMinTable,
};
pub use tradeoff::{PreprocessingLevel, TradeoffAnswer, TradeoffIndex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("search table must be nonempty")]
    EmptyTable,
    #[error("table values at {first} and {second} coincide")]
    DuplicateValues { first: usize, second: usize },
    #[error("beta must be at least 1")]
    InvalidBeta,
}

pub type Result<T, E = QsimError> = std::result::Result<T, E>;

/// Query accounting for one simulated search.
///
/// For searches (`bbht_search`, `max_wit`) `succeeded` means a verified
/// result was returned. For `durr_hoyer_min` it records whether the result
/// is the true argmin; the algorithm itself never consults it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryLog {
    pub oracle_queries: u64,
    pub grover_iterations: u64,
    pub succeeded: bool,
    pub result: Option<usize>,
}

impl QueryLog {
    /// Adds the counters of `other`; outcome fields are left alone.
    pub fn absorb(&mut self, other: &QueryLog) {
        self.oracle_queries += other.oracle_queries;
        self.grover_iterations += other.grover_iterations;
    }
}
