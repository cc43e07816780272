//! Maximum witnesses of Boolean matrix products.
//!
//! For Boolean matrices `A` (p×q) and `B` (q×r) a *witness* of the product
//! entry `C[i,j]` is an inner index `k` with `A[i,k] ∧ B[k,j]`. This crate
//! computes the largest such index per entry, exactly and approximately, and
//! simulates the quantum query algorithms built on Dürr–Høyer minimum
//! finding with oracle-query accounting.
//!
//! Modules:
//!
//! * [`boolmat`]: bit-packed matrices and the brute-force oracles every other
//!   module is checked against.
//! * [`witness`]: classical solvers (single witness, k-witness, strip
//!   decomposition, bounded-rank approximations).
//! * [`qsim`]: closed-form Grover / BBHT / Dürr–Høyer simulator and the
//!   quantum maximum-witness drivers.
//! * [`graphs`]: all-pairs LCA in dags, heaviest triangles, max-weight
//!   two-edge paths.
//! * [`campaign`], [`verify`], [`io`], [`report`]: statistics campaigns,
//!   result verification and file formats used by the `maxwit` CLI.
//!
//! All indices are 0-based.

pub mod boolmat;
pub mod campaign;
pub mod graphs;
pub mod io;
pub mod qsim;
pub mod report;
pub mod rng;
pub mod stats;
pub mod verify;
pub mod witness;

pub use boolmat::{BoolMatrix, MatrixError, ProductOracle, WitnessLists, WitnessMatrix};
