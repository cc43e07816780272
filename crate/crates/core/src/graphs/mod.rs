//! Graph problems reduced to maximum witnesses: all-pairs LCA in dags,
//! heaviest (or lightest) triangle through each edge, and maximum-weight
//! two-edge paths in vertex-weighted graphs.
//!
//! Every reduction has a brute-force counterpart working directly on the
//! graph, used as a verifier.

mod dag;
mod weighted;

use thiserror::Error;

use crate::boolmat::{max_witness_oracle, BoolMatrix, MatrixError, WitnessMatrix};
use crate::qsim::{algorithm4, QsimError, QueryStats};
use crate::witness::{exact_max_witness_strips, WitnessError};

pub use dag::{
    all_pairs_lca, brute_force_lca_set, lca_matrix, lca_matrix_with, random_dag, ClosureMethod, Dag,
};
pub use weighted::{
    brute_force_heaviest_triangle, brute_force_lightest_triangle, brute_force_two_edge_path,
    heaviest_triangle_per_edge, lightest_triangle_per_edge, max_weight_two_edge_paths,
    random_digraph, random_graph, EdgeApex, TwoEdgePaths, VertexWeightedGraph,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph has a cycle: {}", format_cycle(.0))]
    Cycle(Vec<usize>),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { got: usize, expected: usize },
    #[error("weight of vertex {0} is not finite")]
    NonFiniteWeight(usize),
    #[error("triangles need an undirected graph")]
    Directed,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

fn format_cycle(cycle: &[usize]) -> String {
    let mut s: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
    if let Some(first) = cycle.first() {
        s.push(first.to_string());
    }
    s.join(" -> ")
}

pub type Result<T, E = GraphError> = std::result::Result<T, E>;

/// Maximum-witness solver used by the graph reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Oracle,
    Strips { ell: usize },
    Algorithm4 { ell: usize, beta: u32, seed: u64 },
}

impl Solver {
    /// Maximum witnesses of `a × b`, with query statistics for the simulated
    /// quantum solver.
    pub fn solve(
        self,
        a: &BoolMatrix,
        b: &BoolMatrix,
    ) -> Result<(WitnessMatrix, Option<QueryStats>)> {
        Ok(match self {
            Solver::Oracle => (max_witness_oracle(a, b)?, None),
            Solver::Strips { ell } => (exact_max_witness_strips(a, b, ell)?, None),
            Solver::Algorithm4 { ell, beta, seed } => {
                let out = algorithm4(a, b, ell, beta, seed)?;
                (out.witnesses, Some(out.stats))
            }
        })
    }
}

/// A witness table relabelled into graph vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Solved<T> {
    pub table: T,
    pub stats: Option<QueryStats>,
}

/// Maps a witness table computed on `order`-renumbered vertices back to the
/// original labels: `out[order[i], order[j]] = order[w[i, j]]`.
fn relabel(w: &WitnessMatrix, order: &[usize]) -> WitnessMatrix {
    let mut out = WitnessMatrix::new(w.rows(), w.cols());
    for (i, j, k) in w.iter() {
        out.set(order[i], order[j], Some(order[k]));
    }
    out
}

/// `position[order[i]] = i`.
fn inverse(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

fn check_vertex(v: usize, n: usize) -> Result<()> {
    if v >= n {
        Err(GraphError::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}
