use std::cmp::Ordering;

use rand::Rng;

use super::{check_vertex, relabel, GraphError, Result, Solved, Solver};
use crate::boolmat::{BoolMatrix, MatrixError, WitnessMatrix};
use crate::rng::{self, tag};

/// Graph with a real weight per vertex. Weight ties are broken by vertex id,
/// so "heavier" is a strict total order.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexWeightedGraph {
    directed: bool,
    adj: BoolMatrix,
    weights: Vec<f64>,
}

impl VertexWeightedGraph {
    pub fn undirected(n: usize, edges: &[(usize, usize)], weights: Vec<f64>) -> Result<Self> {
        Self::build(n, edges, weights, false)
    }

    pub fn directed(n: usize, edges: &[(usize, usize)], weights: Vec<f64>) -> Result<Self> {
        Self::build(n, edges, weights, true)
    }

    fn build(
        n: usize,
        edges: &[(usize, usize)],
        weights: Vec<f64>,
        directed: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if weights.len() != n {
            return Err(GraphError::WeightCount {
                got: weights.len(),
                expected: n,
            });
        }
        if let Some(v) = weights.iter().position(|w| !w.is_finite()) {
            return Err(GraphError::NonFiniteWeight(v));
        }
        let mut adj = BoolMatrix::zeros(n, n)?;
        for &(u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj.set(u, v, true);
            if !directed {
                adj.set(v, u, true);
            }
        }
        Ok(Self {
            directed,
            adj,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    /// Out-neighbours (all neighbours when undirected).
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.row_ones(u)
    }

    /// Each edge once; undirected edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| self.directed || u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn adjacency(&self) -> &BoolMatrix {
        &self.adj
    }

    /// Orders vertices by weight, ties by id.
    pub fn cmp_weight(&self, u: usize, v: usize) -> Ordering {
        self.weights[u].total_cmp(&self.weights[v]).then(u.cmp(&v))
    }

    /// Vertices from lightest to heaviest.
    pub fn ascending_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&u, &v| self.cmp_weight(u, v));
        order
    }

    /// Maximum witnesses of `A × A`, where `A` is the adjacency matrix with
    /// vertices renumbered by `order`, relabelled back to vertex ids.
    fn solve_in_order(&self, order: &[usize], solver: Solver) -> Result<Solved<WitnessMatrix>> {
        let a = self.adj.permuted(order);
        let (w, stats) = solver.solve(&a, &a)?;
        Ok(Solved {
            table: relabel(&w, order),
            stats,
        })
    }
}

/// One edge `{u, v}` (`u < v`) and the apex of the selected triangle on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeApex {
    pub u: usize,
    pub v: usize,
    pub apex: Option<usize>,
}

fn triangles(
    g: &VertexWeightedGraph,
    order: &[usize],
    solver: Solver,
) -> Result<Solved<Vec<EdgeApex>>> {
    if g.is_directed() {
        return Err(GraphError::Directed);
    }
    let solved = g.solve_in_order(order, solver)?;
    let table = g
        .edges()
        .map(|(u, v)| EdgeApex {
            u,
            v,
            apex: solved.table.get(u, v),
        })
        .collect();
    Ok(Solved {
        table,
        stats: solved.stats,
    })
}

/// For every edge, the heaviest vertex adjacent to both endpoints.
pub fn heaviest_triangle_per_edge(
    g: &VertexWeightedGraph,
    solver: Solver,
) -> Result<Solved<Vec<EdgeApex>>> {
    triangles(g, &g.ascending_order(), solver)
}

/// For every edge, the lightest vertex adjacent to both endpoints.
pub fn lightest_triangle_per_edge(
    g: &VertexWeightedGraph,
    solver: Solver,
) -> Result<Solved<Vec<EdgeApex>>> {
    let mut order = g.ascending_order();
    order.reverse();
    triangles(g, &order, solver)
}

/// Best two-edge path `i → w → j` per ordered pair. Only the middle vertex
/// is weighed; the endpoints are not counted.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoEdgePaths {
    pub middles: WitnessMatrix,
    weights: Vec<f64>,
}

impl TwoEdgePaths {
    /// Middle vertex and path weight.
    pub fn get(&self, i: usize, j: usize) -> Option<(usize, f64)> {
        self.middles.get(i, j).map(|w| (w, self.weights[w]))
    }
}

pub fn max_weight_two_edge_paths(
    g: &VertexWeightedGraph,
    solver: Solver,
) -> Result<Solved<TwoEdgePaths>> {
    let solved = g.solve_in_order(&g.ascending_order(), solver)?;
    Ok(Solved {
        table: TwoEdgePaths {
            middles: solved.table,
            weights: g.weights.clone(),
        },
        stats: solved.stats,
    })
}

fn best_middle(g: &VertexWeightedGraph, i: usize, j: usize, prefer: Ordering) -> Option<usize> {
    (0..g.n())
        .filter(|&w| g.has_edge(i, w) && g.has_edge(w, j))
        .reduce(|best, w| {
            if g.cmp_weight(w, best) == prefer {
                w
            } else {
                best
            }
        })
}

pub fn brute_force_heaviest_triangle(g: &VertexWeightedGraph, u: usize, v: usize) -> Option<usize> {
    best_middle(g, u, v, Ordering::Greater)
}

pub fn brute_force_lightest_triangle(g: &VertexWeightedGraph, u: usize, v: usize) -> Option<usize> {
    best_middle(g, u, v, Ordering::Less)
}

pub fn brute_force_two_edge_path(
    g: &VertexWeightedGraph,
    i: usize,
    j: usize,
) -> Option<(usize, f64)> {
    best_middle(g, i, j, Ordering::Greater).map(|w| (w, g.weight(w)))
}

fn random_weights<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

/// `G(n, p)` with independent uniform `[0, 1)` vertex weights.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<VertexWeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MatrixError::InvalidDensity(p).into());
    }
    let mut rng = rng::stream(seed, tag::GRAPH, &[1, n as u64]);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let weights = random_weights(n, &mut rng);
    VertexWeightedGraph::undirected(n, &edges, weights)
}

/// Random digraph: each ordered pair `u ≠ v` is an arc with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<VertexWeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MatrixError::InvalidDensity(p).into());
    }
    let mut rng = rng::stream(seed, tag::GRAPH, &[2, n as u64]);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let weights = random_weights(n, &mut rng);
    VertexWeightedGraph::directed(n, &edges, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(
            VertexWeightedGraph::undirected(2, &[(0, 0)], vec![0.0; 2]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert!(matches!(
            VertexWeightedGraph::undirected(2, &[], vec![0.0]),
            Err(GraphError::WeightCount {
                got: 1,
                expected: 2
            })
        ));
        assert_eq!(
            VertexWeightedGraph::directed(2, &[], vec![0.0, f64::NAN]).unwrap_err(),
            GraphError::NonFiniteWeight(1)
        );
        let g = VertexWeightedGraph::directed(3, &[], vec![0.0; 3]).unwrap();
        assert_eq!(
            heaviest_triangle_per_edge(&g, Solver::Oracle).unwrap_err(),
            GraphError::Directed
        );
    }

    #[test]
    fn triangle_k3() {
        let g = VertexWeightedGraph::undirected(3, &[(0, 1), (1, 2), (0, 2)], vec![1.0, 2.0, 3.0])
            .unwrap();
        let t = heaviest_triangle_per_edge(&g, Solver::Oracle)
            .unwrap()
            .table;
        assert_eq!(
            t,
            vec![
                EdgeApex {
                    u: 0,
                    v: 1,
                    apex: Some(2)
                },
                EdgeApex {
                    u: 0,
                    v: 2,
                    apex: Some(1)
                },
                EdgeApex {
                    u: 1,
                    v: 2,
                    apex: Some(0)
                },
            ]
        );
    }

    #[test]
    fn path_has_no_triangles() {
        let g = VertexWeightedGraph::undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], vec![0.5; 5])
            .unwrap();
        let t = heaviest_triangle_per_edge(&g, Solver::Oracle)
            .unwrap()
            .table;
        assert_eq!(t.len(), 4);
        assert!(t.iter().all(|e| e.apex.is_none()));
    }

    #[test]
    fn ties_broken_by_id() {
        // Both 2 and 3 close a triangle on {0, 1} with equal weight.
        let g = VertexWeightedGraph::undirected(
            4,
            &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)],
            vec![0.0, 0.0, 1.0, 1.0],
        )
        .unwrap();
        let heavy = heaviest_triangle_per_edge(&g, Solver::Oracle)
            .unwrap()
            .table;
        assert_eq!(
            heavy[0],
            EdgeApex {
                u: 0,
                v: 1,
                apex: Some(3)
            }
        );
        let light = lightest_triangle_per_edge(&g, Solver::Oracle)
            .unwrap()
            .table;
        assert_eq!(
            light[0],
            EdgeApex {
                u: 0,
                v: 1,
                apex: Some(2)
            }
        );
    }

    #[test]
    fn random_graphs_match_brute_force() {
        for seed in 0..4 {
            let g = random_graph(64, 0.2, seed).unwrap();
            for solver in [Solver::Oracle, Solver::Strips { ell: 8 }] {
                let heavy = heaviest_triangle_per_edge(&g, solver).unwrap().table;
                let light = lightest_triangle_per_edge(&g, solver).unwrap().table;
                assert_eq!(heavy.len(), g.edges().count());
                for (h, l) in heavy.iter().zip(&light) {
                    assert_eq!(h.apex, brute_force_heaviest_triangle(&g, h.u, h.v));
                    assert_eq!(l.apex, brute_force_lightest_triangle(&g, l.u, l.v));
                    // Symmetric in the edge orientation.
                    assert_eq!(h.apex, brute_force_heaviest_triangle(&g, h.v, h.u));
                }
            }
        }
    }

    #[test]
    fn two_edge_paths() {
        let g = VertexWeightedGraph::directed(3, &[(0, 1), (1, 2)], vec![5.0, 7.0, 1.0]).unwrap();
        let p = max_weight_two_edge_paths(&g, Solver::Oracle).unwrap().table;
        assert_eq!(p.get(0, 2), Some((1, 7.0)));
        assert_eq!(p.get(2, 0), None);
        assert_eq!(p.get(0, 1), None);

        let g = random_digraph(64, 0.1, 5).unwrap();
        let p = max_weight_two_edge_paths(
            &g,
            Solver::Algorithm4 {
                ell: 16,
                beta: 2,
                seed: 1,
            },
        )
        .unwrap();
        assert!(p.stats.is_some());
        let mut wrong = 0;
        for i in 0..64 {
            for j in 0..64 {
                wrong += usize::from(p.table.get(i, j) != brute_force_two_edge_path(&g, i, j));
            }
        }
        assert!(wrong <= 2, "{wrong}");
    }
}
