use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::{check_vertex, inverse, relabel, GraphError, Result, Solved, Solver};
use crate::boolmat::{bool_product, BoolMatrix, MatrixError, WitnessMatrix};
use crate::rng::{self, tag};

/// A directed acyclic graph. Edge `u → v` makes `u` a parent of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    order: Vec<usize>,
    position: Vec<usize>,
}

impl Dag {
    /// Builds the dag, rejecting cycles with a certificate. Duplicate edges
    /// are merged. The topological order is Kahn's with the smallest ready
    /// vertex first, so it is a function of the edge set alone.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            succ[u].push(v);
            pred[v].push(u);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }

        let mut indegree: Vec<usize> = pred.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for &v in &succ[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
        if order.len() < n {
            return Err(GraphError::Cycle(find_cycle(&pred, &indegree)));
        }
        let position = inverse(&order);
        Ok(Self {
            succ,
            pred,
            order,
            position,
        })
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.succ[u]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    /// Vertices in topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// Topological number of `v`.
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// Reflexive ancestors of `v`, by depth-first search over predecessors.
    pub fn ancestors(&self, v: usize) -> Vec<bool> {
        reach(&self.pred, v)
    }

    /// Reflexive descendants of `v`.
    pub fn descendants(&self, v: usize) -> Vec<bool> {
        reach(&self.succ, v)
    }
}

fn reach(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Every vertex left over by Kahn's algorithm has a leftover predecessor, so
/// walking predecessors must revisit a vertex.
fn find_cycle(pred: &[Vec<usize>], indegree: &[usize]) -> Vec<usize> {
    let stuck = |v: usize| indegree[v] > 0;
    let start = (0..pred.len())
        .find(|&v| stuck(v))
        .expect("a vertex remains on a cycle");
    let mut step = vec![usize::MAX; pred.len()];
    let mut walk = Vec::new();
    let mut v = start;
    while step[v] == usize::MAX {
        step[v] = walk.len();
        walk.push(v);
        v = *pred[v]
            .iter()
            .find(|&&u| stuck(u))
            .expect("leftover vertex has a leftover predecessor");
    }
    let mut cycle = walk.split_off(step[v]);
    cycle.reverse();
    cycle
}

/// How the reflexive ancestor relation is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClosureMethod {
    /// One depth-first search per vertex.
    #[default]
    Dfs,
    /// Repeated Boolean squaring of `I ∨ parent`.
    Squaring,
}

/// The ancestor matrix in topological numbering, and the numbering itself.
///
/// Row `i` describes vertex `order[i]`: `A[i,k] = 1` iff `order[k]` is an
/// ancestor of `order[i]` or `k = i`. The maximum witness of `A × Aᵗ` at
/// `(i,j)` is the common ancestor with the largest topological number; its
/// proper descendants all have larger numbers, so none of them is a common
/// ancestor and it is an LCA.
pub fn lca_matrix(dag: &Dag) -> (BoolMatrix, Vec<usize>) {
    lca_matrix_with(dag, ClosureMethod::Dfs)
}

pub fn lca_matrix_with(dag: &Dag, method: ClosureMethod) -> (BoolMatrix, Vec<usize>) {
    let n = dag.n();
    let order = dag.order.clone();
    let a = match method {
        ClosureMethod::Dfs => {
            let rows: Vec<Vec<usize>> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let anc = dag.ancestors(order[i]);
                    (0..n).filter(|&k| anc[order[k]]).collect()
                })
                .collect();
            let mut a = BoolMatrix::zeros(n, n).expect("n > 0");
            for (i, row) in rows.iter().enumerate() {
                for &k in row {
                    a.set(i, k, true);
                }
            }
            a
        }
        ClosureMethod::Squaring => {
            let mut a = BoolMatrix::identity(n).expect("n > 0");
            for (u, v) in dag.edges() {
                a.set(dag.position[v], dag.position[u], true);
            }
            loop {
                let next = bool_product(&a, &a).expect("square");
                if next == a {
                    break a;
                }
                a = next;
            }
        }
    };
    (a, order)
}

/// An LCA for every ordered pair of vertices, absent when the pair has no
/// common ancestor. With an exact solver the returned LCA is the one latest
/// in [`Dag::topological_order`].
pub fn all_pairs_lca(dag: &Dag, solver: Solver) -> Result<Solved<WitnessMatrix>> {
    let (a, order) = lca_matrix(dag);
    let (w, stats) = solver.solve(&a, &a.transpose())?;
    Ok(Solved {
        table: relabel(&w, &order),
        stats,
    })
}

/// All LCAs of `u` and `v`, straight from the definition: common ancestors
/// none of whose proper descendants is a common ancestor.
pub fn brute_force_lca_set(dag: &Dag, u: usize, v: usize) -> Result<BTreeSet<usize>> {
    let n = dag.n();
    check_vertex(u, n)?;
    check_vertex(v, n)?;
    let (au, av) = (dag.ancestors(u), dag.ancestors(v));
    let common: Vec<usize> = (0..n).filter(|&c| au[c] && av[c]).collect();
    Ok(common
        .iter()
        .copied()
        .filter(|&c| {
            let desc = dag.descendants(c);
            !common.iter().any(|&d| d != c && desc[d])
        })
        .collect())
}

/// Random dag on `n` vertices: a hidden random vertex order, each forward
/// pair joined with probability `p`.
pub fn random_dag(n: usize, p: f64, seed: u64) -> Result<Dag> {
    if !(0.0..=1.0).contains(&p) {
        return Err(MatrixError::InvalidDensity(p).into());
    }
    let mut rng = rng::stream(seed, tag::GRAPH, &[0, n as u64]);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((labels[i], labels[j]));
            }
        }
    }
    Dag::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Vertex 0 is isolated; 2 and 3 have two incomparable common ancestors.
    fn sample_dag() -> Dag {
        Dag::new(7, &[(5, 2), (5, 3), (6, 2), (6, 3), (6, 4), (4, 1), (4, 2)]).unwrap()
    }

    #[test]
    fn topological_order_respects_edges() {
        let d = random_dag(40, 0.2, 1).unwrap();
        let order = d.topological_order();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..40).collect::<Vec<_>>());
        for (u, v) in d.edges() {
            assert!(d.position(u) < d.position(v));
        }
    }

    #[test]
    fn cycles_rejected_with_certificate() {
        let err = Dag::new(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap_err();
        let GraphError::Cycle(cycle) = err else {
            panic!("{err:?}")
        };
        let mut c = cycle.clone();
        c.sort_unstable();
        assert_eq!(c, vec![1, 2, 3]);
        for w in 0..cycle.len() {
            let (u, v) = (cycle[w], cycle[(w + 1) % cycle.len()]);
            assert!([(1, 2), (2, 3), (3, 1)].contains(&(u, v)), "{cycle:?}");
        }
        assert_eq!(
            Dag::new(2, &[(1, 1)]).unwrap_err(),
            GraphError::Cycle(vec![1])
        );
        assert!(matches!(
            Dag::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert_eq!(Dag::new(0, &[]).unwrap_err(), GraphError::Empty);
    }

    #[test]
    fn chain() {
        let d = Dag::new(3, &[(0, 1), (1, 2)]).unwrap();
        let lca = all_pairs_lca(&d, Solver::Oracle).unwrap().table;
        assert_eq!(lca.get(2, 2), Some(2));
        assert_eq!(lca.get(1, 2), Some(1));
        assert_eq!(lca.get(0, 2), Some(0));
    }

    #[test]
    fn isolated_vertices_have_no_lca() {
        let d = Dag::new(2, &[]).unwrap();
        let lca = all_pairs_lca(&d, Solver::Oracle).unwrap().table;
        assert_eq!(lca.get(0, 1), None);
        assert_eq!(lca.get(0, 0), Some(0));
        assert_eq!(brute_force_lca_set(&d, 0, 1).unwrap(), BTreeSet::new());
    }

    #[test]
    fn sample_dag_pairs() {
        let d = sample_dag();
        assert_eq!(
            brute_force_lca_set(&d, 2, 3).unwrap(),
            BTreeSet::from([5, 6])
        );
        assert_eq!(brute_force_lca_set(&d, 1, 2).unwrap(), BTreeSet::from([4]));
        assert_eq!(brute_force_lca_set(&d, 1, 3).unwrap(), BTreeSet::from([6]));
        assert_eq!(brute_force_lca_set(&d, 3, 3).unwrap(), BTreeSet::from([3]));
        for solver in [
            Solver::Oracle,
            Solver::Strips { ell: 3 },
            Solver::Algorithm4 {
                ell: 3,
                beta: 2,
                seed: 9,
            },
        ] {
            let lca = all_pairs_lca(&d, solver).unwrap().table;
            assert!([5, 6].contains(&lca.get(2, 3).unwrap()));
            assert_eq!(lca.get(1, 2), Some(4));
            assert_eq!(lca.get(0, 3), None);
        }
    }

    #[test]
    fn closure_methods_agree() {
        for seed in 0..5 {
            let d = random_dag(50, 0.08, seed).unwrap();
            assert_eq!(
                lca_matrix_with(&d, ClosureMethod::Dfs),
                lca_matrix_with(&d, ClosureMethod::Squaring)
            );
        }
    }

    /// Parent-climbing LCA on a rooted tree given by a parent array.
    fn tree_lca(parent: &[Option<usize>], mut u: usize, mut v: usize) -> usize {
        let depth = |mut x: usize| {
            let mut d = 0;
            while let Some(p) = parent[x] {
                x = p;
                d += 1;
            }
            d
        };
        let (mut du, mut dv) = (depth(u), depth(v));
        while du > dv {
            u = parent[u].unwrap();
            du -= 1;
        }
        while dv > du {
            v = parent[v].unwrap();
            dv -= 1;
        }
        while u != v {
            u = parent[u].unwrap();
            v = parent[v].unwrap();
        }
        u
    }

    #[test]
    fn rooted_tree_matches_tree_lca() {
        let mut r = rng::stream(3, 0, &[]);
        let n = 60;
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(&mut r);
        let mut parent = vec![None; n];
        let mut edges = Vec::new();
        for i in 1..n {
            let p = labels[r.gen_range(0..i)];
            parent[labels[i]] = Some(p);
            edges.push((p, labels[i]));
        }
        let d = Dag::new(n, &edges).unwrap();
        let lca = all_pairs_lca(&d, Solver::Strips { ell: 8 }).unwrap().table;
        for u in 0..n {
            for v in 0..n {
                assert_eq!(lca.get(u, v), Some(tree_lca(&parent, u, v)), "({u},{v})");
            }
        }
    }

    #[test]
    fn random_dags_return_members_of_lca_set() {
        for seed in 0..4 {
            let d = random_dag(48, 0.1, seed).unwrap();
            let lca = all_pairs_lca(&d, Solver::Oracle).unwrap().table;
            for u in 0..48 {
                for v in 0..48 {
                    let set = brute_force_lca_set(&d, u, v).unwrap();
                    match lca.get(u, v) {
                        None => assert!(set.is_empty()),
                        Some(w) => {
                            assert!(set.contains(&w));
                            // Exact solvers return the topologically latest LCA.
                            assert_eq!(Some(w), set.iter().copied().max_by_key(|&c| d.position(c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lca_set_members_are_incomparable() {
        let d = random_dag(32, 0.15, 7).unwrap();
        for u in 0..32 {
            for v in 0..32 {
                let set: Vec<usize> = brute_force_lca_set(&d, u, v).unwrap().into_iter().collect();
                for &x in &set {
                    let desc = d.descendants(x);
                    assert!(set.iter().all(|&y| y == x || !desc[y]));
                }
            }
        }
    }
}
