use rand::Rng;

use super::QueryLog;

/// A search space as the simulator sees it.
///
/// `nth_marked` / `nth_unmarked` give the simulator uncharged access to the
/// marked set so it can sample from the exact post-measurement law; only
/// `is_marked`, the classical check of a measured index, is an oracle query.
pub trait SearchSpace {
    fn len(&self) -> usize;
    fn marked_count(&self) -> usize;
    fn nth_marked(&self, r: usize) -> usize;
    fn nth_unmarked(&self, r: usize) -> usize;
    fn is_marked(&self, k: usize) -> bool;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Explicit marked subset of `[0, N)` built from a predicate.
#[derive(Clone, Debug)]
pub struct MarkedSet {
    flags: Vec<bool>,
    marked: Vec<usize>,
    unmarked: Vec<usize>,
}

impl MarkedSet {
    pub fn new(n: usize, marked: impl Fn(usize) -> bool) -> Self {
        let flags: Vec<bool> = (0..n).map(marked).collect();
        let (m, u): (Vec<usize>, Vec<usize>) = (0..n).partition(|&k| flags[k]);
        Self {
            flags,
            marked: m,
            unmarked: u,
        }
    }
}

impl SearchSpace for MarkedSet {
    fn len(&self) -> usize {
        self.flags.len()
    }
    fn marked_count(&self) -> usize {
        self.marked.len()
    }
    fn nth_marked(&self, r: usize) -> usize {
        self.marked[r]
    }
    fn nth_unmarked(&self, r: usize) -> usize {
        self.unmarked[r]
    }
    fn is_marked(&self, k: usize) -> bool {
        self.flags[k]
    }
}

/// `sin²((2j+1)θ)` with `θ = arcsin √(t/N)`.
pub fn marked_probability(n: usize, t: usize, iterations: u64) -> f64 {
    if t == 0 {
        return 0.0;
    }
    if t >= n {
        return 1.0;
    }
    let theta = (t as f64 / n as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Measures after `iterations` Grover iterations and checks the outcome.
///
/// Charges `iterations + 1` queries. Returns the measured index and whether
/// the check found it marked.
pub fn grover_sample<S, R>(
    space: &S,
    iterations: u64,
    rng: &mut R,
    log: &mut QueryLog,
) -> (usize, bool)
where
    S: SearchSpace + ?Sized,
    R: Rng + ?Sized,
{
    let n = space.len();
    let t = space.marked_count();
    assert!(n >= 1, "empty search space");
    let hit = t > 0 && (t == n || rng.gen::<f64>() < marked_probability(n, t, iterations));
    let index = if hit {
        space.nth_marked(rng.gen_range(0..t))
    } else {
        space.nth_unmarked(rng.gen_range(0..n - t))
    };
    log.grover_iterations += iterations;
    log.oracle_queries += iterations + 1;
    let verified = space.is_marked(index);
    (index, verified)
}

/// Exponential search for a marked index with unknown marked count: draw
/// `j` uniformly from `[0, m)`, sample, and on failure grow `m` by
/// `growth`, capped at `√N`. Stops when the next sample would exceed
/// `budget` queries.
pub fn bbht_search_with<S, R>(
    space: &S,
    rng: &mut R,
    budget: u64,
    growth: f64,
) -> (Option<usize>, QueryLog)
where
    S: SearchSpace + ?Sized,
    R: Rng + ?Sized,
{
    let mut log = QueryLog::default();
    let cap = (space.len() as f64).sqrt().max(1.0);
    let mut m = 1.0f64;
    loop {
        let j = rng.gen_range(0..m.ceil() as u64);
        if log.oracle_queries + j + 1 > budget {
            return (None, log);
        }
        let (k, marked) = grover_sample(space, j, rng, &mut log);
        if marked {
            log.succeeded = true;
            log.result = Some(k);
            return (Some(k), log);
        }
        m = (m * growth).min(cap);
    }
}

/// [`bbht_search_with`] with growth factor 6/5.
pub fn bbht_search<S, R>(space: &S, rng: &mut R, budget: u64) -> (Option<usize>, QueryLog)
where
    S: SearchSpace + ?Sized,
    R: Rng + ?Sized,
{
    bbht_search_with(space, rng, budget, super::SearchConfig::default().growth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn forced_success_n4_t1() {
        assert!((marked_probability(4, 1, 1) - 1.0).abs() < 1e-12);
        let space = MarkedSet::new(4, |k| k == 2);
        let mut r = rng::stream(1, 0, &[]);
        for _ in 0..200 {
            let mut log = QueryLog::default();
            assert_eq!(grover_sample(&space, 1, &mut r, &mut log), (2, true));
            assert_eq!((log.oracle_queries, log.grover_iterations), (2, 1));
        }
    }

    #[test]
    fn nothing_marked_never_hits() {
        let space = MarkedSet::new(16, |_| false);
        let mut r = rng::stream(2, 0, &[]);
        let mut log = QueryLog::default();
        for j in 0..20 {
            assert!(!grover_sample(&space, j, &mut r, &mut log).1);
        }
    }

    #[test]
    fn zero_iterations_is_classical_sampling() {
        // N=64, t=16, j=0: p = 1/4. Over 10^4 trials sigma = sqrt(10^4·3/16) ≈ 43.3.
        let space = MarkedSet::new(64, |k| k % 4 == 0);
        let mut r = rng::stream(3, 0, &[]);
        let mut log = QueryLog::default();
        let hits = (0..10_000)
            .filter(|_| grover_sample(&space, 0, &mut r, &mut log).1)
            .count();
        assert!((hits as f64 - 2500.0).abs() <= 3.0 * 43.302, "{hits}");
    }

    #[test]
    fn frequency_matches_law_on_grid() {
        let trials = 4000u32;
        let mut r = rng::stream(4, 0, &[]);
        for &(n, t) in &[(64usize, 1usize), (64, 3), (256, 5), (1000, 17)] {
            let space = MarkedSet::new(n, |k| k < t);
            for j in [0u64, 1, 2, 5, 9] {
                let p = marked_probability(n, t, j);
                let mut log = QueryLog::default();
                let hits = (0..trials)
                    .filter(|_| grover_sample(&space, j, &mut r, &mut log).1)
                    .count() as f64;
                let sigma = (trials as f64 * p * (1.0 - p)).sqrt().max(1.0);
                assert!(
                    (hits - trials as f64 * p).abs() <= 3.0 * sigma + 1.0,
                    "n={n} t={t} j={j}: {hits} vs p={p}"
                );
            }
        }
    }

    #[test]
    fn bbht_all_marked_first_sample() {
        let space = MarkedSet::new(100, |_| true);
        let mut r = rng::stream(5, 0, &[]);
        let (k, log) = bbht_search(&space, &mut r, 1000);
        assert!(k.is_some());
        assert_eq!((log.oracle_queries, log.grover_iterations), (1, 0));
        assert!(log.succeeded && log.result == k);
    }

    #[test]
    fn bbht_none_marked_exhausts_budget() {
        let space = MarkedSet::new(100, |_| false);
        let mut r = rng::stream(6, 0, &[]);
        let (k, log) = bbht_search(&space, &mut r, 500);
        assert_eq!(k, None);
        assert!(!log.succeeded);
        assert!(log.oracle_queries <= 500 && log.oracle_queries > 500 - 12);
    }

    #[test]
    fn bbht_single_marked_mean_queries() {
        let n = 1024;
        let space = MarkedSet::new(n, |k| k == 777);
        let mut r = rng::stream(7, 0, &[]);
        let trials = 1000;
        let mut total = 0u64;
        for _ in 0..trials {
            let (k, log) = bbht_search(&space, &mut r, u64::MAX);
            assert_eq!(k, Some(777));
            total += log.oracle_queries;
        }
        let mean = total as f64 / trials as f64;
        assert!(mean <= 9.0 * (n as f64).sqrt(), "mean queries {mean}");
    }
}
