use rayon::prelude::*;

use super::maxwit::{max_wit_repetitions, max_wit_table};
use super::minimum::{durr_hoyer_min, VirtualMinTable};
use super::{QsimError, QueryLog, Result};
use crate::boolmat::{bool_product, BoolMatrix, MatrixError, WitnessMatrix};
use crate::rng::{self, StreamRng};
use crate::witness::{largest_strip, strip_products, StripDecomposition};

/// Aggregate query statistics of one all-pairs run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QueryStats {
    /// Entries on which a quantum search was run.
    pub entries_searched: usize,
    pub total_queries: u64,
    pub total_grover_iterations: u64,
}

impl QueryStats {
    pub fn mean_queries_per_entry(&self) -> f64 {
        if self.entries_searched == 0 {
            0.0
        } else {
            self.total_queries as f64 / self.entries_searched as f64
        }
    }

    fn record(&mut self, log: &QueryLog) {
        self.entries_searched += 1;
        self.total_queries += log.oracle_queries;
        self.total_grover_iterations += log.grover_iterations;
    }

    fn merge(&mut self, other: &QueryStats) {
        self.entries_searched += other.entries_searched;
        self.total_queries += other.total_queries;
        self.total_grover_iterations += other.total_grover_iterations;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimOutput {
    pub witnesses: WitnessMatrix,
    pub stats: QueryStats,
}

/// Per-entry generator shared by all drivers, so drivers that run the same
/// per-entry procedure produce the same output for the same seed.
fn entry_rng(seed: u64, i: usize, j: usize) -> StreamRng {
    rng::stream(seed, rng::tag::MAX_WIT, &[i as u64, j as u64])
}

enum Entry {
    Searched(Option<usize>, QueryLog),
    /// Settled without a quantum search.
    Classical(Option<usize>),
}

/// Runs `search` on every entry in parallel over rows.
fn run_all_pairs<F>(rows: usize, cols: usize, seed: u64, search: F) -> Result<SimOutput>
where
    F: Fn(usize, usize, &mut StreamRng) -> Result<Entry> + Sync,
{
    let per_row: Vec<(Vec<Option<usize>>, QueryStats)> = (0..rows)
        .into_par_iter()
        .map(|i| {
            let mut stats = QueryStats::default();
            let mut row = Vec::with_capacity(cols);
            for j in 0..cols {
                let mut rng = entry_rng(seed, i, j);
                match search(i, j, &mut rng)? {
                    Entry::Searched(w, log) => {
                        stats.record(&log);
                        row.push(w);
                    }
                    Entry::Classical(w) => row.push(w),
                }
            }
            Ok((row, stats))
        })
        .collect::<Result<_>>()?;

    let mut witnesses = WitnessMatrix::new(rows, cols);
    let mut stats = QueryStats::default();
    for (i, (row, s)) in per_row.into_iter().enumerate() {
        for (j, w) in row.into_iter().enumerate() {
            witnesses.set(i, j, w);
        }
        stats.merge(&s);
    }
    Ok(SimOutput { witnesses, stats })
}

fn check(a: &BoolMatrix, b: &BoolMatrix, beta: u32) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimensionMismatch {
            left: a.cols(),
            right: b.rows(),
        }
        .into());
    }
    if beta == 0 {
        return Err(QsimError::InvalidBeta);
    }
    Ok(())
}

fn scale(a: &BoolMatrix, b: &BoolMatrix) -> usize {
    a.rows().max(a.cols()).max(b.cols())
}

/// MaxWit on every entry.
pub fn algorithm1(a: &BoolMatrix, b: &BoolMatrix, beta: u32, seed: u64) -> Result<SimOutput> {
    check(a, b, beta)?;
    let n = scale(a, b);
    run_all_pairs(a.rows(), b.cols(), seed, |i, j, rng| {
        max_wit_table(a.cols(), n, |k| a.get(i, k) && b.get(k, j), beta, rng)
            .map(|(w, log)| Entry::Searched(w, log))
    })
}

/// Output-sensitive variant: the nonzero set of the product is computed
/// first (classically here) and MaxWit runs only on nonzero entries. The
/// reported statistics cover the searches only.
pub fn algorithm2(a: &BoolMatrix, b: &BoolMatrix, beta: u32, seed: u64) -> Result<SimOutput> {
    check(a, b, beta)?;
    let c = bool_product(a, b)?;
    let n = scale(a, b);
    run_all_pairs(a.rows(), b.cols(), seed, |i, j, rng| {
        if !c.get(i, j) {
            return Ok(Entry::Classical(None));
        }
        max_wit_table(a.cols(), n, |k| a.get(i, k) && b.get(k, j), beta, rng)
            .map(|(w, log)| Entry::Searched(w, log))
    })
}

/// For each column `j` of `B`, the row indices `K_j` with `B[k,j] = 1` in
/// decreasing order; `S_j[s]` is its `s`-th element (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnIndexTables {
    columns: Vec<Vec<u32>>,
}

impl ColumnIndexTables {
    pub fn new(b: &BoolMatrix) -> Self {
        let bt = b.transpose();
        let columns = (0..b.cols()).map(|j| {
            let mut ks: Vec<u32> = bt.row_ones(j).map(|k| k as u32).collect();
            ks.reverse();
            ks
        });
        Self {
            columns: columns.collect(),
        }
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn len(&self, j: usize) -> usize {
        self.columns[j].len()
    }

    pub fn is_empty(&self, j: usize) -> bool {
        self.columns[j].is_empty()
    }
}

fn algorithm3_direct(a: &BoolMatrix, b: &BoolMatrix, beta: u32, seed: u64) -> Result<SimOutput> {
    let tables = ColumnIndexTables::new(b);
    let n = scale(a, b);
    let scale_i = n as i64;
    let reps = max_wit_repetitions(n, beta);
    run_all_pairs(a.rows(), b.cols(), seed, |i, j, rng| {
        let s_j = tables.column(j);
        if s_j.is_empty() {
            return Ok(Entry::Classical(None));
        }
        let table = VirtualMinTable::from_fn(s_j.len(), |s| {
            let k = s_j[s] as i64;
            2 * scale_i
                - if a.get(i, s_j[s] as usize) {
                    scale_i
                } else {
                    0
                }
                - (k + 1)
        })?;
        let mut log = QueryLog::default();
        let mut best: Option<usize> = None;
        for _ in 0..reps {
            let (s, sub) = durr_hoyer_min(&table, rng);
            log.absorb(&sub);
            if best.is_none_or(|b| table.peek(s) < table.peek(b)) {
                best = Some(s);
            }
        }
        let best = best.expect("reps >= 1");
        let value = table.eval(best);
        log.oracle_queries += 1;
        let result = (value < scale_i).then(|| s_j[best] as usize);
        log.succeeded = result.is_some();
        log.result = result;
        Ok(Entry::Searched(result, log))
    })
}

/// Input-sensitive variant: for entry `(i, j)` Dürr–Høyer searches only the
/// `|K_j|` nonzero rows of column `j`. When `A` is the sparser input the
/// product is computed as `(Bᵗ × Aᵗ)ᵗ` so the search runs over it instead.
pub fn algorithm3(a: &BoolMatrix, b: &BoolMatrix, beta: u32, seed: u64) -> Result<SimOutput> {
    check(a, b, beta)?;
    if a.count_ones() < b.count_ones() {
        let out = algorithm3_direct(&b.transpose(), &a.transpose(), beta, seed)?;
        return Ok(SimOutput {
            witnesses: out.witnesses.transpose(),
            stats: out.stats,
        });
    }
    algorithm3_direct(a, b, beta, seed)
}

/// Strip variant: classical strip products `C_p` locate the highest strip
/// holding a witness, and MaxWit runs on that strip only. A strip of width 1
/// needs no search.
pub fn algorithm4(
    a: &BoolMatrix,
    b: &BoolMatrix,
    ell: usize,
    beta: u32,
    seed: u64,
) -> Result<SimOutput> {
    check(a, b, beta)?;
    let strips = StripDecomposition::new(a.cols(), ell)?;
    let products = strip_products(a, b, &strips)?;
    let n = scale(a, b);
    run_all_pairs(a.rows(), b.cols(), seed, |i, j, rng| {
        let Some(p) = largest_strip(&products, i, j) else {
            return Ok(Entry::Classical(None));
        };
        let range = strips.strip(p);
        if range.len() == 1 {
            return Ok(Entry::Classical(Some(range.start)));
        }
        let start = range.start;
        let (w, log) = max_wit_table(
            range.len(),
            n,
            |k| a.get(i, start + k) && b.get(start + k, j),
            beta,
            rng,
        )?;
        Ok(Entry::Searched(w.map(|k| start + k), log))
    })
}
