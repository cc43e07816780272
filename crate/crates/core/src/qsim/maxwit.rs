use rand::Rng;

use super::minimum::{durr_hoyer_min, VirtualMinTable};
use super::{QsimError, QueryLog, Result};
use crate::boolmat::{BoolMatrix, MatrixError};

/// Dürr–Høyer repetitions for error probability `n^-beta`: `⌈β·log₂ n⌉`, at least 1.
pub fn max_wit_repetitions(n: usize, beta: u32) -> usize {
    ((beta as f64) * (n.max(1) as f64).log2()).ceil().max(1.0) as usize
}

/// Maximum-witness search over an abstract product row.
///
/// `witness(k)` says whether inner index `k ∈ [0, q)` is a witness; `n` is
/// the scale used by the table `T[k] = 2n − n·[k is a witness] − (k+1)`.
/// Witnesses map to `[0, n)`, non-witnesses to `[n, 2n)`, and larger indices
/// to smaller values, so the argmin is the maximum witness when one exists.
pub fn max_wit_table<R: Rng + ?Sized>(
    q: usize,
    n: usize,
    witness: impl Fn(usize) -> bool,
    beta: u32,
    rng: &mut R,
) -> Result<(Option<usize>, QueryLog)> {
    if beta == 0 {
        return Err(QsimError::InvalidBeta);
    }
    let scale = n as i64;
    let table = VirtualMinTable::from_fn(q, |k| {
        2 * scale - if witness(k) { scale } else { 0 } - (k as i64 + 1)
    })?;
    let mut log = QueryLog::default();
    let mut best: Option<usize> = None;
    for _ in 0..max_wit_repetitions(n, beta) {
        let (k, sub) = durr_hoyer_min(&table, rng);
        log.absorb(&sub);
        // Each run's result value was read when it became the threshold.
        if best.is_none_or(|b| table.peek(k) < table.peek(b)) {
            best = Some(k);
        }
    }
    let best = best.expect("at least one repetition");
    // Final comparison against n.
    let value = table.eval(best);
    log.oracle_queries += 1;
    let result = (value < scale).then_some(best);
    log.succeeded = result.is_some();
    log.result = result;
    Ok((result, log))
}

/// Maximum witness of `C[i,j]` for `A` (p×q) and `B` (q×r), or `None`.
///
/// Uses `n = max(p, q, r)` and `⌈β·log₂ n⌉` Dürr–Høyer runs, returning a
/// correct answer with probability at least `1 − n^-β`.
pub fn max_wit<R: Rng + ?Sized>(
    a: &BoolMatrix,
    b: &BoolMatrix,
    i: usize,
    j: usize,
    beta: u32,
    rng: &mut R,
) -> Result<(Option<usize>, QueryLog)> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimensionMismatch {
            left: a.cols(),
            right: b.rows(),
        }
        .into());
    }
    a.try_get(i, 0)?;
    b.try_get(0, j)?;
    let n = a.rows().max(a.cols()).max(b.cols());
    max_wit_table(a.cols(), n, |k| a.get(i, k) && b.get(k, j), beta, rng)
}
