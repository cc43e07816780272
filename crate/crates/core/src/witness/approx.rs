use rand::Rng;
use rayon::prelude::*;

use super::single::single_witness_product;
use super::strips::StripDecomposition;
use super::{ceil_log2, k_witness, Result, WitnessError};
use crate::boolmat::{BoolMatrix, MatrixError, WitnessMatrix};
use crate::rng;

/// Witnesses of rank at most `ell` for every nonzero entry.
///
/// Each strip product gets single witnesses; the answer for `(i, j)` is the
/// witness found in the highest strip where `C_p[i,j] = 1`. That strip holds
/// the maximum witness and at most `ell` witnesses in total.
pub fn approx_rank_bounded(
    a: &BoolMatrix,
    b: &BoolMatrix,
    ell: usize,
    seed: u64,
) -> Result<WitnessMatrix> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimensionMismatch {
            left: a.cols(),
            right: b.rows(),
        }
        .into());
    }
    let strips = StripDecomposition::new(a.cols(), ell)?;
    let per_strip: Vec<WitnessMatrix> = strips
        .strips()
        .enumerate()
        .map(|(p, range)| {
            let ap = a.column_range(range.start, range.end)?;
            let bp = b.row_range(range.start, range.end)?;
            let strip_seed = rng::derive_seed(seed, rng::tag::RANK_BOUNDED, &[p as u64]);
            single_witness_product(&ap, &bp, strip_seed)
        })
        .collect::<Result<_>>()?;

    let mut out = WitnessMatrix::new(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let top = (0..per_strip.len())
                .rev()
                .find_map(|p| per_strip[p].get(i, j).map(|k| (p, k)));
            if let Some((p, local)) = top {
                out.set(i, j, Some(strips.strip(p).start + local));
            }
        }
    }
    Ok(out)
}

/// Parameters of the multi-witness approximation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApproxParams {
    pub k: usize,
    pub reps: usize,
    pub seed: u64,
}

impl ApproxParams {
    pub fn new(k: usize, reps: usize, seed: u64) -> Result<Self> {
        let params = Self { k, reps, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 4 {
            return Err(WitnessError::KTooSmall(self.k));
        }
        if self.reps == 0 {
            return Err(WitnessError::NoRepetitions);
        }
        Ok(())
    }
}

/// Sparsification rounds of one multi-witness run: `⌈2·log₂ n⌉ + 2`.
pub fn multiwitness_round_count(n: usize) -> usize {
    ceil_log2(n) * 2 + 2
}

/// Rank guaranteed (with constant probability) for a multi-witness result
/// on an entry with `w` witnesses: `4⌈w/k⌉`.
pub fn multiwitness_rank_bound(w: usize, k: usize) -> usize {
    4 * w.div_ceil(k.max(1))
}

/// Clears every set bit independently with probability ½.
fn sparsify(d: &mut BoolMatrix, seed: u64, run: u64, round: u64) {
    let mut rng = rng::stream(seed, rng::tag::SPARSIFY, &[run, round]);
    for i in 0..d.rows() {
        for w in d.row_mut(i) {
            if *w != 0 {
                *w &= rng.gen::<u64>();
            }
        }
    }
}

fn multiwitness_run(
    a: &BoolMatrix,
    b: &BoolMatrix,
    k: usize,
    seed: u64,
    run: u64,
    mut trace: Option<&mut Vec<WitnessMatrix>>,
) -> Result<WitnessMatrix> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimensionMismatch {
            left: a.cols(),
            right: b.rows(),
        }
        .into());
    }
    let n = a.rows().max(a.cols()).max(b.cols());
    let k = k.min(a.cols());
    let mut d = b.clone();
    let mut wit = WitnessMatrix::new(a.rows(), b.cols());
    for round in 0..multiwitness_round_count(n) as u64 {
        if !d.is_zero() {
            let round_seed = rng::derive_seed(seed, rng::tag::MULTIWITNESS, &[run, round]);
            let lists = k_witness(a, &d, k, round_seed)?;
            wit.fold_max(&lists.maxima());
            sparsify(&mut d, seed, run, round);
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(wit.clone());
        }
    }
    Ok(wit)
}

/// One run of the multi-witness algorithm: `D ← B`, then repeatedly fold the
/// largest reported k-witness of `A × D` into `Wit` and halve `D` at random.
///
/// Every reported index is a witness of `A × B` and every nonzero entry gets
/// one. With probability at least `½ − e⁻¹` per entry the rank is at most
/// `4⌈W_C(i,j)/k⌉`. `params.reps` is ignored.
pub fn approx_multiwitness(
    a: &BoolMatrix,
    b: &BoolMatrix,
    params: ApproxParams,
) -> Result<WitnessMatrix> {
    params.validate()?;
    multiwitness_run(a, b, params.k, params.seed, 0, None)
}

/// Same as [`approx_multiwitness`], also returning `Wit` after every round.
pub fn approx_multiwitness_rounds(
    a: &BoolMatrix,
    b: &BoolMatrix,
    params: ApproxParams,
) -> Result<Vec<WitnessMatrix>> {
    params.validate()?;
    let mut trace = Vec::new();
    multiwitness_run(a, b, params.k, params.seed, 0, Some(&mut trace))?;
    Ok(trace)
}

/// Entrywise maximum over `params.reps` independent runs. Run 0 is the run
/// [`approx_multiwitness`] performs for the same seed.
pub fn approx_multiwitness_boosted(
    a: &BoolMatrix,
    b: &BoolMatrix,
    params: ApproxParams,
) -> Result<WitnessMatrix> {
    params.validate()?;
    let runs: Vec<WitnessMatrix> = (0..params.reps as u64)
        .into_par_iter()
        .map(|run| multiwitness_run(a, b, params.k, params.seed, run, None))
        .collect::<Result<_>>()?;
    let mut iter = runs.into_iter();
    let mut best = iter.next().expect("reps >= 1");
    for w in iter {
        best.fold_max(&w);
    }
    Ok(best)
}
