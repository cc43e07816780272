use rand::Rng;

use super::{ceil_log2, Result};
use crate::boolmat::{bits, bool_product, BoolMatrix, WitnessMatrix};
use crate::rng::{self, StreamRng};

/// Random subset of `[0, len)` keeping each index with probability `2^-level`.
pub(crate) fn sample_subset(len: usize, level: usize, rng: &mut StreamRng) -> Vec<u64> {
    let mut mask = vec![0u64; bits::words_for(len)];
    if level == 0 {
        mask.fill(!0);
    } else {
        let shift = 64 - level.min(63) as u32;
        for k in 0..len {
            if rng.gen::<u64>() >> shift == 0 {
                bits::set(&mut mask, k);
            }
        }
    }
    if let Some(last) = mask.last_mut() {
        *last &= bits::tail_mask(len);
    }
    mask
}

/// One witness for every nonzero entry of `A × B`.
///
/// For sampling rates `2^-t`, `t = 0..=⌈log₂ q⌉`, and `⌈log₂ n⌉ + 1` random
/// inner-index subsets `S` per rate, the integer products
/// `count(i,j) = Σ_{k∈S} A[i,k]B[k,j]` and `sum(i,j) = Σ_{k∈S} k·A[i,k]B[k,j]`
/// are accumulated; wherever `count = 1`, `sum` is a witness. Entries that no
/// sample isolates fall back to a bitset scan, so the result is total.
pub fn single_witness_product(a: &BoolMatrix, b: &BoolMatrix, seed: u64) -> Result<WitnessMatrix> {
    let c = bool_product(a, b)?;
    let (p, q, r) = (a.rows(), a.cols(), b.cols());
    let n = p.max(q).max(r);
    let levels = ceil_log2(q);
    let reps = ceil_log2(n) + 1;

    let mut out = WitnessMatrix::new(p, r);
    let mut unresolved = c;
    let mut pending: Vec<usize> = (0..p).map(|i| unresolved.row_count(i)).collect();
    let mut remaining: usize = pending.iter().sum();

    let mut count = vec![0u32; r];
    let mut sum = vec![0u64; r];
    let mut picked = vec![0u64; a.stride()];

    'levels: for level in 0..=levels {
        for rep in 0..reps {
            if remaining == 0 {
                break 'levels;
            }
            let mut rng = rng::stream(seed, rng::tag::SINGLE_WITNESS, &[level as u64, rep as u64]);
            let subset = sample_subset(q, level, &mut rng);
            #[allow(clippy::needless_range_loop)]
            for i in 0..p {
                if pending[i] == 0 {
                    continue;
                }
                count.fill(0);
                sum.fill(0);
                for ((dst, x), s) in picked.iter_mut().zip(a.row(i)).zip(&subset) {
                    *dst = x & s;
                }
                for k in bits::ones(&picked) {
                    for j in b.row_ones(k) {
                        count[j] += 1;
                        sum[j] += k as u64;
                    }
                }
                let solved: Vec<usize> =
                    unresolved.row_ones(i).filter(|&j| count[j] == 1).collect();
                for j in solved {
                    out.set(i, j, Some(sum[j] as usize));
                    unresolved.set(i, j, false);
                    pending[i] -= 1;
                    remaining -= 1;
                }
            }
        }
    }

    if remaining > 0 {
        let bt = b.transpose();
        for i in 0..p {
            let cols: Vec<usize> = unresolved.row_ones(i).collect();
            for j in cols {
                out.set(i, j, bits::and_highest(a.row(i), bt.row(j)));
            }
        }
    }
    Ok(out)
}
