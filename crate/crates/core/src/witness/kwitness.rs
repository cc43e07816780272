use rand::seq::index;
use rayon::prelude::*;

use super::single::sample_subset;
use super::{ceil_log2, Result, WitnessError};
use crate::boolmat::{bits, BoolMatrix, ProductOracle, WitnessLists};
use crate::rng;

/// `min(k, W_C(i,j))` distinct witnesses for every entry of `A × B`.
///
/// Entries with at most `k` witnesses report all of them. Otherwise shared
/// inner-index samples at rates `2^-t` are intersected with the entry's
/// witness set and every sample that isolates a single witness contributes
/// it. Any shortfall after all samples is filled with witnesses drawn
/// uniformly from those not yet listed, so the length contract always holds.
pub fn k_witness(a: &BoolMatrix, b: &BoolMatrix, k: usize, seed: u64) -> Result<WitnessLists> {
    let oracle = ProductOracle::new(a, b)?;
    let (p, q, r) = (a.rows(), a.cols(), b.cols());
    if k == 0 || k > q {
        return Err(WitnessError::KOutOfRange { k, n: q });
    }
    let n = p.max(q).max(r);
    let levels = ceil_log2(q);
    let reps = ceil_log2(n) + 1;
    let samples: Vec<Vec<u64>> = (0..=levels)
        .flat_map(|level| (0..reps).map(move |rep| (level, rep)))
        .map(|(level, rep)| {
            let mut rng = rng::stream(seed, rng::tag::K_WITNESS, &[level as u64, rep as u64]);
            sample_subset(q, level, &mut rng)
        })
        .collect();

    let rows: Vec<Vec<Vec<u32>>> = (0..p)
        .into_par_iter()
        .map(|i| {
            let mut isolated = vec![0u64; a.stride()];
            (0..r)
                .map(|j| entry_witnesses(&oracle, &samples, &mut isolated, seed, i, j, k))
                .collect()
        })
        .collect();

    let mut out = WitnessLists::new(p, r, k);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, list) in row.into_iter().enumerate() {
            out.set(i, j, list);
        }
    }
    Ok(out)
}

fn entry_witnesses(
    oracle: &ProductOracle<'_>,
    samples: &[Vec<u64>],
    scratch: &mut [u64],
    seed: u64,
    i: usize,
    j: usize,
    k: usize,
) -> Vec<u32> {
    let set = oracle.witness_set(i, j);
    let total: usize = set.iter().map(|w| w.count_ones() as usize).sum();
    if total <= k {
        return bits::ones(&set).map(|w| w as u32).collect();
    }

    let mut found: Vec<u32> = Vec::with_capacity(k);
    for subset in samples {
        let mut hits = 0;
        for ((dst, x), s) in scratch.iter_mut().zip(&set).zip(subset) {
            *dst = x & s;
            hits += dst.count_ones();
        }
        if hits == 1 {
            let w = bits::ones(scratch).next().expect("one hit") as u32;
            if !found.contains(&w) {
                found.push(w);
                if found.len() == k {
                    return found;
                }
            }
        }
    }

    let rest: Vec<u32> = bits::ones(&set)
        .map(|w| w as u32)
        .filter(|w| !found.contains(w))
        .collect();
    let mut rng = rng::stream(seed, rng::tag::K_WITNESS_FILL, &[i as u64, j as u64]);
    let missing = k - found.len();
    found.extend(
        index::sample(&mut rng, rest.len(), missing)
            .into_iter()
            .map(|idx| rest[idx]),
    );
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_contract(a: &BoolMatrix, b: &BoolMatrix, k: usize, lists: &WitnessLists) {
        let oracle = ProductOracle::new(a, b).unwrap();
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let l = lists.get(i, j);
                assert_eq!(l.len(), k.min(oracle.count(i, j)), "({i},{j})");
                assert!(l.windows(2).all(|w| w[0] > w[1]));
                assert!(l.iter().all(|&w| oracle.is_witness(i, j, w as usize)));
            }
        }
    }

    #[test]
    fn all_ones_k2() {
        let ones = BoolMatrix::ones(8, 8).unwrap();
        let lists = k_witness(&ones, &ones, 2, 1).unwrap();
        check_contract(&ones, &ones, 2, &lists);
        assert!((0..8).all(|i| (0..8).all(|j| lists.get(i, j).len() == 2)));
    }

    #[test]
    fn identity_k5() {
        let b = BoolMatrix::random(10, 0.5, 2).unwrap();
        let id = BoolMatrix::identity(10).unwrap();
        let lists = k_witness(&id, &b, 5, 3).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let expected: Vec<u32> = if b.get(i, j) { vec![i as u32] } else { vec![] };
                assert_eq!(lists.get(i, j), &expected[..]);
            }
        }
    }

    #[test]
    fn random_instances_k4() {
        for seed in 0..4 {
            let a = BoolMatrix::random(64, 0.5, seed).unwrap();
            let b = BoolMatrix::random(64, 0.5, seed + 9).unwrap();
            let lists = k_witness(&a, &b, 4, seed).unwrap();
            check_contract(&a, &b, 4, &lists);
        }
    }

    #[test]
    fn k_range_checked() {
        let m = BoolMatrix::ones(4, 4).unwrap();
        assert_eq!(
            k_witness(&m, &m, 0, 0),
            Err(WitnessError::KOutOfRange { k: 0, n: 4 })
        );
        assert_eq!(
            k_witness(&m, &m, 5, 0),
            Err(WitnessError::KOutOfRange { k: 5, n: 4 })
        );
        assert!(k_witness(&m, &m, 4, 0).is_ok());
    }

    #[test]
    fn reported_witnesses_are_not_just_the_top_k() {
        // The sampler reports isolated witnesses wherever they fall; it must
        // not degenerate into returning the k largest.
        let ones = BoolMatrix::ones(64, 64).unwrap();
        let lists = k_witness(&ones, &ones, 4, 11).unwrap();
        let top = [63u32, 62, 61, 60];
        let not_top = (0..64)
            .flat_map(|i| (0..64).map(move |j| (i, j)))
            .filter(|&(i, j)| lists.get(i, j) != top)
            .count();
        assert!(not_top > 4000);
    }
}
