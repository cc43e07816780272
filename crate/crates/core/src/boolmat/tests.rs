use proptest::prelude::*;

use super::*;

/// Scalar triple loop, independent of the packed representation.
fn scalar_max_witness(a: &BoolMatrix, b: &BoolMatrix, i: usize, j: usize) -> Option<usize> {
    (0..a.cols()).rev().find(|&k| a.get(i, k) && b.get(k, j))
}

fn scalar_count(a: &BoolMatrix, b: &BoolMatrix, i: usize, j: usize) -> usize {
    (0..a.cols())
        .filter(|&k| a.get(i, k) && b.get(k, j))
        .count()
}

#[test]
fn product_identity_and_zero() {
    let b = BoolMatrix::random(3, 0.5, 11).unwrap();
    assert_eq!(
        bool_product(&BoolMatrix::identity(3).unwrap(), &b).unwrap(),
        b
    );
    let z = BoolMatrix::zeros(2, 2).unwrap();
    assert!(bool_product(&z, &BoolMatrix::ones(2, 2).unwrap())
        .unwrap()
        .is_zero());
}

#[test]
fn product_small_hand_case() {
    let a = BoolMatrix::from_rows(&[[1, 1], [0, 1]]).unwrap();
    let b = BoolMatrix::from_rows(&[[1, 0], [1, 1]]).unwrap();
    assert_eq!(
        bool_product(&a, &b).unwrap(),
        BoolMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap()
    );
}

#[test]
fn product_rejects_mismatch() {
    let a = BoolMatrix::zeros(2, 3).unwrap();
    let b = BoolMatrix::zeros(2, 3).unwrap();
    assert_eq!(
        bool_product(&a, &b),
        Err(MatrixError::DimensionMismatch { left: 3, right: 2 })
    );
    assert!(max_witness_oracle(&a, &b).is_err());
}

#[test]
fn empty_shape_rejected() {
    assert!(matches!(
        BoolMatrix::zeros(0, 3),
        Err(MatrixError::EmptyShape { .. })
    ));
}

#[test]
fn transpose_cases() {
    let id = BoolMatrix::identity(4).unwrap();
    assert_eq!(id.transpose(), id);
    let m = BoolMatrix::from_rows(&[[1, 1], [0, 0]]).unwrap();
    assert_eq!(
        m.transpose(),
        BoolMatrix::from_rows(&[[1, 0], [1, 0]]).unwrap()
    );
    let r = BoolMatrix::random_rect(7, 3, 0.5, 5).unwrap();
    assert_eq!(r.transpose().transpose(), r);
}

#[test]
fn oracle_identity_and_all_ones() {
    let n = 9;
    let b = BoolMatrix::random(n, 0.4, 3).unwrap();
    let w = max_witness_oracle(&BoolMatrix::identity(n).unwrap(), &b).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(w.get(i, j), b.get(i, j).then_some(i));
        }
    }
    let ones = BoolMatrix::ones(4, 4).unwrap();
    let w = max_witness_oracle(&ones, &ones).unwrap();
    assert!(w.iter().all(|(_, _, k)| k == 3));
    assert_eq!(w.present_count(), 16);
}

#[test]
fn oracle_matches_scalar_loop_random_16() {
    let a = BoolMatrix::random(16, 0.5, 100).unwrap();
    let b = BoolMatrix::random(16, 0.5, 101).unwrap();
    let w = max_witness_oracle(&a, &b).unwrap();
    for i in 0..16 {
        for j in 0..16 {
            assert_eq!(w.get(i, j), scalar_max_witness(&a, &b, i, j));
        }
    }
}

#[test]
fn oracle_matches_scalar_loop_density_grid() {
    for &n in &[1usize, 5, 33, 64] {
        for (d, &density) in [0.01, 0.1, 0.5, 0.9].iter().enumerate() {
            let a = BoolMatrix::random(n, density, 7 * n as u64 + d as u64).unwrap();
            let b = BoolMatrix::random(n, density, 1000 + n as u64 + d as u64).unwrap();
            let w = max_witness_oracle(&a, &b).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(
                        w.get(i, j),
                        scalar_max_witness(&a, &b, i, j),
                        "n={n} d={density} ({i},{j})"
                    );
                }
            }
        }
    }
}

#[test]
fn counts_and_ranks() {
    let ones = BoolMatrix::ones(8, 8).unwrap();
    let id = BoolMatrix::identity(8).unwrap();
    let b = BoolMatrix::random(8, 0.5, 9).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            assert_eq!(witness_count(&ones, &ones, i, j).unwrap(), 8);
            assert_eq!(
                witness_count(&id, &b, i, j).unwrap(),
                usize::from(b.get(i, j))
            );
        }
    }
    assert_eq!(rank_of(&ones, &ones, 2, 5, 0).unwrap(), 8);
    assert_eq!(rank_of(&ones, &ones, 2, 5, 7).unwrap(), 1);
    assert!(matches!(
        rank_of(&id, &ones, 0, 0, 1),
        Err(MatrixError::NotAWitness { .. })
    ));
    assert!(matches!(
        witness_count(&ones, &ones, 8, 0),
        Err(MatrixError::IndexOutOfRange { .. })
    ));
}

#[test]
fn ranks_match_scalar_count_of_greater_witnesses() {
    let a = BoolMatrix::random(40, 0.3, 1).unwrap();
    let b = BoolMatrix::random(40, 0.3, 2).unwrap();
    let oracle = ProductOracle::new(&a, &b).unwrap();
    for i in 0..40 {
        for j in 0..40 {
            assert_eq!(oracle.count(i, j), scalar_count(&a, &b, i, j));
            for k in (0..40).filter(|&k| a.get(i, k) && b.get(k, j)) {
                let greater = (k + 1..40).filter(|&g| a.get(i, g) && b.get(g, j)).count();
                assert_eq!(oracle.rank_of(i, j, k).unwrap(), greater + 1);
            }
            if let Some(m) = oracle.max_witness(i, j) {
                assert_eq!(oracle.rank_of(i, j, m).unwrap(), 1);
            }
        }
    }
}

#[test]
fn random_matrix_density() {
    assert!(random_matrix(10, 0.0, 1).unwrap().is_zero());
    assert_eq!(random_matrix(10, 1.0, 1).unwrap().count_ones(), 100);
    assert!(matches!(
        random_matrix(4, 1.5, 1),
        Err(MatrixError::InvalidDensity(_))
    ));
    assert!(random_matrix(4, -0.1, 1).is_err());
    // Binomial(65536, 0.1): mean 6553.6, sigma ~76.8.
    let m = random_matrix(256, 0.1, 42).unwrap();
    let ones = m.count_ones() as f64;
    let (mean, sigma) = (0.1 * 65536.0, (65536.0f64 * 0.1 * 0.9).sqrt());
    assert!((ones - mean).abs() <= 4.0 * sigma, "popcount {ones}");
    assert_eq!(m, random_matrix(256, 0.1, 42).unwrap());
    assert_ne!(m, random_matrix(256, 0.1, 43).unwrap());
}

#[test]
fn strips_and_permutation() {
    let m = BoolMatrix::random_rect(5, 130, 0.5, 3).unwrap();
    let s = m.column_range(60, 75).unwrap();
    assert!(s.is_canonical());
    for i in 0..5 {
        for j in 0..15 {
            assert_eq!(s.get(i, j), m.get(i, 60 + j));
        }
    }
    let r = m.transpose().row_range(60, 75).unwrap();
    assert_eq!(r, s.transpose());
    assert!(m.column_range(3, 3).is_err());
    let sq = BoolMatrix::random(6, 0.5, 8).unwrap();
    let perm = [5, 3, 1, 0, 2, 4];
    let p = sq.permuted(&perm);
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(p.get(i, j), sq.get(perm[i], perm[j]));
        }
    }
}

fn arb_pair(max_n: usize) -> impl Strategy<Value = (BoolMatrix, BoolMatrix)> {
    (1..=max_n, 1..=max_n, 1..=max_n, 0.0f64..=1.0, any::<u64>()).prop_map(|(p, q, r, d, seed)| {
        (
            BoolMatrix::random_rect(p, q, d, seed).unwrap(),
            BoolMatrix::random_rect(q, r, d, seed ^ 0xFFFF).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_nonzero_iff_witness((a, b) in arb_pair(128)) {
        let c = bool_product(&a, &b).unwrap();
        prop_assert!(c.is_canonical());
        let oracle = ProductOracle::new(&a, &b).unwrap();
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                prop_assert_eq!(c.get(i, j), oracle.count(i, j) >= 1);
            }
        }
    }

    #[test]
    fn product_transpose_identity((a, b) in arb_pair(80)) {
        let lhs = bool_product(&a, &b).unwrap();
        let rhs = bool_product(&b.transpose(), &a.transpose()).unwrap().transpose();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn oracle_matches_scalar_loop((a, b) in arb_pair(64)) {
        let w = max_witness_oracle(&a, &b).unwrap();
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                prop_assert_eq!(w.get(i, j), scalar_max_witness(&a, &b, i, j));
            }
        }
    }

    #[test]
    fn padding_stays_canonical((a, b) in arb_pair(100)) {
        prop_assert!(a.is_canonical() && b.is_canonical());
        prop_assert!(a.transpose().is_canonical());
        prop_assert!(BoolMatrix::ones(a.rows(), a.cols()).unwrap().is_canonical());
        if a.cols() > 1 {
            prop_assert!(a.column_range(1, a.cols()).unwrap().is_canonical());
        }
    }
}
