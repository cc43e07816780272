//! Checking solver output against the brute-force oracle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolmat::{BoolMatrix, MatrixError, ProductOracle, WitnessLists, WitnessMatrix};
use crate::witness::multiwitness_rank_bound;

/// What a result promises about each reported witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankBound {
    /// The maximum witness.
    Exact,
    /// Rank at most `ell`.
    AtMost { ell: usize },
    /// Rank at most `4⌈W/k⌉`.
    Multiwitness { k: usize },
    /// Any witness.
    Any,
}

impl RankBound {
    fn limit(self, w: usize) -> usize {
        match self {
            RankBound::Exact => 1,
            RankBound::AtMost { ell } => ell,
            RankBound::Multiwitness { k } => multiwitness_rank_bound(w, k),
            RankBound::Any => usize::MAX,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub i: usize,
    pub j: usize,
    pub expected: Option<usize>,
    pub got: Option<usize>,
}

/// Kept examples per category.
const SAMPLE_LIMIT: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub entries: usize,
    /// Entries whose value differs from the exact maximum witness.
    pub disagreements: usize,
    pub disagreement_rate: f64,
    /// Reported indices that are not witnesses (including reports on zero entries).
    pub invalid_witnesses: usize,
    /// Nonzero entries reported as having no witness.
    pub missing: usize,
    /// Valid witnesses whose rank exceeds the promised bound.
    pub rank_violations: usize,
    pub rank_violation_rate: f64,
    pub invalid_samples: Vec<Disagreement>,
    pub disagreement_samples: Vec<Disagreement>,
}

impl VerifyReport {
    /// No invalid witness, no missing entry, no rank violation.
    pub fn is_valid(&self) -> bool {
        self.invalid_witnesses == 0 && self.missing == 0 && self.rank_violations == 0
    }
}

#[derive(Default)]
struct RowTally {
    disagreements: usize,
    invalid: usize,
    missing: usize,
    rank_violations: usize,
    invalid_samples: Vec<Disagreement>,
    disagreement_samples: Vec<Disagreement>,
}

pub fn verify_witnesses(
    a: &BoolMatrix,
    b: &BoolMatrix,
    got: &WitnessMatrix,
    bound: RankBound,
) -> Result<VerifyReport, MatrixError> {
    let oracle = ProductOracle::new(a, b)?;
    if got.rows() != oracle.rows() || got.cols() != oracle.cols() {
        return Err(MatrixError::DimensionMismatch {
            left: got.rows() * got.cols(),
            right: oracle.rows() * oracle.cols(),
        });
    }
    let rows: Vec<RowTally> = (0..oracle.rows())
        .into_par_iter()
        .map(|i| {
            let mut t = RowTally::default();
            for j in 0..oracle.cols() {
                let expected = oracle.max_witness(i, j);
                let reported = got.get(i, j);
                let d = Disagreement {
                    i,
                    j,
                    expected,
                    got: reported,
                };
                if reported != expected {
                    t.disagreements += 1;
                    if t.disagreement_samples.len() < SAMPLE_LIMIT {
                        t.disagreement_samples.push(d);
                    }
                }
                match reported {
                    None if expected.is_some() => t.missing += 1,
                    None => {}
                    Some(k) if k >= oracle.inner() || !oracle.is_witness(i, j, k) => {
                        t.invalid += 1;
                        if t.invalid_samples.len() < SAMPLE_LIMIT {
                            t.invalid_samples.push(d);
                        }
                    }
                    Some(k) => {
                        let rank = oracle.rank_of(i, j, k).expect("valid witness");
                        if rank > bound.limit(oracle.count(i, j)) {
                            t.rank_violations += 1;
                        }
                    }
                }
            }
            t
        })
        .collect();

    let entries = oracle.rows() * oracle.cols();
    let mut report = VerifyReport {
        entries,
        ..VerifyReport::default()
    };
    for t in rows {
        report.disagreements += t.disagreements;
        report.invalid_witnesses += t.invalid;
        report.missing += t.missing;
        report.rank_violations += t.rank_violations;
        for (dst, src) in [
            (&mut report.invalid_samples, t.invalid_samples),
            (&mut report.disagreement_samples, t.disagreement_samples),
        ] {
            let room = SAMPLE_LIMIT - dst.len();
            dst.extend(src.into_iter().take(room));
        }
    }
    report.disagreement_rate = report.disagreements as f64 / entries as f64;
    report.rank_violation_rate = report.rank_violations as f64 / entries as f64;
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListReport {
    pub entries: usize,
    /// Lists whose length is not `min(k, W)`.
    pub wrong_length: usize,
    /// Lists containing a non-witness or not strictly decreasing.
    pub invalid: usize,
}

impl ListReport {
    pub fn is_valid(&self) -> bool {
        self.wrong_length == 0 && self.invalid == 0
    }
}

/// Checks the k-witness contract: `min(k, W)` distinct genuine witnesses per
/// entry, listed in decreasing order.
pub fn verify_lists(
    a: &BoolMatrix,
    b: &BoolMatrix,
    lists: &WitnessLists,
) -> Result<ListReport, MatrixError> {
    let oracle = ProductOracle::new(a, b)?;
    let tallies: Vec<(usize, usize)> = (0..oracle.rows())
        .into_par_iter()
        .map(|i| {
            let (mut wrong, mut invalid) = (0, 0);
            for j in 0..oracle.cols() {
                let list = lists.get(i, j);
                if list.len() != lists.k().min(oracle.count(i, j)) {
                    wrong += 1;
                }
                let genuine = list
                    .iter()
                    .all(|&k| (k as usize) < oracle.inner() && oracle.is_witness(i, j, k as usize));
                if !genuine || list.windows(2).any(|w| w[0] <= w[1]) {
                    invalid += 1;
                }
            }
            (wrong, invalid)
        })
        .collect();
    Ok(ListReport {
        entries: oracle.rows() * oracle.cols(),
        wrong_length: tallies.iter().map(|t| t.0).sum(),
        invalid: tallies.iter().map(|t| t.1).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolmat::max_witness_oracle;
    use crate::witness::{approx_rank_bounded, k_witness};

    #[test]
    fn oracle_against_itself_is_clean() {
        let a = BoolMatrix::random(40, 0.2, 1).unwrap();
        let b = BoolMatrix::random(40, 0.2, 2).unwrap();
        let w = max_witness_oracle(&a, &b).unwrap();
        let r = verify_witnesses(&a, &b, &w, RankBound::Exact).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.disagreements, 0);
        assert!(r.disagreement_samples.is_empty());
    }

    #[test]
    fn corrupted_entries_flagged() {
        let a = BoolMatrix::random(24, 0.3, 3).unwrap();
        let b = BoolMatrix::random(24, 0.3, 4).unwrap();
        let oracle = ProductOracle::new(&a, &b).unwrap();
        let mut w = oracle.max_witnesses();
        let (i, j, k) = w.iter().next().unwrap();
        let bad = (0..24).find(|&x| !oracle.is_witness(i, j, x)).unwrap();
        w.set(i, j, Some(bad));
        let (zi, zj) = (0..24)
            .flat_map(|i| (0..24).map(move |j| (i, j)))
            .find(|&(i, j)| oracle.count(i, j) == 0)
            .unwrap();
        w.set(zi, zj, Some(0));
        let r = verify_witnesses(&a, &b, &w, RankBound::Any).unwrap();
        assert_eq!(r.invalid_witnesses, 2);
        assert_eq!(r.disagreements, 2);
        assert!(r.invalid_samples.contains(&Disagreement {
            i,
            j,
            expected: Some(k),
            got: Some(bad)
        }));
        assert!(!r.is_valid());

        let mut w = oracle.max_witnesses();
        w.set(i, j, None);
        let r = verify_witnesses(&a, &b, &w, RankBound::Any).unwrap();
        assert_eq!((r.missing, r.invalid_witnesses), (1, 0));
    }

    #[test]
    fn rank_bounds() {
        let a = BoolMatrix::random(64, 0.5, 5).unwrap();
        let b = BoolMatrix::random(64, 0.5, 6).unwrap();
        let w = approx_rank_bounded(&a, &b, 8, 7).unwrap();
        assert!(verify_witnesses(&a, &b, &w, RankBound::AtMost { ell: 8 })
            .unwrap()
            .is_valid());
        // Strip width 8 usually misses the maximum somewhere.
        let exact = verify_witnesses(&a, &b, &w, RankBound::Exact).unwrap();
        assert!(exact.rank_violations > 0);
        assert_eq!(exact.rank_violations, exact.disagreements);
    }

    #[test]
    fn lists() {
        let a = BoolMatrix::random(32, 0.4, 8).unwrap();
        let b = BoolMatrix::random(32, 0.4, 9).unwrap();
        let mut lists = k_witness(&a, &b, 4, 10).unwrap();
        assert!(verify_lists(&a, &b, &lists).unwrap().is_valid());
        let (i, j) = (0..32)
            .flat_map(|i| (0..32).map(move |j| (i, j)))
            .find(|&(i, j)| lists.get(i, j).len() >= 2)
            .unwrap();
        let mut l = lists.get(i, j).to_vec();
        l.pop();
        lists.set(i, j, l);
        let r = verify_lists(&a, &b, &lists).unwrap();
        assert_eq!((r.wrong_length, r.invalid), (1, 0));
    }
}
