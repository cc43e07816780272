use std::ops::Range;

use super::{Result, WitnessError};
use crate::boolmat::{bool_product, BoolMatrix, MatrixError, ProductOracle, WitnessMatrix};

/// Partition of the inner index range `[0, n)` into `⌈n/ℓ⌉` contiguous strips
/// of width `ℓ`; only the last strip may be narrower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripDecomposition {
    n: usize,
    ell: usize,
}

impl StripDecomposition {
    pub fn new(n: usize, ell: usize) -> Result<Self> {
        if ell == 0 || ell > n {
            return Err(WitnessError::StripWidth { ell, n });
        }
        Ok(Self { n, ell })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.n.div_ceil(self.ell)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn strip(&self, p: usize) -> Range<usize> {
        assert!(p < self.len());
        let start = p * self.ell;
        start..(start + self.ell).min(self.n)
    }

    pub fn strips(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.len()).map(|p| self.strip(p))
    }

    pub fn strip_of(&self, k: usize) -> usize {
        k / self.ell
    }
}

/// Default strip width `⌈n^{2/3}⌉`.
pub fn default_strip_width(n: usize) -> usize {
    let mut ell = (n as f64).powf(2.0 / 3.0).ceil() as usize;
    // Correct floating error around perfect cubes.
    while ell > 1 && (ell - 1).pow(3) >= n * n {
        ell -= 1;
    }
    while ell.pow(3) < n * n {
        ell += 1;
    }
    ell.clamp(1, n.max(1))
}

/// Products `C_p = A_p × B_p` of the column strips of `A` with the matching
/// row strips of `B`.
pub fn strip_products(
    a: &BoolMatrix,
    b: &BoolMatrix,
    strips: &StripDecomposition,
) -> Result<Vec<BoolMatrix>> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimensionMismatch {
            left: a.cols(),
            right: b.rows(),
        }
        .into());
    }
    if strips.n() != a.cols() {
        return Err(WitnessError::StripWidth {
            ell: strips.ell(),
            n: a.cols(),
        });
    }
    strips
        .strips()
        .map(|range| {
            let ap = a.column_range(range.start, range.end)?;
            let bp = b.row_range(range.start, range.end)?;
            Ok(bool_product(&ap, &bp)?)
        })
        .collect()
}

/// Largest `p` with `C_p[i,j] = 1`.
#[inline]
pub fn largest_strip(products: &[BoolMatrix], i: usize, j: usize) -> Option<usize> {
    (0..products.len()).rev().find(|&p| products[p].get(i, j))
}

/// Exact maximum witnesses: strip products locate the highest strip holding a
/// witness, then a backward bitset scan inside that strip finds it.
pub fn exact_max_witness_strips(
    a: &BoolMatrix,
    b: &BoolMatrix,
    ell: usize,
) -> Result<WitnessMatrix> {
    let strips = StripDecomposition::new(a.cols(), ell)?;
    let products = strip_products(a, b, &strips)?;
    let oracle = ProductOracle::new(a, b)?;
    let mut out = WitnessMatrix::new(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            if let Some(p) = largest_strip(&products, i, j) {
                let range = strips.strip(p);
                out.set(i, j, oracle.max_witness_in(i, j, range.start, range.end));
            }
        }
    }
    Ok(out)
}
