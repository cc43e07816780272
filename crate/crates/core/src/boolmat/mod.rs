//! Bit-packed Boolean matrices and the exact oracles for products,
//! witnesses, witness counts and ranks.
//!
//! Rows are stored as contiguous runs of `u64` words, least significant bit
//! first. Bits past the last column of a row are always zero; every
//! constructor and mutator preserves that.

pub mod bits;
mod witness_matrix;

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::rng;
pub use witness_matrix::{WitnessLists, WitnessMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix must be at least 1x1, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("dimension mismatch: left operand has {left} columns, right operand has {right} rows")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("inner index {k} out of range for inner dimension {inner}")]
    InnerIndexOutOfRange { k: usize, inner: usize },
    #[error("density {0} outside [0, 1]")]
    InvalidDensity(f64),
    #[error("{k} is not a witness for entry ({i}, {j})")]
    NotAWitness { i: usize, j: usize, k: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },
}

pub type Result<T, E = MatrixError> = std::result::Result<T, E>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape { rows, cols });
        }
        let stride = bits::words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        })
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        m.bits.fill(!0);
        m.canonicalize();
        Ok(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 values; any nonzero value is `true`.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        for (row, r) in rows.iter().enumerate() {
            if r.as_ref().len() != cols {
                return Err(MatrixError::RaggedRows {
                    row,
                    got: r.as_ref().len(),
                    expected: cols,
                });
            }
        }
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] != 0)
    }

    /// Builds a matrix from raw packed rows; tail bits are cleared.
    pub fn from_words(rows: usize, cols: usize, words: Vec<u64>) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        if words.len() != m.bits.len() {
            return Err(MatrixError::RaggedRows {
                row: 0,
                got: words.len(),
                expected: m.bits.len(),
            });
        }
        m.bits = words;
        m.canonicalize();
        Ok(m)
    }

    /// Square matrix with i.i.d. Bernoulli(`density`) entries.
    pub fn random(n: usize, density: f64, seed: u64) -> Result<Self> {
        Self::random_rect(n, n, density, seed)
    }

    pub fn random_rect(rows: usize, cols: usize, density: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(MatrixError::InvalidDensity(density));
        }
        let mut m = Self::zeros(rows, cols)?;
        if density == 0.0 {
            return Ok(m);
        }
        if density == 1.0 {
            m.bits.fill(!0);
            m.canonicalize();
            return Ok(m);
        }
        let mut rng = rng::stream(seed, rng::tag::MATRIX, &[rows as u64, cols as u64]);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(density) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Words per packed row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "({i}, {j}) out of range for {}x{}",
            self.rows,
            self.cols
        );
        bits::get(self.row(i), j)
    }

    pub fn try_get(&self, i: usize, j: usize) -> Result<bool> {
        self.check_index(i, j)?;
        Ok(bits::get(self.row(i), j))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "({i}, {j}) out of range for {}x{}",
            self.rows,
            self.cols
        );
        let row = self.row_mut(i);
        if value {
            bits::set(row, j);
        } else {
            bits::clear(row, j);
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn row_ones(&self, i: usize) -> bits::Ones<'_> {
        bits::ones(self.row(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// `true` when every padding bit past the last column is zero.
    pub fn is_canonical(&self) -> bool {
        let mask = bits::tail_mask(self.cols);
        (0..self.rows).all(|i| self.row(i)[self.stride - 1] & !mask == 0)
    }

    pub(crate) fn canonicalize(&mut self) {
        let mask = bits::tail_mask(self.cols);
        let stride = self.stride;
        for row in self.bits.chunks_mut(stride) {
            row[stride - 1] &= mask;
        }
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::zeros(self.cols, self.rows).expect("nonempty shape");
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                bits::set(t.row_mut(j), i);
            }
        }
        t
    }

    /// Columns `[start, end)` as a `rows × (end-start)` matrix.
    pub fn column_range(&self, start: usize, end: usize) -> Result<BoolMatrix> {
        if start >= end || end > self.cols {
            return Err(MatrixError::IndexOutOfRange {
                row: 0,
                col: end,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let width = end - start;
        let mut out = BoolMatrix::zeros(self.rows, width)?;
        for i in 0..self.rows {
            let piece = bits::extract(self.row(i), start, width);
            out.row_mut(i).copy_from_slice(&piece);
        }
        Ok(out)
    }

    /// Rows `[start, end)` as an `(end-start) × cols` matrix.
    pub fn row_range(&self, start: usize, end: usize) -> Result<BoolMatrix> {
        if start >= end || end > self.rows {
            return Err(MatrixError::IndexOutOfRange {
                row: end,
                col: 0,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(BoolMatrix {
            rows: end - start,
            cols: self.cols,
            stride: self.stride,
            bits: self.bits[start * self.stride..end * self.stride].to_vec(),
        })
    }

    /// Applies `perm` to rows and columns: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> BoolMatrix {
        assert!(self.is_square() && perm.len() == self.rows);
        let mut inv = vec![0usize; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut out = BoolMatrix::zeros(self.rows, self.cols).expect("nonempty shape");
        for (new_i, &old_i) in perm.iter().enumerate() {
            for old_j in self.row_ones(old_i) {
                bits::set(out.row_mut(new_i), inv[old_j]);
            }
        }
        out
    }

    fn check_index(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(MatrixError::IndexOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BoolMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(32) {
            let line: String = (0..self.cols.min(64))
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

pub fn transpose(m: &BoolMatrix) -> BoolMatrix {
    m.transpose()
}

fn check_product(a: &BoolMatrix, b: &BoolMatrix) -> Result<()> {
    if a.cols != b.rows {
        return Err(MatrixError::DimensionMismatch {
            left: a.cols,
            right: b.rows,
        });
    }
    Ok(())
}

/// Boolean product: each row of `A` OR-accumulates the rows of `B` selected
/// by its set bits.
pub fn bool_product(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    check_product(a, b)?;
    let mut c = BoolMatrix::zeros(a.rows, b.cols)?;
    for i in 0..a.rows {
        let out = &mut c.bits[i * b.stride..(i + 1) * b.stride];
        for k in bits::ones(a.row(i)) {
            for (o, w) in out.iter_mut().zip(b.row(k)) {
                *o |= w;
            }
        }
    }
    Ok(c)
}

/// Witness queries against a fixed product `A × B`.
///
/// `Bᵗ` is materialized once so that the witness set of `(i, j)` is the AND
/// of two contiguous rows.
#[derive(Clone, Debug)]
pub struct ProductOracle<'a> {
    a: &'a BoolMatrix,
    bt: BoolMatrix,
}

impl<'a> ProductOracle<'a> {
    pub fn new(a: &'a BoolMatrix, b: &BoolMatrix) -> Result<Self> {
        check_product(a, b)?;
        Ok(Self {
            a,
            bt: b.transpose(),
        })
    }

    pub fn rows(&self) -> usize {
        self.a.rows
    }

    // `bt` is stored transposed
    #[allow(clippy::misnamed_getters)]
    pub fn cols(&self) -> usize {
        self.bt.rows
    }

    pub fn inner(&self) -> usize {
        self.a.cols
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.rows() || j >= self.cols() {
            return Err(MatrixError::IndexOutOfRange {
                row: i,
                col: j,
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        Ok(())
    }

    /// Packed witness set of `(i, j)`.
    pub fn witness_set(&self, i: usize, j: usize) -> Vec<u64> {
        self.a
            .row(i)
            .iter()
            .zip(self.bt.row(j))
            .map(|(x, y)| x & y)
            .collect()
    }

    /// Witnesses of `(i, j)` in decreasing order.
    pub fn witnesses_desc(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        bits::and_ones_desc(self.a.row(i), self.bt.row(j))
    }

    #[inline]
    pub fn max_witness(&self, i: usize, j: usize) -> Option<usize> {
        bits::and_highest(self.a.row(i), self.bt.row(j))
    }

    #[inline]
    pub fn max_witness_in(&self, i: usize, j: usize, lo: usize, hi: usize) -> Option<usize> {
        bits::and_highest_in(self.a.row(i), self.bt.row(j), lo, hi)
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> usize {
        bits::and_count(self.a.row(i), self.bt.row(j))
    }

    #[inline]
    pub fn is_witness(&self, i: usize, j: usize, k: usize) -> bool {
        k < self.inner() && bits::get(self.a.row(i), k) && bits::get(self.bt.row(j), k)
    }

    /// 1 + number of witnesses strictly greater than `k`.
    pub fn rank_of(&self, i: usize, j: usize, k: usize) -> Result<usize> {
        self.check(i, j)?;
        if !self.is_witness(i, j, k) {
            return Err(MatrixError::NotAWitness { i, j, k });
        }
        Ok(1 + self.witnesses_desc(i, j).take_while(|&w| w > k).count())
    }

    pub fn try_count(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i, j)?;
        Ok(self.count(i, j))
    }

    pub fn max_witnesses(&self) -> WitnessMatrix {
        let mut w = WitnessMatrix::new(self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                w.set(i, j, self.max_witness(i, j));
            }
        }
        w
    }
}

/// Maximum witness of every entry of `A × B` by highest-set-bit scans.
pub fn max_witness_oracle(a: &BoolMatrix, b: &BoolMatrix) -> Result<WitnessMatrix> {
    Ok(ProductOracle::new(a, b)?.max_witnesses())
}

/// Number of witnesses `W_C(i, j)`.
pub fn witness_count(a: &BoolMatrix, b: &BoolMatrix, i: usize, j: usize) -> Result<usize> {
    ProductOracle::new(a, b)?.try_count(i, j)
}

/// Rank of witness `k` for entry `(i, j)`; the maximum witness has rank 1.
pub fn rank_of(a: &BoolMatrix, b: &BoolMatrix, i: usize, j: usize, k: usize) -> Result<usize> {
    ProductOracle::new(a, b)?.rank_of(i, j, k)
}

pub fn random_matrix(n: usize, density: f64, seed: u64) -> Result<BoolMatrix> {
    BoolMatrix::random(n, density, seed)
}

#[cfg(test)]
mod tests;
