use super::{BoolMatrix, ProductOracle};

/// Per-entry optional witness index; the output type of every solver.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WitnessMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Option<u32>>,
}

impl WitnessMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![None; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.entries[i * self.cols + j].map(|k| k as usize)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, witness: Option<usize>) {
        self.entries[i * self.cols + j] =
            witness.map(|k| u32::try_from(k).expect("witness index fits u32"));
    }

    /// Raises entry `(i, j)` to `candidate` if it is larger (absent counts as smallest).
    #[inline]
    pub fn raise(&mut self, i: usize, j: usize, candidate: Option<usize>) {
        if candidate > self.get(i, j) {
            self.set(i, j, candidate);
        }
    }

    /// Entrywise maximum with `other`.
    pub fn fold_max(&mut self, other: &WitnessMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (mine, theirs) in self.entries.iter_mut().zip(&other.entries) {
            if *theirs > *mine {
                *mine = *theirs;
            }
        }
    }

    /// Present entries as `(i, j, witness)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(idx, w)| w.map(|k| (idx / self.cols, idx % self.cols, k as usize)))
    }

    pub fn present_count(&self) -> usize {
        self.entries.iter().filter(|w| w.is_some()).count()
    }

    /// Boolean matrix of present entries.
    pub fn support(&self) -> BoolMatrix {
        BoolMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).is_some())
            .expect("nonempty shape")
    }

    /// Number of entries where the two matrices differ.
    pub fn disagreements(&self, other: &WitnessMatrix) -> usize {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// `true` iff every present witness is genuine and presence matches the
    /// nonzero pattern of the product.
    pub fn is_valid_for(&self, oracle: &ProductOracle<'_>) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| match self.get(i, j) {
                Some(k) => oracle.is_witness(i, j, k),
                None => oracle.max_witness(i, j).is_none(),
            })
        })
    }

    pub(crate) fn from_entries(rows: usize, cols: usize, entries: Vec<Option<u32>>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn transpose(&self) -> WitnessMatrix {
        let mut t = WitnessMatrix::new(self.cols, self.rows);
        for (i, j, k) in self.iter() {
            t.set(j, i, Some(k));
        }
        t
    }
}

/// Up to `k` distinct witnesses per entry, sorted in decreasing order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessLists {
    rows: usize,
    cols: usize,
    k: usize,
    lists: Vec<Vec<u32>>,
}

impl WitnessLists {
    pub fn new(rows: usize, cols: usize, k: usize) -> Self {
        Self {
            rows,
            cols,
            k,
            lists: vec![Vec::new(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &[u32] {
        &self.lists[i * self.cols + j]
    }

    /// Stores a list for `(i, j)`; it is sorted descending and truncated to `k`.
    pub fn set(&mut self, i: usize, j: usize, mut list: Vec<u32>) {
        list.sort_unstable_by(|a, b| b.cmp(a));
        list.dedup();
        list.truncate(self.k);
        self.lists[i * self.cols + j] = list;
    }

    pub fn max_of(&self, i: usize, j: usize) -> Option<usize> {
        self.get(i, j).first().map(|&k| k as usize)
    }

    /// Largest reported witness per entry.
    pub fn maxima(&self) -> WitnessMatrix {
        let entries = self.lists.iter().map(|l| l.first().copied()).collect();
        WitnessMatrix::from_entries(self.rows, self.cols, entries)
    }
}
