//! Word-level helpers over packed `u64` bit rows.

pub const WORD_BITS: usize = 64;

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Mask selecting the valid bits of the last word of a `bits`-wide row.
#[inline]
pub fn tail_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

/// Highest set bit of `a & b`, scanning words high to low.
#[inline]
pub fn and_highest(a: &[u64], b: &[u64]) -> Option<usize> {
    debug_assert_eq!(a.len(), b.len());
    for w in (0..a.len()).rev() {
        let x = a[w] & b[w];
        if x != 0 {
            return Some(w * WORD_BITS + (WORD_BITS - 1 - x.leading_zeros() as usize));
        }
    }
    None
}

/// Highest set bit of `a & b` among bit positions `[lo, hi)`.
pub fn and_highest_in(a: &[u64], b: &[u64], lo: usize, hi: usize) -> Option<usize> {
    if lo >= hi {
        return None;
    }
    let first = lo / WORD_BITS;
    let last = (hi - 1) / WORD_BITS;
    for w in (first..=last).rev() {
        let mut x = a[w] & b[w];
        if w == last {
            x &= tail_mask(hi - w * WORD_BITS);
        }
        if w == first {
            x &= !0u64 << (lo % WORD_BITS);
        }
        if x != 0 {
            return Some(w * WORD_BITS + (WORD_BITS - 1 - x.leading_zeros() as usize));
        }
    }
    None
}

#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

#[inline]
pub fn get(words: &[u64], bit: usize) -> bool {
    words[bit / WORD_BITS] >> (bit % WORD_BITS) & 1 == 1
}

#[inline]
pub fn set(words: &mut [u64], bit: usize) {
    words[bit / WORD_BITS] |= 1u64 << (bit % WORD_BITS);
}

#[inline]
pub fn clear(words: &mut [u64], bit: usize) {
    words[bit / WORD_BITS] &= !(1u64 << (bit % WORD_BITS));
}

/// Ascending iterator over the set bits of a word slice.
pub fn ones(words: &[u64]) -> Ones<'_> {
    Ones {
        words,
        word: 0,
        cur: words.first().copied().unwrap_or(0),
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    word: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.word * WORD_BITS + tz);
            }
            self.word += 1;
            if self.word >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.word];
        }
    }
}

/// Descending iterator over the set bits of `a & b`.
pub fn and_ones_desc<'a>(a: &'a [u64], b: &'a [u64]) -> impl Iterator<Item = usize> + 'a {
    (0..a.len()).rev().flat_map(move |w| {
        let mut x = a[w] & b[w];
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let hi = WORD_BITS - 1 - x.leading_zeros() as usize;
            x &= !(1u64 << hi);
            Some(w * WORD_BITS + hi)
        })
    })
}

/// Copies bits `[start, start + len)` of `src` into a fresh `words_for(len)` row.
pub fn extract(src: &[u64], start: usize, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; words_for(len)];
    let shift = start % WORD_BITS;
    let base = start / WORD_BITS;
    for (w, slot) in out.iter_mut().enumerate() {
        let lo = src.get(base + w).copied().unwrap_or(0);
        let v = if shift == 0 {
            lo
        } else {
            let hi = src.get(base + w + 1).copied().unwrap_or(0);
            (lo >> shift) | (hi << (WORD_BITS - shift))
        };
        *slot = v;
    }
    if let Some(last) = out.last_mut() {
        *last &= tail_mask(len);
    }
    out
}
