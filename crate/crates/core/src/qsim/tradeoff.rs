use rand::Rng;

use super::algorithms::algorithm4;
use super::maxwit::max_wit_table;
use super::{QsimError, QueryLog, Result};
use crate::boolmat::{bool_product, BoolMatrix, MatrixError, WitnessMatrix};
use crate::witness::{largest_strip, strip_products, StripDecomposition};

/// How much of the strip algorithm is run before queries arrive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreprocessingLevel {
    /// Nothing retained; each query is a MaxWit over `[0, n)`.
    None,
    /// Strip products `C_p` retained.
    Strips { ell: usize },
    /// Highest nonzero strip per entry retained.
    StripsLargestP { ell: usize },
    /// Full answer table retained.
    Full { ell: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TradeoffAnswer {
    pub witness: Option<usize>,
    pub log: QueryLog,
    /// Classical reads of retained tables (`C_p` entries, strip indices, answers).
    pub table_probes: u64,
}

const NO_STRIP: u32 = u32::MAX;

/// Retained state for answering single maximum-witness queries.
pub struct TradeoffIndex<'a> {
    a: &'a BoolMatrix,
    b: &'a BoolMatrix,
    beta: u32,
    level: PreprocessingLevel,
    strips: Option<StripDecomposition>,
    products: Vec<BoolMatrix>,
    largest: Vec<u32>,
    answers: Option<WitnessMatrix>,
}

impl<'a> TradeoffIndex<'a> {
    pub fn build(
        a: &'a BoolMatrix,
        b: &'a BoolMatrix,
        level: PreprocessingLevel,
        beta: u32,
        seed: u64,
    ) -> Result<Self> {
        if a.cols() != b.rows() {
            return Err(MatrixError::DimensionMismatch {
                left: a.cols(),
                right: b.rows(),
            }
            .into());
        }
        if beta == 0 {
            return Err(QsimError::InvalidBeta);
        }
        let mut index = Self {
            a,
            b,
            beta,
            level,
            strips: None,
            products: Vec::new(),
            largest: Vec::new(),
            answers: None,
        };
        match level {
            PreprocessingLevel::None => {}
            PreprocessingLevel::Strips { ell } => {
                let strips = StripDecomposition::new(a.cols(), ell)?;
                index.products = strip_products(a, b, &strips)?;
                index.strips = Some(strips);
            }
            PreprocessingLevel::StripsLargestP { ell } => {
                let strips = StripDecomposition::new(a.cols(), ell)?;
                let mut largest = vec![NO_STRIP; a.rows() * b.cols()];
                for (p, range) in strips.strips().enumerate() {
                    let cp = bool_product(
                        &a.column_range(range.start, range.end)?,
                        &b.row_range(range.start, range.end)?,
                    )?;
                    for i in 0..a.rows() {
                        for j in cp.row_ones(i) {
                            largest[i * b.cols() + j] = p as u32;
                        }
                    }
                }
                index.largest = largest;
                index.strips = Some(strips);
            }
            PreprocessingLevel::Full { ell } => {
                index.answers = Some(algorithm4(a, b, ell, beta, seed)?.witnesses);
            }
        }
        Ok(index)
    }

    pub fn level(&self) -> PreprocessingLevel {
        self.level
    }

    fn search_strip<R: Rng + ?Sized>(
        &self,
        i: usize,
        j: usize,
        p: usize,
        rng: &mut R,
    ) -> Result<(Option<usize>, QueryLog)> {
        let strips = self.strips.as_ref().expect("strip level");
        let range = strips.strip(p);
        if range.len() == 1 {
            return Ok((
                Some(range.start),
                QueryLog {
                    succeeded: true,
                    result: Some(range.start),
                    ..QueryLog::default()
                },
            ));
        }
        let (a, b, start) = (self.a, self.b, range.start);
        let n = a.rows().max(a.cols()).max(b.cols());
        let (w, mut log) = max_wit_table(
            range.len(),
            n,
            |k| a.get(i, start + k) && b.get(start + k, j),
            self.beta,
            rng,
        )?;
        let w = w.map(|k| start + k);
        log.result = w;
        Ok((w, log))
    }

    pub fn query<R: Rng + ?Sized>(
        &self,
        i: usize,
        j: usize,
        rng: &mut R,
    ) -> Result<TradeoffAnswer> {
        self.a.try_get(i, 0)?;
        self.b.try_get(0, j)?;
        match self.level {
            PreprocessingLevel::None => {
                let n = self.a.rows().max(self.a.cols()).max(self.b.cols());
                let (a, b) = (self.a, self.b);
                let (witness, log) =
                    max_wit_table(a.cols(), n, |k| a.get(i, k) && b.get(k, j), self.beta, rng)?;
                Ok(TradeoffAnswer {
                    witness,
                    log,
                    table_probes: 0,
                })
            }
            PreprocessingLevel::Strips { .. } => {
                let probes_before = self.products.len();
                let p = largest_strip(&self.products, i, j);
                let table_probes = match p {
                    Some(p) => (probes_before - p) as u64,
                    None => probes_before as u64,
                };
                let (witness, log) = match p {
                    Some(p) => self.search_strip(i, j, p, rng)?,
                    None => (None, QueryLog::default()),
                };
                Ok(TradeoffAnswer {
                    witness,
                    log,
                    table_probes,
                })
            }
            PreprocessingLevel::StripsLargestP { .. } => {
                let p = self.largest[i * self.b.cols() + j];
                let (witness, log) = if p == NO_STRIP {
                    (None, QueryLog::default())
                } else {
                    self.search_strip(i, j, p as usize, rng)?
                };
                Ok(TradeoffAnswer {
                    witness,
                    log,
                    table_probes: 1,
                })
            }
            PreprocessingLevel::Full { .. } => {
                let witness = self.answers.as_ref().expect("full level").get(i, j);
                let log = QueryLog {
                    succeeded: witness.is_some(),
                    result: witness,
                    ..QueryLog::default()
                };
                Ok(TradeoffAnswer {
                    witness,
                    log,
                    table_probes: 1,
                })
            }
        }
    }
}
