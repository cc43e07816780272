//! Seeded Monte-Carlo campaigns over the randomized algorithms.
//!
//! A campaign is a pure function of its [`CampaignConfig`]: trials draw
//! from per-trial RNG streams and are collected by trial index, and all
//! aggregates are computed sequentially afterwards. Reports are therefore
//! byte-identical for any worker-thread count.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolmat::{max_witness_oracle, BoolMatrix, MatrixError, ProductOracle, WitnessMatrix};
use crate::io::SCHEMA;
use crate::qsim::{
    algorithm1, algorithm2, algorithm3, algorithm4, durr_hoyer_min, QsimError, SimOutput,
    VirtualMinTable,
};
use crate::rng::{self, derive_seed, tag};
use crate::stats::{binomial_sigma, log_log_slope, Summary};
use crate::witness::{
    approx_multiwitness_boosted, multiwitness_rank_bound, ApproxParams, WitnessError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CampaignError {
    #[error("invalid campaign: {0}")]
    Invalid(String),
    #[error("cannot start worker threads: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

pub type Result<T, E = CampaignError> = std::result::Result<T, E>;

/// Value layout of a minimum-finding table. All layouts use distinct values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableShape {
    /// A uniformly random permutation of `0..q`.
    UniformRandom,
    /// Increasing; argmin at index 0.
    Sorted,
    /// Decreasing; argmin at the last index.
    ReverseSorted,
    /// Decreasing to a random position, increasing after it.
    SingleDip,
}

impl TableShape {
    pub const ALL: [TableShape; 4] = [
        TableShape::UniformRandom,
        TableShape::Sorted,
        TableShape::ReverseSorted,
        TableShape::SingleDip,
    ];

    pub fn values<R: Rng + ?Sized>(self, q: usize, rng: &mut R) -> Vec<i64> {
        match self {
            TableShape::UniformRandom => {
                let mut v: Vec<i64> = (0..q as i64).collect();
                v.shuffle(rng);
                v
            }
            TableShape::Sorted => (0..q as i64).collect(),
            TableShape::ReverseSorted => (0..q as i64).rev().collect(),
            TableShape::SingleDip => {
                let d = rng.gen_range(0..q) as i64;
                (0..q as i64)
                    .map(|k| 2 * (k - d).abs() + i64::from(k < d))
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "campaign", rename_all = "kebab-case")]
pub enum Campaign {
    /// Argmin-hit rate and query counts of Dürr–Høyer over a grid of table
    /// sizes and shapes.
    DurrHoyer {
        qs: Vec<usize>,
        shapes: Vec<TableShape>,
    },
    /// Per-entry error rate of boosted MaxWit (Algorithm 1) on random
    /// instances.
    MaxWit { n: usize, density: f64, beta: u32 },
    /// Rank-bound success rate of the multi-witness approximation. Density 1
    /// gives the all-ones instance.
    Multiwitness {
        n: usize,
        density: f64,
        k: usize,
        reps: usize,
    },
    /// Oracle agreement of Algorithms 1–4.
    Algorithms {
        ns: Vec<usize>,
        density: f64,
        beta: u32,
        ells: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    #[serde(flatten)]
    pub campaign: Campaign,
    pub trials: usize,
    pub seed: u64,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CampaignError::Invalid(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        let density_ok = |d: f64| (0.0..=1.0).contains(&d);
        match &self.campaign {
            Campaign::DurrHoyer { qs, shapes } => {
                if qs.is_empty() || shapes.is_empty() {
                    return bad("need at least one table size and shape");
                }
                if qs.contains(&0) {
                    return bad("table sizes must be positive");
                }
            }
            Campaign::MaxWit { n, density, beta } => {
                if *n == 0 || !density_ok(*density) || *beta == 0 {
                    return bad("need n ≥ 1, density in [0, 1], beta ≥ 1");
                }
            }
            Campaign::Multiwitness {
                n,
                density,
                k,
                reps,
            } => {
                if *n == 0 || !density_ok(*density) {
                    return bad("need n ≥ 1 and density in [0, 1]");
                }
                ApproxParams::new(*k, *reps, 0)?;
            }
            Campaign::Algorithms {
                ns,
                density,
                beta,
                ells,
            } => {
                if ns.is_empty() || ns.contains(&0) || !density_ok(*density) || *beta == 0 {
                    return bad("need sizes ≥ 1, density in [0, 1], beta ≥ 1");
                }
                if ells.iter().any(|&l| l == 0 || ns.iter().any(|&n| l > n)) {
                    return bad("every ell must lie in [1, n] for every n");
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DurrHoyerTrial {
    pub q: usize,
    pub shape: TableShape,
    pub trial: usize,
    pub hit: bool,
    pub queries: u64,
    pub grover_iterations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DurrHoyerCell {
    pub q: usize,
    pub shape: TableShape,
    pub trials: usize,
    pub success_rate: f64,
    /// `0.5 − 3σ` for a fair coin over this many trials.
    pub success_floor: f64,
    pub mean_queries: f64,
    pub std_queries: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSlope {
    pub shape: TableShape,
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DurrHoyerSummary {
    pub cells: Vec<DurrHoyerCell>,
    pub min_success_rate: f64,
    pub all_cells_above_floor: bool,
    /// Slope of log(mean queries) against log q, means taken over shapes.
    pub slope: Option<f64>,
    pub slopes_by_shape: Vec<ShapeSlope>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxWitTrial {
    pub trial: usize,
    pub entries: usize,
    pub errors: usize,
    pub total_queries: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxWitSummary {
    pub entry_trials: usize,
    pub errors: usize,
    pub error_rate: f64,
    /// `n^(−β)`.
    pub bound: f64,
    /// `n^(−β)` plus three binomial σ at that rate.
    pub tolerance: f64,
    pub within_tolerance: bool,
    pub mean_queries_per_entry: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiwitnessTrial {
    pub trial: usize,
    /// Nonzero product entries.
    pub entries: usize,
    pub within_bound: usize,
    pub invalid: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiwitnessSummary {
    pub entry_trials: usize,
    pub success_rate: f64,
    pub violation_rate: f64,
    /// `½ − e⁻¹`.
    pub single_run_floor: f64,
    pub invalid_witnesses: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmResult {
    pub algo: String,
    pub ell: Option<usize>,
    pub agreement: f64,
    pub mean_queries_per_entry: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmsTrial {
    pub n: usize,
    pub trial: usize,
    pub results: Vec<AlgorithmResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummaryRow {
    pub algo: String,
    pub ell: Option<usize>,
    pub n: usize,
    pub mean_agreement: f64,
    pub min_agreement: f64,
    pub mean_queries_per_entry: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmsSummary {
    pub rows: Vec<AlgorithmSummaryRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Trials {
    DurrHoyer(Vec<DurrHoyerTrial>),
    MaxWit(Vec<MaxWitTrial>),
    Multiwitness(Vec<MultiwitnessTrial>),
    Algorithms(Vec<AlgorithmsTrial>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Aggregate {
    DurrHoyer(DurrHoyerSummary),
    MaxWit(MaxWitSummary),
    Multiwitness(MultiwitnessSummary),
    Algorithms(AlgorithmsSummary),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub schema: u32,
    pub config: CampaignConfig,
    pub aggregate: Aggregate,
    pub trials: Trials,
}

impl CampaignReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Runs a campaign on `threads` workers (`0`: rayon's default).
pub fn run_campaign(config: &CampaignConfig, threads: usize) -> Result<CampaignReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CampaignError::ThreadPool(e.to_string()))?;
    pool.install(|| run_inner(config))
}

fn run_inner(config: &CampaignConfig) -> Result<CampaignReport> {
    let (trials, aggregate) = match &config.campaign {
        Campaign::DurrHoyer { qs, shapes } => {
            let t = durr_hoyer_trials(qs, shapes, config.trials, config.seed)?;
            let a = durr_hoyer_summary(qs, shapes, &t);
            (Trials::DurrHoyer(t), Aggregate::DurrHoyer(a))
        }
        Campaign::MaxWit { n, density, beta } => {
            let t = maxwit_trials(*n, *density, *beta, config.trials, config.seed)?;
            let a = maxwit_summary(*n, *beta, &t);
            (Trials::MaxWit(t), Aggregate::MaxWit(a))
        }
        Campaign::Multiwitness {
            n,
            density,
            k,
            reps,
        } => {
            let t = multiwitness_trials(*n, *density, *k, *reps, config.trials, config.seed)?;
            let a = multiwitness_summary(&t);
            (Trials::Multiwitness(t), Aggregate::Multiwitness(a))
        }
        Campaign::Algorithms {
            ns,
            density,
            beta,
            ells,
        } => {
            let t = algorithms_trials(ns, *density, *beta, ells, config.trials, config.seed)?;
            let a = algorithms_summary(&t);
            (Trials::Algorithms(t), Aggregate::Algorithms(a))
        }
    };
    Ok(CampaignReport {
        schema: SCHEMA,
        config: config.clone(),
        aggregate,
        trials,
    })
}

fn durr_hoyer_trials(
    qs: &[usize],
    shapes: &[TableShape],
    trials: usize,
    seed: u64,
) -> Result<Vec<DurrHoyerTrial>> {
    let cells: Vec<(usize, usize, usize)> = qs
        .iter()
        .flat_map(|&q| (0..shapes.len()).flat_map(move |s| (0..trials).map(move |t| (q, s, t))))
        .collect();
    cells
        .into_par_iter()
        .map(|(q, s, trial)| {
            let mut rng = rng::stream(seed, tag::CAMPAIGN, &[0, q as u64, s as u64, trial as u64]);
            let table = VirtualMinTable::from_values(shapes[s].values(q, &mut rng))?;
            let (_, log) = durr_hoyer_min(&table, &mut rng);
            Ok(DurrHoyerTrial {
                q,
                shape: shapes[s],
                trial,
                hit: log.succeeded,
                queries: log.oracle_queries,
                grover_iterations: log.grover_iterations,
            })
        })
        .collect()
}

fn durr_hoyer_summary(
    qs: &[usize],
    shapes: &[TableShape],
    trials: &[DurrHoyerTrial],
) -> DurrHoyerSummary {
    let per_cell = trials.len() / (qs.len() * shapes.len());
    let mut cells = Vec::new();
    for (ci, chunk) in trials.chunks(per_cell).enumerate() {
        let hits = chunk.iter().filter(|t| t.hit).count();
        let queries: Vec<f64> = chunk.iter().map(|t| t.queries as f64).collect();
        let s = Summary::of(&queries);
        cells.push(DurrHoyerCell {
            q: qs[ci / shapes.len()],
            shape: shapes[ci % shapes.len()],
            trials: chunk.len(),
            success_rate: hits as f64 / chunk.len() as f64,
            success_floor: 0.5 - 3.0 * binomial_sigma(0.5, chunk.len()),
            mean_queries: s.mean,
            std_queries: s.std_dev,
        });
    }
    let min_success_rate = cells
        .iter()
        .map(|c| c.success_rate)
        .fold(f64::INFINITY, f64::min);
    let all_cells_above_floor = cells.iter().all(|c| c.success_rate >= c.success_floor);
    let by_q: Vec<(f64, f64)> = qs
        .iter()
        .enumerate()
        .map(|(qi, &q)| {
            let row = &cells[qi * shapes.len()..(qi + 1) * shapes.len()];
            (
                q as f64,
                row.iter().map(|c| c.mean_queries).sum::<f64>() / row.len() as f64,
            )
        })
        .collect();
    let slopes_by_shape = shapes
        .iter()
        .enumerate()
        .map(|(si, &shape)| {
            let pts: Vec<(f64, f64)> = cells
                .iter()
                .skip(si)
                .step_by(shapes.len())
                .map(|c| (c.q as f64, c.mean_queries))
                .collect();
            ShapeSlope {
                shape,
                slope: log_log_slope(&pts),
            }
        })
        .collect();
    DurrHoyerSummary {
        cells,
        min_success_rate,
        all_cells_above_floor,
        slope: log_log_slope(&by_q),
        slopes_by_shape,
    }
}

fn instance(
    n: usize,
    density: f64,
    seed: u64,
    kind: u64,
    trial: usize,
) -> Result<(BoolMatrix, BoolMatrix)> {
    if density >= 1.0 {
        return Ok((BoolMatrix::ones(n, n)?, BoolMatrix::ones(n, n)?));
    }
    let a = BoolMatrix::random(
        n,
        density,
        derive_seed(seed, tag::CAMPAIGN, &[kind, trial as u64, 0]),
    )?;
    let b = BoolMatrix::random(
        n,
        density,
        derive_seed(seed, tag::CAMPAIGN, &[kind, trial as u64, 1]),
    )?;
    Ok((a, b))
}

fn maxwit_trials(
    n: usize,
    density: f64,
    beta: u32,
    trials: usize,
    seed: u64,
) -> Result<Vec<MaxWitTrial>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (a, b) = instance(n, density, seed, 1, trial)?;
            let truth = max_witness_oracle(&a, &b)?;
            let out = algorithm1(
                &a,
                &b,
                beta,
                derive_seed(seed, tag::CAMPAIGN, &[1, trial as u64, 2]),
            )?;
            Ok(MaxWitTrial {
                trial,
                entries: n * n,
                errors: out.witnesses.disagreements(&truth),
                total_queries: out.stats.total_queries,
            })
        })
        .collect()
}

fn maxwit_summary(n: usize, beta: u32, trials: &[MaxWitTrial]) -> MaxWitSummary {
    let entry_trials: usize = trials.iter().map(|t| t.entries).sum();
    let errors: usize = trials.iter().map(|t| t.errors).sum();
    let queries: u64 = trials.iter().map(|t| t.total_queries).sum();
    let bound = (n as f64).powi(-(beta as i32));
    let tolerance = bound + 3.0 * binomial_sigma(bound, entry_trials);
    let error_rate = errors as f64 / entry_trials as f64;
    MaxWitSummary {
        entry_trials,
        errors,
        error_rate,
        bound,
        tolerance,
        within_tolerance: error_rate <= tolerance,
        mean_queries_per_entry: queries as f64 / entry_trials as f64,
    }
}

fn multiwitness_trials(
    n: usize,
    density: f64,
    k: usize,
    reps: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<MultiwitnessTrial>> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (a, b) = instance(n, density, seed, 2, trial)?;
            let oracle = ProductOracle::new(&a, &b)?;
            let params = ApproxParams::new(
                k,
                reps,
                derive_seed(seed, tag::CAMPAIGN, &[2, trial as u64, 2]),
            )?;
            let w = approx_multiwitness_boosted(&a, &b, params)?;
            let (mut entries, mut within, mut invalid) = (0, 0, 0);
            for i in 0..n {
                for j in 0..n {
                    let count = oracle.count(i, j);
                    if count == 0 {
                        invalid += usize::from(w.get(i, j).is_some());
                        continue;
                    }
                    entries += 1;
                    match w.get(i, j) {
                        Some(x) if oracle.is_witness(i, j, x) => {
                            within += usize::from(
                                oracle.rank_of(i, j, x)? <= multiwitness_rank_bound(count, k),
                            );
                        }
                        _ => invalid += 1,
                    }
                }
            }
            Ok(MultiwitnessTrial {
                trial,
                entries,
                within_bound: within,
                invalid,
            })
        })
        .collect()
}

fn multiwitness_summary(trials: &[MultiwitnessTrial]) -> MultiwitnessSummary {
    let entry_trials: usize = trials.iter().map(|t| t.entries).sum();
    let within: usize = trials.iter().map(|t| t.within_bound).sum();
    let success_rate = if entry_trials == 0 {
        1.0
    } else {
        within as f64 / entry_trials as f64
    };
    MultiwitnessSummary {
        entry_trials,
        success_rate,
        violation_rate: 1.0 - success_rate,
        single_run_floor: 0.5 - (-1.0f64).exp(),
        invalid_witnesses: trials.iter().map(|t| t.invalid).sum(),
    }
}

fn agreement(out: &WitnessMatrix, truth: &WitnessMatrix) -> f64 {
    1.0 - out.disagreements(truth) as f64 / (truth.rows() * truth.cols()) as f64
}

fn algorithms_trials(
    ns: &[usize],
    density: f64,
    beta: u32,
    ells: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<AlgorithmsTrial>> {
    let cells: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    cells
        .into_par_iter()
        .map(|(n, trial)| {
            let (a, b) = instance(n, density, seed, 3 + ((n as u64) << 8), trial)?;
            let truth = max_witness_oracle(&a, &b)?;
            let s = derive_seed(seed, tag::CAMPAIGN, &[3, n as u64, trial as u64]);
            let record = |algo: &str, ell: Option<usize>, out: SimOutput| AlgorithmResult {
                algo: algo.to_string(),
                ell,
                agreement: agreement(&out.witnesses, &truth),
                mean_queries_per_entry: out.stats.mean_queries_per_entry(),
            };
            let mut results = vec![
                record("alg1", None, algorithm1(&a, &b, beta, s)?),
                record("alg2", None, algorithm2(&a, &b, beta, s)?),
                record("alg3", None, algorithm3(&a, &b, beta, s)?),
            ];
            for &ell in ells {
                results.push(record("alg4", Some(ell), algorithm4(&a, &b, ell, beta, s)?));
            }
            Ok(AlgorithmsTrial { n, trial, results })
        })
        .collect()
}

fn algorithms_summary(trials: &[AlgorithmsTrial]) -> AlgorithmsSummary {
    let mut rows: Vec<AlgorithmSummaryRow> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for t in trials {
        for r in &t.results {
            match rows
                .iter()
                .position(|row| row.n == t.n && row.algo == r.algo && row.ell == r.ell)
            {
                Some(p) => {
                    let row = &mut rows[p];
                    row.mean_agreement += r.agreement;
                    row.min_agreement = row.min_agreement.min(r.agreement);
                    row.mean_queries_per_entry += r.mean_queries_per_entry;
                    counts[p] += 1;
                }
                None => {
                    rows.push(AlgorithmSummaryRow {
                        algo: r.algo.clone(),
                        ell: r.ell,
                        n: t.n,
                        mean_agreement: r.agreement,
                        min_agreement: r.agreement,
                        mean_queries_per_entry: r.mean_queries_per_entry,
                    });
                    counts.push(1);
                }
            }
        }
    }
    for (row, &c) in rows.iter_mut().zip(&counts) {
        row.mean_agreement /= c as f64;
        row.mean_queries_per_entry /= c as f64;
    }
    AlgorithmsSummary { rows }
}
