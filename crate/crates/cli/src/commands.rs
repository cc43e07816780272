use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::anyhow;
use serde::Serialize;

use maxwit::boolmat::{max_witness_oracle, BoolMatrix, WitnessLists, WitnessMatrix};
use maxwit::campaign::{run_campaign, Campaign, CampaignConfig, TableShape};
use maxwit::graphs::{
    all_pairs_lca, brute_force_heaviest_triangle, brute_force_lca_set,
    brute_force_lightest_triangle, brute_force_two_edge_path, heaviest_triangle_per_edge,
    lightest_triangle_per_edge, max_weight_two_edge_paths, random_dag, random_digraph,
    random_graph, Solver,
};
use maxwit::io::{
    self as mio, GraphText, ListsFile, MatrixFormat, TriangleFile, WitnessFile, SCHEMA,
};
use maxwit::qsim::{algorithm1, algorithm2, algorithm3, algorithm4, SimOutput};
use maxwit::report::{PhaseTimer, StatsReport};
use maxwit::stats::binomial_sigma;
use maxwit::verify::{verify_lists, verify_witnesses, RankBound};
use maxwit::witness::{
    approx_multiwitness_boosted, approx_rank_bounded, default_strip_width,
    exact_max_witness_strips, k_witness, ApproxParams,
};

use crate::{
    meta_path, write_json_to, write_output, CommandName, Failure, Format, Result, RunConfig,
};

/// Run metadata stored with every result.
#[derive(Debug, Serialize)]
struct Meta<'a> {
    schema: u32,
    version: &'static str,
    command: CommandName,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<StatsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<BTreeMap<String, f64>>,
}

enum Body {
    Witnesses(WitnessMatrix),
    Lists(WitnessLists),
    Triangles(TriangleFile),
    Paths(WitnessFile),
}

struct Outcome<'a> {
    body: Body,
    meta: Meta<'a>,
    /// Set when `--verify` found a problem; reported after writing.
    failure: Option<String>,
}

fn read_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::io(anyhow!("{}: {e}", path.display()))
}

fn generated_n(cfg: &RunConfig) -> usize {
    cfg.n.unwrap_or(64)
}

/// `--a/--b` files, or a generated pair: `A` is what `gen --seed S` writes
/// and `B` what `gen --seed S+1` writes.
fn load_pair(cfg: &RunConfig) -> Result<(BoolMatrix, BoolMatrix)> {
    if let (Some(a), Some(b)) = (&cfg.a, &cfg.b) {
        let ma = mio::read_matrix_file(a).map_err(|e| read_error(a, e))?;
        let mb = mio::read_matrix_file(b).map_err(|e| read_error(b, e))?;
        return Ok((ma, mb));
    }
    let (n, d) = (generated_n(cfg), cfg.density.unwrap_or(0.5));
    Ok((
        BoolMatrix::random(n, d, cfg.seed)?,
        BoolMatrix::random(n, d, cfg.seed.wrapping_add(1))?,
    ))
}

fn load_graph(cfg: &RunConfig) -> Result<Option<GraphText>> {
    match &cfg.graph {
        Some(p) => Ok(Some(mio::read_graph_file(p).map_err(|e| read_error(p, e))?)),
        None => Ok(None),
    }
}

pub fn gen(cfg: &RunConfig) -> Result<()> {
    let n = generated_n(cfg);
    let kind = cfg.algo_or("matrix");
    let out = cfg.out.as_deref();
    match kind.as_str() {
        "matrix" => {
            let m = BoolMatrix::random(n, cfg.density.unwrap_or(0.5), cfg.seed)?;
            let format = match cfg.format.as_deref() {
                None | Some("text") => MatrixFormat::Text,
                Some("binary") => MatrixFormat::Binary,
                Some(f) => {
                    return Err(Failure::config(format!(
                        "unknown matrix --format {f:?} (expected text or binary)"
                    )))
                }
            };
            write_output(out, |w| {
                match format {
                    MatrixFormat::Text => mio::write_matrix_text(w, &m)?,
                    MatrixFormat::Binary => mio::write_matrix_binary(w, &m)?,
                }
                Ok(())
            })
        }
        "dag" | "graph" | "digraph" => {
            if cfg.format.as_deref().is_some_and(|f| f != "text") {
                return Err(Failure::config(
                    "graphs are written in the text format only",
                ));
            }
            let text = match kind.as_str() {
                "dag" => GraphText::from_dag(&random_dag(n, cfg.density.unwrap_or(0.1), cfg.seed)?),
                "graph" => GraphText::from_weighted(&random_graph(
                    n,
                    cfg.density.unwrap_or(0.2),
                    cfg.seed,
                )?),
                _ => GraphText::from_weighted(&random_digraph(
                    n,
                    cfg.density.unwrap_or(0.1),
                    cfg.seed,
                )?),
            };
            write_output(out, |w| Ok(mio::write_graph_text(w, &text)?))
        }
        other => Err(Failure::config(format!(
            "unknown instance kind {other:?} (expected matrix, dag, graph or digraph)"
        ))),
    }
}

/// Allowed error rate for a boosted simulated-quantum run over `entries`
/// entries: `n^(−β)` plus three binomial σ.
fn quantum_tolerance(n: usize, beta: u32, entries: usize) -> f64 {
    let p = (n.max(2) as f64).powi(-(beta as i32));
    p + 3.0 * binomial_sigma(p, entries)
}

fn verification_json<T: Serialize>(v: &T) -> Option<serde_json::Value> {
    Some(serde_json::to_value(v).expect("serializable"))
}

pub fn solve(cfg: &RunConfig) -> Result<()> {
    let mut timer = PhaseTimer::new();
    let outcome = match cfg.command.expect("set") {
        CommandName::Maxwit => maxwit_cmd(cfg, &mut timer)?,
        CommandName::Approx => approx_cmd(cfg, &mut timer)?,
        CommandName::Kwitness => kwitness_cmd(cfg, &mut timer)?,
        CommandName::Lca | CommandName::Triangle | CommandName::TwoEdge => {
            graph_cmd(cfg, &mut timer)?
        }
        other => unreachable!("{other:?} is not a solver command"),
    };
    let Outcome {
        body,
        mut meta,
        failure,
    } = outcome;
    if cfg.timing {
        timer.lap("write");
        meta.timing = Some(timer.into_map());
    }
    write_result(cfg, body, &meta)?;
    match failure {
        Some(msg) => Err(Failure::verification(msg)),
        None => Ok(()),
    }
}

fn write_result(cfg: &RunConfig, body: Body, meta: &Meta<'_>) -> Result<()> {
    let format = cfg.result_format()?;
    let meta_value = serde_json::to_value(meta).expect("serializable");
    let out = cfg.out.as_deref();
    match format {
        Format::Json => match body {
            Body::Witnesses(w) => {
                let mut f = WitnessFile::from_matrix(&w, cfg.one_based);
                f.meta = Some(meta_value);
                write_json_to(out, &f)
            }
            Body::Lists(l) => {
                let mut f = ListsFile::from_lists(&l, cfg.one_based);
                f.meta = Some(meta_value);
                write_json_to(out, &f)
            }
            Body::Triangles(mut f) => {
                f.meta = Some(meta_value);
                write_json_to(out, &f)
            }
            Body::Paths(mut f) => {
                f.meta = Some(meta_value);
                write_json_to(out, &f)
            }
        },
        Format::Csv => {
            write_output(out, |w| {
                match &body {
                    Body::Witnesses(m) => mio::write_witness_csv(w, m, cfg.one_based)?,
                    Body::Lists(l) => mio::write_lists_csv(w, l, cfg.one_based)?,
                    Body::Triangles(f) => mio::write_triangles_csv(w, f)?,
                    Body::Paths(f) => mio::write_paths_csv(w, f)?,
                }
                Ok(())
            })?;
            if let Some(out) = out {
                write_json_to(Some(&meta_path(out)), &meta_value)?;
            }
            Ok(())
        }
    }
}

fn meta(cfg: &RunConfig) -> Meta<'_> {
    Meta {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        command: cfg.command.expect("set"),
        config: cfg,
        stats: None,
        verification: None,
        timing: None,
    }
}

fn maxwit_cmd<'a>(cfg: &'a RunConfig, timer: &mut PhaseTimer) -> Result<Outcome<'a>> {
    let (a, b) = load_pair(cfg)?;
    timer.lap("load");
    let n = a.rows().max(a.cols()).max(b.cols());
    let algo = cfg.algo_or("strips");
    let beta = cfg.beta.unwrap_or(2);
    let ell = cfg.ell.unwrap_or_else(|| default_strip_width(a.cols()));
    let quantum = |out: SimOutput, ell: Option<usize>| -> (WitnessMatrix, Option<StatsReport>) {
        let mut s = StatsReport::new(n, &algo, &out.stats, cfg.seed);
        s.beta = Some(beta);
        s.ell = ell;
        (out.witnesses, Some(s))
    };
    let uses_ell = matches!(algo.as_str(), "strips" | "alg4");
    let uses_beta = algo.starts_with("alg");
    if cfg.ell.is_some() && !uses_ell {
        return Err(Failure::config(format!(
            "--ell does not apply to --algo {algo}"
        )));
    }
    if cfg.beta.is_some() && !uses_beta {
        return Err(Failure::config(format!(
            "--beta does not apply to --algo {algo}"
        )));
    }
    let (witnesses, mut stats) = match algo.as_str() {
        "oracle" => (max_witness_oracle(&a, &b)?, None),
        "strips" => (exact_max_witness_strips(&a, &b, ell)?, None),
        "alg1" => quantum(algorithm1(&a, &b, beta, cfg.seed)?, None),
        "alg2" => quantum(algorithm2(&a, &b, beta, cfg.seed)?, None),
        "alg3" => quantum(algorithm3(&a, &b, beta, cfg.seed)?, None),
        "alg4" => quantum(algorithm4(&a, &b, ell, beta, cfg.seed)?, Some(ell)),
        other => {
            return Err(Failure::config(format!(
                "unknown --algo {other:?} (expected oracle, strips, alg1, alg2, alg3 or alg4)"
            )))
        }
    };
    timer.lap("solve");
    if let Some(s) = stats.as_mut() {
        let truth = max_witness_oracle(&a, &b)?;
        s.error_rate_vs_oracle =
            Some(witnesses.disagreements(&truth) as f64 / (truth.rows() * truth.cols()) as f64);
    }
    let mut m = meta(cfg);
    let mut failure = None;
    if cfg.verify {
        let report = verify_witnesses(&a, &b, &witnesses, RankBound::Exact)?;
        let tolerance = if uses_beta {
            quantum_tolerance(n, beta, report.entries)
        } else {
            0.0
        };
        if report.invalid_witnesses > 0 || report.disagreement_rate > tolerance {
            failure = Some(format!(
                "{} invalid witnesses, disagreement rate {:.3e} (allowed {tolerance:.3e})",
                report.invalid_witnesses, report.disagreement_rate
            ));
        }
        m.verification = verification_json(&report);
        timer.lap("verify");
    }
    m.stats = stats;
    Ok(Outcome {
        body: Body::Witnesses(witnesses),
        meta: m,
        failure,
    })
}

fn approx_cmd<'a>(cfg: &'a RunConfig, timer: &mut PhaseTimer) -> Result<Outcome<'a>> {
    let (a, b) = load_pair(cfg)?;
    timer.lap("load");
    let mode = cfg.algo_or("rank-bounded");
    let (witnesses, bound) = match mode.as_str() {
        "rank-bounded" => {
            if cfg.k.is_some() || cfg.reps.is_some() {
                return Err(Failure::config("--k/--reps apply to --algo multiwitness"));
            }
            let ell = cfg.ell.unwrap_or_else(|| default_strip_width(a.cols()));
            (
                approx_rank_bounded(&a, &b, ell, cfg.seed)?,
                RankBound::AtMost { ell },
            )
        }
        "multiwitness" => {
            if cfg.ell.is_some() {
                return Err(Failure::config("--ell applies to --algo rank-bounded"));
            }
            let params = ApproxParams::new(cfg.k.unwrap_or(4), cfg.reps.unwrap_or(1), cfg.seed)?;
            (
                approx_multiwitness_boosted(&a, &b, params)?,
                RankBound::Multiwitness { k: params.k },
            )
        }
        other => {
            return Err(Failure::config(format!(
                "unknown --algo {other:?} (expected rank-bounded or multiwitness)"
            )))
        }
    };
    timer.lap("solve");
    let mut m = meta(cfg);
    let mut failure = None;
    if cfg.verify {
        let report = verify_witnesses(&a, &b, &witnesses, bound)?;
        // The rank-bounded guarantee is deterministic; the multi-witness one
        // holds only with constant probability per entry.
        let rank_fails = matches!(bound, RankBound::AtMost { .. }) && report.rank_violations > 0;
        if report.invalid_witnesses > 0 || report.missing > 0 || rank_fails {
            failure = Some(format!(
                "{} invalid witnesses, {} missing, {} rank violations",
                report.invalid_witnesses, report.missing, report.rank_violations
            ));
        }
        m.verification = verification_json(&report);
        timer.lap("verify");
    }
    Ok(Outcome {
        body: Body::Witnesses(witnesses),
        meta: m,
        failure,
    })
}

fn kwitness_cmd<'a>(cfg: &'a RunConfig, timer: &mut PhaseTimer) -> Result<Outcome<'a>> {
    let (a, b) = load_pair(cfg)?;
    timer.lap("load");
    let lists = k_witness(&a, &b, cfg.k.unwrap_or(4), cfg.seed)?;
    timer.lap("solve");
    let mut m = meta(cfg);
    let mut failure = None;
    if cfg.verify {
        let report = verify_lists(&a, &b, &lists)?;
        if !report.is_valid() {
            failure = Some(format!(
                "{} lists of wrong length, {} invalid lists",
                report.wrong_length, report.invalid
            ));
        }
        m.verification = verification_json(&report);
        timer.lap("verify");
    }
    Ok(Outcome {
        body: Body::Lists(lists),
        meta: m,
        failure,
    })
}

fn graph_solver(cfg: &RunConfig, n: usize) -> Result<Solver> {
    let algo = cfg.algo_or("strips");
    let ell = cfg.ell.unwrap_or_else(|| default_strip_width(n));
    if cfg.beta.is_some() && algo != "alg4" {
        return Err(Failure::config("--beta applies to --algo alg4"));
    }
    if cfg.ell.is_some() && algo == "oracle" {
        return Err(Failure::config("--ell does not apply to --algo oracle"));
    }
    match algo.as_str() {
        "oracle" => Ok(Solver::Oracle),
        "strips" => Ok(Solver::Strips { ell }),
        "alg4" => Ok(Solver::Algorithm4 {
            ell,
            beta: cfg.beta.unwrap_or(2),
            seed: cfg.seed,
        }),
        other => Err(Failure::config(format!(
            "unknown --algo {other:?} (expected oracle, strips or alg4)"
        ))),
    }
}

#[derive(Serialize)]
struct GraphCheck {
    answers: usize,
    mismatches: usize,
    mismatch_rate: f64,
    allowed_rate: f64,
}

fn graph_check(
    answers: usize,
    mismatches: usize,
    n: usize,
    solver: Solver,
) -> (GraphCheck, Option<String>) {
    let allowed_rate = match solver {
        Solver::Algorithm4 { beta, .. } => quantum_tolerance(n, beta, answers),
        _ => 0.0,
    };
    let mismatch_rate = if answers == 0 {
        0.0
    } else {
        mismatches as f64 / answers as f64
    };
    let failure = (mismatch_rate > allowed_rate)
        .then(|| format!("{mismatches} of {answers} answers differ from brute force (allowed rate {allowed_rate:.3e})"));
    (
        GraphCheck {
            answers,
            mismatches,
            mismatch_rate,
            allowed_rate,
        },
        failure,
    )
}

fn graph_cmd<'a>(cfg: &'a RunConfig, timer: &mut PhaseTimer) -> Result<Outcome<'a>> {
    let command = cfg.command.expect("set");
    if cfg.lightest && command != CommandName::Triangle {
        return Err(Failure::config("--lightest applies to triangle"));
    }
    let text = load_graph(cfg)?;
    let n = text.as_ref().map_or_else(|| generated_n(cfg), |t| t.n);
    let solver = graph_solver(cfg, n)?;
    let mut m = meta(cfg);
    let mut failure = None;
    let body = match command {
        CommandName::Lca => {
            let dag = match &text {
                Some(t) => t.to_dag()?,
                None => random_dag(n, cfg.density.unwrap_or(0.1), cfg.seed)?,
            };
            timer.lap("load");
            let solved = all_pairs_lca(&dag, solver)?;
            timer.lap("solve");
            m.stats = solved.stats.map(|s| graph_stats(n, "lca", &s, cfg, solver));
            if cfg.verify {
                let mut wrong = 0;
                for u in 0..n {
                    for v in 0..n {
                        let set = brute_force_lca_set(&dag, u, v)?;
                        let ok = match solved.table.get(u, v) {
                            None => set.is_empty(),
                            Some(w) => set.contains(&w),
                        };
                        wrong += usize::from(!ok);
                    }
                }
                let (check, f) = graph_check(n * n, wrong, n, solver);
                m.verification = verification_json(&check);
                failure = f;
                timer.lap("verify");
            }
            Body::Witnesses(solved.table)
        }
        CommandName::Triangle => {
            let g = match &text {
                Some(t) => t.to_weighted(false)?,
                None => random_graph(n, cfg.density.unwrap_or(0.2), cfg.seed)?,
            };
            timer.lap("load");
            let solved = if cfg.lightest {
                lightest_triangle_per_edge(&g, solver)?
            } else {
                heaviest_triangle_per_edge(&g, solver)?
            };
            timer.lap("solve");
            m.stats = solved
                .stats
                .map(|s| graph_stats(n, "triangle", &s, cfg, solver));
            if cfg.verify {
                let brute = if cfg.lightest {
                    brute_force_lightest_triangle
                } else {
                    brute_force_heaviest_triangle
                };
                let wrong = solved
                    .table
                    .iter()
                    .filter(|e| e.apex != brute(&g, e.u, e.v))
                    .count();
                let (check, f) = graph_check(solved.table.len(), wrong, n, solver);
                m.verification = verification_json(&check);
                failure = f;
                timer.lap("verify");
            }
            Body::Triangles(TriangleFile::new(n, &solved.table, cfg.one_based))
        }
        CommandName::TwoEdge => {
            let g = match &text {
                Some(t) => t.to_weighted(true)?,
                None => random_digraph(n, cfg.density.unwrap_or(0.1), cfg.seed)?,
            };
            timer.lap("load");
            let solved = max_weight_two_edge_paths(&g, solver)?;
            timer.lap("solve");
            m.stats = solved
                .stats
                .map(|s| graph_stats(n, "two-edge", &s, cfg, solver));
            if cfg.verify {
                let mut wrong = 0;
                for i in 0..n {
                    for j in 0..n {
                        wrong += usize::from(
                            solved.table.get(i, j) != brute_force_two_edge_path(&g, i, j),
                        );
                    }
                }
                let (check, f) = graph_check(n * n, wrong, n, solver);
                m.verification = verification_json(&check);
                failure = f;
                timer.lap("verify");
            }
            Body::Paths(WitnessFile::from_paths(&solved.table, cfg.one_based))
        }
        _ => unreachable!(),
    };
    Ok(Outcome {
        body,
        meta: m,
        failure,
    })
}

fn graph_stats(
    n: usize,
    algo: &str,
    s: &maxwit::qsim::QueryStats,
    cfg: &RunConfig,
    solver: Solver,
) -> StatsReport {
    let mut r = StatsReport::new(n, &format!("{algo}/alg4"), s, cfg.seed);
    if let Solver::Algorithm4 { ell, beta, .. } = solver {
        r.ell = Some(ell);
        r.beta = Some(beta);
    }
    r
}

fn campaign_config(cfg: &RunConfig) -> Result<CampaignConfig> {
    if let Some(path) = &cfg.config {
        let flags_set = cfg.n.is_some()
            || cfg.density.is_some()
            || cfg.ell.is_some()
            || !cfg.ells.is_empty()
            || cfg.k.is_some()
            || cfg.beta.is_some()
            || cfg.reps.is_some()
            || cfg.trials.is_some()
            || !cfg.q.is_empty()
            || cfg.algo.is_some();
        if flags_set {
            return Err(Failure::config(
                "--config replaces the campaign flags; give one or the other",
            ));
        }
        let text = fs::read_to_string(path).map_err(|e| read_error(path, e))?;
        return serde_json::from_str(&text)
            .map_err(|e| Failure::config(format!("{}: {e}", path.display())));
    }
    let kind = cfg.algo_or("durr-hoyer");
    let reject = |flags: &[(&str, bool)]| -> Result<()> {
        match flags.iter().find(|f| f.1) {
            Some((name, _)) => Err(Failure::config(format!(
                "--{name} does not apply to the {kind} campaign"
            ))),
            None => Ok(()),
        }
    };
    let n = cfg.n.unwrap_or(64);
    let campaign = match kind.as_str() {
        "durr-hoyer" => {
            reject(&[
                ("n", cfg.n.is_some()),
                ("density", cfg.density.is_some()),
                ("ell", cfg.ell.is_some()),
                ("ells", !cfg.ells.is_empty()),
                ("k", cfg.k.is_some()),
                ("beta", cfg.beta.is_some()),
                ("reps", cfg.reps.is_some()),
            ])?;
            let qs = if cfg.q.is_empty() {
                vec![64, 256, 1024, 4096]
            } else {
                cfg.q.clone()
            };
            Campaign::DurrHoyer {
                qs,
                shapes: TableShape::ALL.to_vec(),
            }
        }
        "maxwit" => {
            reject(&[
                ("q", !cfg.q.is_empty()),
                ("ell", cfg.ell.is_some()),
                ("ells", !cfg.ells.is_empty()),
                ("k", cfg.k.is_some()),
                ("reps", cfg.reps.is_some()),
            ])?;
            Campaign::MaxWit {
                n,
                density: cfg.density.unwrap_or(0.3),
                beta: cfg.beta.unwrap_or(2),
            }
        }
        "multiwitness" => {
            reject(&[
                ("q", !cfg.q.is_empty()),
                ("ell", cfg.ell.is_some()),
                ("ells", !cfg.ells.is_empty()),
                ("beta", cfg.beta.is_some()),
            ])?;
            Campaign::Multiwitness {
                n,
                density: cfg.density.unwrap_or(1.0),
                k: cfg.k.unwrap_or(4),
                reps: cfg.reps.unwrap_or(1),
            }
        }
        "algorithms" => {
            reject(&[
                ("q", !cfg.q.is_empty()),
                ("k", cfg.k.is_some()),
                ("reps", cfg.reps.is_some()),
            ])?;
            let mut ells = cfg.ells.clone();
            ells.extend(cfg.ell);
            if ells.is_empty() {
                ells = vec![1, default_strip_width(n), n];
                ells.dedup();
            }
            Campaign::Algorithms {
                ns: vec![n],
                density: cfg.density.unwrap_or(0.3),
                beta: cfg.beta.unwrap_or(2),
                ells,
            }
        }
        other => {
            return Err(Failure::config(format!(
            "unknown campaign {other:?} (expected durr-hoyer, maxwit, multiwitness or algorithms)"
        )))
        }
    };
    Ok(CampaignConfig {
        campaign,
        trials: cfg.trials.unwrap_or(100),
        seed: cfg.seed,
    })
}

pub fn campaign(cfg: &RunConfig, threads: usize) -> Result<()> {
    let config = campaign_config(cfg)?;
    let report = run_campaign(&config, threads)?;
    write_output(cfg.out.as_deref(), |w| {
        Ok(w.write_all(report.to_json().as_bytes())?)
    })
}

fn read_result_witnesses(path: &Path, cfg: &RunConfig, rows: usize, cols: usize) -> Result<Either> {
    let bytes = fs::read(path).map_err(|e| read_error(path, e))?;
    let is_json = match cfg.format.as_deref() {
        Some("json") => true,
        Some("csv") => false,
        Some(f) => {
            return Err(Failure::config(format!(
                "unknown --format {f:?} (expected json or csv)"
            )))
        }
        None => bytes.iter().find(|c| !c.is_ascii_whitespace()) == Some(&b'{'),
    };
    if !is_json {
        let w = mio::read_witness_csv(&bytes[..], rows, cols, cfg.one_based)
            .map_err(|e| read_error(path, e))?;
        return Ok(Either::Witnesses(w));
    }
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| read_error(path, e))?;
    if value.get("k").is_some() {
        let f: ListsFile = serde_json::from_value(value).map_err(|e| read_error(path, e))?;
        Ok(Either::Lists(
            f.to_lists().map_err(|e| read_error(path, e))?,
        ))
    } else {
        let f: WitnessFile = serde_json::from_value(value).map_err(|e| read_error(path, e))?;
        Ok(Either::Witnesses(
            f.to_matrix().map_err(|e| read_error(path, e))?,
        ))
    }
}

enum Either {
    Witnesses(WitnessMatrix),
    Lists(WitnessLists),
}

fn parse_bound(cfg: &RunConfig) -> Result<RankBound> {
    let bound = cfg.bound.as_deref().unwrap_or("exact");
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::config(format!("--bound {bound} needs --{flag}")))
    };
    match bound {
        "exact" => Ok(RankBound::Exact),
        "any" => Ok(RankBound::Any),
        "at-most" => Ok(RankBound::AtMost {
            ell: need(cfg.ell, "ell")?,
        }),
        "multiwitness" => Ok(RankBound::Multiwitness {
            k: need(cfg.k, "k")?,
        }),
        other => Err(Failure::config(format!(
            "unknown --bound {other:?} (expected exact, any, at-most or multiwitness)"
        ))),
    }
}

#[derive(Serialize)]
struct VerifyOutput<T: Serialize> {
    schema: u32,
    result: String,
    bound: Option<RankBound>,
    report: T,
}

/// Recomputes the oracle and writes the diff report. Exit 3 on any invalid
/// witness, on a violated deterministic rank bound, or when the
/// disagreement rate of an exact bound exceeds `--tolerance`.
pub fn verify(cfg: &RunConfig) -> Result<()> {
    let path = cfg.result.as_deref().expect("validated");
    let bound = parse_bound(cfg)?;
    let (a, b) = load_pair(cfg)?;
    let result_name = path.display().to_string();
    match read_result_witnesses(path, cfg, a.rows(), b.cols())? {
        Either::Witnesses(w) => {
            let report = verify_witnesses(&a, &b, &w, bound)?;
            write_json_to(
                cfg.out.as_deref(),
                &VerifyOutput {
                    schema: SCHEMA,
                    result: result_name,
                    bound: Some(bound),
                    report: &report,
                },
            )?;
            let tolerance = cfg.tolerance.unwrap_or(0.0);
            let rank_fails =
                matches!(bound, RankBound::AtMost { .. }) && report.rank_violations > 0;
            let exact_fails = bound == RankBound::Exact && report.disagreement_rate > tolerance;
            if report.invalid_witnesses > 0 || report.missing > 0 || rank_fails || exact_fails {
                return Err(Failure::verification(format!(
                    "{} invalid, {} missing, {} rank violations, disagreement rate {:.3e}",
                    report.invalid_witnesses,
                    report.missing,
                    report.rank_violations,
                    report.disagreement_rate
                )));
            }
        }
        Either::Lists(l) => {
            let report = verify_lists(&a, &b, &l)?;
            write_json_to(
                cfg.out.as_deref(),
                &VerifyOutput {
                    schema: SCHEMA,
                    result: result_name,
                    bound: None,
                    report: &report,
                },
            )?;
            if !report.is_valid() {
                return Err(Failure::verification(format!(
                    "{} lists of wrong length, {} invalid lists",
                    report.wrong_length, report.invalid
                )));
            }
        }
    }
    Ok(())
}
