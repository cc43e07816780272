use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "maxwit",
    version,
    about = "Maximum witnesses of Boolean matrix products"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Gen,
    Maxwit,
    Approx,
    Kwitness,
    Lca,
    Triangle,
    TwoEdge,
    Campaign,
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random matrix, dag or weighted graph.
    Gen(RunConfig),
    /// Maximum witnesses with one of the exact or simulated-quantum solvers.
    Maxwit(RunConfig),
    /// Approximate witnesses of bounded rank.
    Approx(RunConfig),
    /// Up to k witnesses per entry.
    Kwitness(RunConfig),
    /// All-pairs lowest common ancestors of a dag.
    Lca(RunConfig),
    /// Heaviest (or lightest) triangle through each edge.
    Triangle(RunConfig),
    /// Maximum-weight two-edge path between all ordered pairs.
    TwoEdge(RunConfig),
    /// Seeded Monte-Carlo statistics campaign.
    Campaign(RunConfig),
    /// Check a result file against the oracle.
    Verify(RunConfig),
}

impl Command {
    pub fn into_parts(self) -> (CommandName, RunConfig) {
        match self {
            Command::Gen(c) => (CommandName::Gen, c),
            Command::Maxwit(c) => (CommandName::Maxwit, c),
            Command::Approx(c) => (CommandName::Approx, c),
            Command::Kwitness(c) => (CommandName::Kwitness, c),
            Command::Lca(c) => (CommandName::Lca, c),
            Command::Triangle(c) => (CommandName::Triangle, c),
            Command::TwoEdge(c) => (CommandName::TwoEdge, c),
            Command::Campaign(c) => (CommandName::Campaign, c),
            Command::Verify(c) => (CommandName::Verify, c),
        }
    }
}

/// Every flag of every subcommand; [`RunConfig::validate`] rejects flags
/// the chosen subcommand does not use. Reports embed this struct verbatim.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct RunConfig {
    #[arg(skip)]
    pub command: Option<CommandName>,
    /// Matrix size or vertex count of a generated instance.
    #[arg(long)]
    pub n: Option<usize>,
    /// Entry density or edge probability of a generated instance.
    #[arg(long)]
    pub density: Option<f64>,
    /// Strip width.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Strip widths for the algorithms campaign (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub ells: Vec<usize>,
    /// Witnesses per entry (kwitness) or the multi-witness parameter.
    #[arg(long)]
    pub k: Option<usize>,
    /// Boosting exponent: MaxWit runs ⌈β·log₂ n⌉ repetitions.
    #[arg(long)]
    pub beta: Option<u32>,
    /// Independent multi-witness runs.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Table sizes for the Dürr–Høyer campaign (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<usize>,
    /// Solver, approximation mode, campaign or instance kind.
    #[arg(long)]
    pub algo: Option<String>,
    /// Left matrix file (text or binary).
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Right matrix file.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Graph file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Result file to verify.
    #[arg(long)]
    pub result: Option<PathBuf>,
    /// Campaign configuration JSON, replacing the campaign flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// json|csv for results, text|binary for generated matrices.
    #[arg(long)]
    pub format: Option<String>,
    /// Write 1-based indices in results.
    #[arg(long)]
    pub one_based: bool,
    /// Check the output against the oracle; exit 3 on failure.
    #[arg(long)]
    pub verify: bool,
    /// Lightest instead of heaviest triangles.
    #[arg(long)]
    pub lightest: bool,
    /// Promised witness quality for `verify`: exact|any|at-most|multiwitness.
    #[arg(long)]
    pub bound: Option<String>,
    /// Allowed disagreement rate for `verify --bound exact`.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Record wall-clock time per phase (makes reports nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn bad<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::config(msg.into()))
}

impl RunConfig {
    fn command(&self) -> CommandName {
        self.command.expect("command set before validation")
    }

    /// Names of the flags that are set.
    fn set_flags(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut push = |on: bool, name: &'static str| {
            if on {
                v.push(name);
            }
        };
        push(self.n.is_some(), "n");
        push(self.density.is_some(), "density");
        push(self.ell.is_some(), "ell");
        push(!self.ells.is_empty(), "ells");
        push(self.k.is_some(), "k");
        push(self.beta.is_some(), "beta");
        push(self.reps.is_some(), "reps");
        push(self.trials.is_some(), "trials");
        push(!self.q.is_empty(), "q");
        push(self.algo.is_some(), "algo");
        push(self.a.is_some(), "a");
        push(self.b.is_some(), "b");
        push(self.graph.is_some(), "graph");
        push(self.result.is_some(), "result");
        push(self.config.is_some(), "config");
        push(self.format.is_some(), "format");
        push(self.one_based, "one-based");
        push(self.verify, "verify");
        push(self.lightest, "lightest");
        push(self.bound.is_some(), "bound");
        push(self.tolerance.is_some(), "tolerance");
        push(self.timing, "timing");
        v
    }

    fn allowed(&self) -> &'static [&'static str] {
        use CommandName::*;
        match self.command() {
            Gen => &["n", "density", "algo", "format"],
            Maxwit => &[
                "n",
                "density",
                "a",
                "b",
                "format",
                "one-based",
                "verify",
                "timing",
                "algo",
                "ell",
                "beta",
            ],
            Approx => &[
                "n",
                "density",
                "a",
                "b",
                "format",
                "one-based",
                "verify",
                "timing",
                "algo",
                "ell",
                "k",
                "reps",
            ],
            Kwitness => &[
                "n",
                "density",
                "a",
                "b",
                "format",
                "one-based",
                "verify",
                "timing",
                "k",
            ],
            Lca | TwoEdge => &[
                "n",
                "density",
                "graph",
                "format",
                "one-based",
                "verify",
                "timing",
                "algo",
                "ell",
                "beta",
            ],
            Triangle => &[
                "n",
                "density",
                "graph",
                "format",
                "one-based",
                "verify",
                "timing",
                "algo",
                "ell",
                "beta",
                "lightest",
            ],
            Campaign => &[
                "n", "density", "ell", "ells", "k", "beta", "reps", "trials", "q", "algo", "config",
            ],
            Verify => &[
                "n",
                "density",
                "a",
                "b",
                "result",
                "format",
                "one-based",
                "bound",
                "ell",
                "k",
                "tolerance",
            ],
        }
    }

    /// Checks flag relevance and value ranges before dispatch.
    pub fn validate(&self) -> Result<(), Failure> {
        let allowed = self.allowed();
        if let Some(flag) = self.set_flags().into_iter().find(|f| !allowed.contains(f)) {
            return bad(format!("--{flag} does not apply to this command"));
        }
        if let Some(d) = self.density {
            if !(0.0..=1.0).contains(&d) {
                return bad(format!("--density {d} is outside [0, 1]"));
            }
        }
        if self.n == Some(0) {
            return bad("--n must be at least 1");
        }
        if self.beta == Some(0) {
            return bad("--beta must be at least 1");
        }
        if self.a.is_some() != self.b.is_some() {
            return bad("--a and --b must be given together");
        }
        if self.a.is_some() && (self.n.is_some() || self.density.is_some()) {
            return bad("--n/--density generate an instance; drop them when reading --a/--b");
        }
        if self.graph.is_some() && (self.n.is_some() || self.density.is_some()) {
            return bad("--n/--density generate a graph; drop them when reading --graph");
        }
        if let Some(t) = self.tolerance {
            if !(0.0..=1.0).contains(&t) {
                return bad("--tolerance must lie in [0, 1]");
            }
        }
        if self.command() != CommandName::Gen {
            self.result_format()?;
        }
        if self.command() == CommandName::Verify && self.result.is_none() {
            return bad("verify needs --result");
        }
        Ok(())
    }

    pub fn algo_or(&self, default: &'static str) -> String {
        self.algo.clone().unwrap_or_else(|| default.to_string())
    }

    /// Result format: explicit `--format`, else the `--out` extension, else JSON.
    pub fn result_format(&self) -> Result<Format, Failure> {
        match self.format.as_deref() {
            Some("json") => Ok(Format::Json),
            Some("csv") => Ok(Format::Csv),
            Some(other) => bad(format!("unknown --format {other:?} (expected json or csv)")),
            None => Ok(
                match self
                    .out
                    .as_ref()
                    .and_then(|p| p.extension())
                    .and_then(|e| e.to_str())
                {
                    Some("csv") => Format::Csv,
                    _ => Format::Json,
                },
            ),
        }
    }
}
