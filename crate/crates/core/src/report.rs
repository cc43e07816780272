//! Machine-readable run statistics.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::qsim::QueryStats;

/// Query statistics of one solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub n: usize,
    pub algo: String,
    pub beta: Option<u32>,
    pub ell: Option<usize>,
    /// Entries on which a quantum search ran.
    pub entries: usize,
    pub total_queries: u64,
    pub mean_queries_per_entry: f64,
    pub error_rate_vs_oracle: Option<f64>,
    pub seed: u64,
}

impl StatsReport {
    pub fn new(n: usize, algo: &str, stats: &QueryStats, seed: u64) -> Self {
        Self {
            n,
            algo: algo.to_string(),
            beta: None,
            ell: None,
            entries: stats.entries_searched,
            total_queries: stats.total_queries,
            mean_queries_per_entry: stats.mean_queries_per_entry(),
            error_rate_vs_oracle: None,
            seed,
        }
    }
}

/// Wall-clock seconds per named phase, in the order phases finished.
#[derive(Debug)]
pub struct PhaseTimer {
    last: Instant,
    phases: Vec<(String, f64)>,
}

impl Default for PhaseTimer {
    fn default() -> Self {
        Self {
            last: Instant::now(),
            phases: Vec::new(),
        }
    }
}

impl PhaseTimer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Closes the current phase under `name` and starts the next one.
    pub fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.phases
            .push((name.to_string(), (now - self.last).as_secs_f64()));
        self.last = now;
    }

    pub fn into_map(self) -> BTreeMap<String, f64> {
        let mut map = BTreeMap::new();
        for (name, secs) in self.phases {
            *map.entry(name).or_insert(0.0) += secs;
        }
        map
    }
}
