//! Library side of the `maxwit` command-line tool: argument model, command
//! dispatch and output writing. `main.rs` only maps failures to exit codes.

mod commands;
mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use serde::Serialize;

pub use config::{Cli, Command, CommandName, Format, RunConfig};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "MAXWIT_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Config,
    Io,
    Verification,
}

/// A failed run and the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub kind: FailureKind,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn config(msg: impl std::fmt::Display) -> Self {
        Self {
            kind: FailureKind::Config,
            error: anyhow!("{msg}"),
        }
    }

    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Self {
            kind: FailureKind::Io,
            error: error.into(),
        }
    }

    pub fn verification(msg: impl std::fmt::Display) -> Self {
        Self {
            kind: FailureKind::Verification,
            error: anyhow!("verification failed: {msg}"),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            FailureKind::Config => 1,
            FailureKind::Io => 2,
            FailureKind::Verification => 3,
        }
    }
}

impl From<maxwit::io::IoError> for Failure {
    fn from(e: maxwit::io::IoError) -> Self {
        Failure::io(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::io(e)
    }
}

/// Solver errors come from parameters outside an operation's domain.
macro_rules! config_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { kind: FailureKind::Config, error: e.into() }
            }
        }
    )*};
}

config_errors!(
    maxwit::MatrixError,
    maxwit::witness::WitnessError,
    maxwit::qsim::QsimError,
    maxwit::graphs::GraphError,
    maxwit::campaign::CampaignError
);

pub type Result<T, E = Failure> = std::result::Result<T, E>;

/// Worker threads from [`THREADS_ENV`]; `0` leaves the choice to rayon.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::config(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        Err(_) => Ok(0),
    }
}

/// Validates and runs one parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let (name, mut config) = cli.command.into_parts();
    config.command = Some(name);
    config.validate()?;
    let threads = threads_from_env()?;
    if name == CommandName::Campaign {
        // Campaigns size their own pool so reports can be compared across counts.
        return commands::campaign(&config, threads);
    }
    if threads > 0 {
        // Fails only if a pool already exists, as in repeated calls from tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match name {
        CommandName::Gen => commands::gen(&config),
        CommandName::Verify => commands::verify(&config),
        _ => commands::solve(&config),
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::io(anyhow!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

/// Writes to `--out` or stdout.
fn write_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let mut w = open_out(path)?;
    f(&mut *w)?;
    w.flush()?;
    Ok(())
}

fn write_json_to<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    write_output(path, |w| Ok(maxwit::io::write_json(w, value)?))
}

/// Sidecar for metadata of CSV results: `<out>.meta.json`.
fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}
