//! Library half of the `pmsim` binary: run configuration, error-to-exit-code
//! mapping, the five subcommands and the acceptance suite used by `selftest`.

pub mod acceptance;
pub mod commands;
pub mod states;

use std::path::PathBuf;

use pmsim_core::automata::{apply_transform, base_automaton, enumerate_behaviors_from, Behavior, FlipPattern, PermOp};
use pmsim_core::section::{DdConfig, DdError, InsertionOrder, SectionError};
use pmsim_core::{AutomataError, EnsembleError, QuantumError};
use thiserror::Error;

pub const DEFAULT_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub dd: DdConfig,
    /// Verification depth `L`.
    pub depth: usize,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    pub verbose: bool,
    /// Row-major square position whose sign is flipped in the base automaton
    /// before enumeration. Test hook only.
    pub fault: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dd: DdConfig::default(),
            depth: DEFAULT_DEPTH,
            jobs: None,
            verbose: false,
            fault: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.depth < 2 {
            return Err(CliError::Input(format!("--depth must be at least 2, got {}", self.depth)));
        }
        if self.dd.ray_cap < 1 {
            return Err(CliError::Input("--ray-cap must be at least 1".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        if let Some(pos) = self.fault {
            if pos >= 9 {
                return Err(CliError::Input(format!("fault position {pos} is outside 0..9")));
            }
        }
        Ok(())
    }

    pub fn with_natural_order(mut self) -> Self {
        self.dd.order = InsertionOrder::Natural;
        self
    }

    /// Runs `f` on a pool of `jobs` threads, or on the global pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        match self.jobs {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }

    /// The behavior family, with the fault hook applied.
    pub fn family(&self) -> Result<Vec<Behavior>, CliError> {
        let mut base = base_automaton();
        if let Some(pos) = self.fault {
            base = apply_transform(&base, &FlipPattern::single(pos), PermOp::Identity);
        }
        Ok(enumerate_behaviors_from(&base)?)
    }
}

/// Every failure carries the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid input files.
    #[error("invalid input: {0}")]
    Input(String),
    /// The mathematics said no.
    #[error("verdict failed: {0}")]
    Verdict(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verdict(_) => 1,
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Internal(_) | CliError::Io { .. } => 4,
        }
    }
}

impl From<AutomataError> for CliError {
    fn from(e: AutomataError) -> Self {
        match e {
            AutomataError::ConstructionInvalid { .. } => CliError::Verdict(e.to_string()),
            AutomataError::IncompatibleSequence { .. } => CliError::Input(e.to_string()),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        match e {
            QuantumError::ZeroProbabilityOutcome { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        match e {
            EnsembleError::ReferenceNotInFamily { .. } => CliError::Verdict(e.to_string()),
            EnsembleError::MomentCount { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SectionError> for CliError {
    fn from(e: SectionError) -> Self {
        match e {
            SectionError::Dd(DdError::Overflow { .. }) => CliError::Resource(e.to_string()),
            SectionError::ClassificationMismatch(_) => CliError::Verdict(e.to_string()),
            SectionError::Automata(a) => a.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<pmsim_core::ArithError> for CliError {
    fn from(e: pmsim_core::ArithError) -> Self {
        CliError::Internal(e.to_string())
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_bounds() {
        assert!(RunConfig::default().validate().is_ok());
        let short = RunConfig { depth: 1, ..RunConfig::default() };
        assert_eq!(short.validate().unwrap_err().exit_code(), 2);
        let zero_jobs = RunConfig { jobs: Some(0), ..RunConfig::default() };
        assert!(zero_jobs.validate().is_err());
        let mut cap = RunConfig::default();
        cap.dd.ray_cap = 0;
        assert!(cap.validate().is_err());
    }

    #[test]
    fn fault_hook_breaks_the_family() {
        let cfg = RunConfig { fault: Some(4), ..RunConfig::default() };
        let err = cfg.family().unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("violated"), "{err}");
    }
}
