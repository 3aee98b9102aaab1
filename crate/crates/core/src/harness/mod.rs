//! Generators, fixtures, file formats and the experiment runner.

pub mod experiment;
pub mod fixtures;
pub mod generators;
pub mod io;

use thiserror::Error;

use crate::miners::MiningError;
use crate::oracle::OracleError;
use crate::poset::PosetError;
use crate::DEFAULT_ANTICHAIN_CAP;

pub use experiment::{
    bound_for, ground_truth, halving_bound, run_experiment, write_records, BoundInputs, ExperimentConfig,
    ExperimentRecord, OracleKind, OutputFormat, PredicateSource, TaxonomySource,
};

/// Environment variable overriding the antichain-enumeration cap.
pub const ANTICHAIN_CAP_ENV: &str = "TAXMINE_ANTICHAIN_CAP";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Mining(#[from] MiningError),
}

/// The antichain cap from the environment, or the default when unset or
/// unparsable.
pub fn antichain_cap_from_env() -> u64 {
    std::env::var(ANTICHAIN_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_ANTICHAIN_CAP)
}
