//! Monte Carlo driver for the priced-comparison algorithms: seeded trial
//! grids, per-trial correctness and certificate checks, summaries against
//! closed-form bounds, and the three-model comparison table.

pub mod config;
pub mod experiment;
pub mod output;
pub mod stats;
pub mod summary;
pub mod table1;

pub use config::{Algorithm, ExperimentConfig, KSpec, ModelKind};
pub use experiment::{monte_carlo, run_detailed, run_experiment, TrialDetail, TrialOutcome, TrialRecord};
pub use summary::{summarize, BoundBinding, SummaryRow};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] priced_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Pool(#[from] rayon::ThreadPoolBuildError),
}
