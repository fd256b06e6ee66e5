//! Brute-force counts to check the closed forms against.

mod cache;
mod classes;
mod dedup;
mod density;
mod report;
mod tower;

use thiserror::Error;

use crate::counts::FormulaError;
use crate::padic::PadicError;

pub use cache::Cache;
pub use classes::{cubic_congruence_measure, measure_set, CoeffClass};
pub use dedup::{dedup_counts, same_stem, DEFAULT_BUDGET};
pub use density::{certified_classes, class_of, density_counts, measure_to_count, CertifiedClass, DensityResult};
pub use report::{verify, Method, OracleTable, ReportRow, Status, VerificationReport, VerifyOptions};
pub use tower::{fibre_size, tower_counts, TowerResult};

/// Stamped into cache files and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("class instability: {0}")]
    ClassInstability(String),
    #[error("non-integral count for {what}: {value}")]
    NonIntegralCount { what: String, value: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("cache: {0}")]
    Cache(String),
}

impl OracleError {
    /// Precision or budget trouble rather than a disagreement.
    pub fn is_resource(&self) -> bool {
        match self {
            OracleError::BudgetExceeded(_) => true,
            OracleError::Padic(e) => matches!(e, PadicError::PrecisionExhausted(_) | PadicError::BudgetExceeded(_)),
            _ => false,
        }
    }
}
