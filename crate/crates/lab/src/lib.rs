//! The cocycle laboratory: seeded numerical and symbolic checks collected
//! into a JSON report.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{Prefactor, Suite, SuiteConfig};
pub use report::{Bound, Record, RunReport};
pub use suites::{render_certificates, run_suite};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("certificate: {0}")]
    Certificate(String),
    #[error("computation: {0}")]
    Compute(String),
}

impl LabError {
    /// 2 for bad input, 1 for a failed computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Compute(_) => 1,
            _ => 2,
        }
    }
}
