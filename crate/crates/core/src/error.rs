use thiserror::Error;

/// Errors surfaced by estimation, bandwidth selection, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation point {t} lies outside the support ({lower}, {upper})")]
    OutOfDomain { t: f64, lower: f64, upper: f64 },

    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("bandwidth must be a positive finite number, got {0}")]
    InvalidBandwidth(f64),

    #[error("invalid estimator configuration: {0}")]
    InvalidSpec(String),

    #[error("invalid evaluation grid: {0}")]
    InvalidGrid(String),

    #[error("bandwidth selection failed: {0}")]
    BandwidthSelection(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("invalid simulation configuration: {0}")]
    InvalidConfig(String),

    #[error("{failures} of {attempts} estimator evaluations failed ({rate:.2}% > 1%)")]
    TooManyFailures {
        failures: usize,
        attempts: usize,
        rate: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
