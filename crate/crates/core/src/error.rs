use thiserror::Error;

/// Errors shared across the crate. The CLI maps these to exit code 2.
#[derive(Debug, Error, Clone)]
pub enum GaugeError {
    #[error("GaugeNotPositive: gauge '{label}' returned {value} at x = {x}")]
    GaugeNotPositive { label: String, x: f64, value: f64 },

    #[error("SubdivisionLimitExceeded: bisection depth {max_depth} exhausted on [{lo}, {hi}]")]
    SubdivisionLimitExceeded { lo: f64, hi: f64, max_depth: u32 },

    #[error("DomainMismatch: gauge domains [{a_lo}, {a_hi}] and [{b_lo}, {b_hi}] are disjoint")]
    DomainMismatch {
        a_lo: f64,
        a_hi: f64,
        b_lo: f64,
        b_hi: f64,
    },

    #[error("NonFiniteSample: integrand '{name}' returned {value} at x = {x}")]
    NonFiniteSample { name: String, x: f64, value: f64 },

    #[error("OracleRequired: operation '{op}' needs {what} on integrand '{name}'")]
    OracleRequired {
        op: &'static str,
        what: &'static str,
        name: String,
    },

    #[error("DivergenceDetected: partial sums reached {last} without settling (bound {bound})")]
    DivergenceDetected { last: f64, bound: f64 },

    #[error("UnknownCorpusEntry: no entry named '{0}'")]
    UnknownCorpusEntry(String),

    #[error("InvalidInterval: need lo < hi, got [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GaugeError>;
