use thiserror::Error;

/// Crate-wide error type.
///
/// Every fallible operation reports which precondition failed and with what
/// data; nothing is silently clamped or truncated.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("resource limit exceeded: {0}")]
    ResourceExhausted(String),

    #[error("sequence too short: {0}")]
    SequenceTooShort(String),

    #[error("support too wide for N={n}: {detail}")]
    SupportTooWide { n: usize, detail: String },

    #[error("rational input: {0}")]
    RationalInput(String),

    #[error("coset truncation insufficient: need c_max >= {needed}, got {got}")]
    TruncationInsufficient { needed: i64, got: i64 },

    #[error("matrix not unimodular: |det - 1| = {excess:.3e} exceeds {tol:.1e}")]
    NotUnimodular { excess: f64, tol: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
