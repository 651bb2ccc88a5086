use thiserror::Error;

use crate::profile::Violation;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the geometry kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The weights are not strictly triangular; the caller should use the
    /// degenerate constructions instead.
    #[error("weights {weights:?} are {class}, not STRICT; use construct_degenerate")]
    DegenerateWeights { weights: [f64; 3], class: String },

    /// A network failed validation.
    #[error("invalid network: {}", fmt_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    /// Junction structure the operation cannot handle (e.g. four curves
    /// meeting at one point).
    #[error("structural error: {0}")]
    Structural(String),

    /// A competitor does not enclose the volumes of the requested instance.
    #[error(
        "CLASS_MISMATCH: competitor encloses V1 = {measured_v1:.12e}, V2 = {measured_v2:.12e}; \
         instance requires V1 = {expected_v1:.12e}, V2 = {expected_v2:.12e}"
    )]
    ClassMismatch {
        measured_v1: f64,
        measured_v2: f64,
        expected_v1: f64,
        expected_v2: f64,
    },

    /// An operation's precondition (force balance, applicability) is unmet.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A numerical routine failed to converge or bracket.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
