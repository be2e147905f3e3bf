use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot parse interval from {0:?}")]
    IntervalSyntax(String),

    #[error("map is not strictly monotone on {interval}: {detail}")]
    NonMonotone { interval: String, detail: String },

    #[error("map is undefined at {at} on {interval}")]
    UndefinedMap { interval: String, at: String },

    #[error("support {support} is not contained in {ideal} (ideal violation{context})")]
    IdealViolation {
        support: String,
        ideal: String,
        context: String,
    },

    #[error("elements belong to different cylinders")]
    MismatchedGenerators,

    #[error("deformation parameter {hbar} is not admissible: {reason}")]
    InadmissibleHbar { hbar: f64, reason: String },

    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("bisection failed to bracket a root at u = {at}")]
    Bracketing { at: f64 },

    #[error("Fourier coefficient {n} has magnitude {magnitude:e} beyond max_n = {max_n} (aliasing)")]
    Aliasing { n: i64, max_n: i64, magnitude: f64 },

    #[error("expression error: {0}")]
    Expression(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("grid incompatibility: {0}")]
    GridIncompatible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
