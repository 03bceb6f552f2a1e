use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported matrix dimension {0} (expected 1..=4)")]
    InvalidDimension(usize),

    #[error("null momentum")]
    NullMomentum,

    #[error("non-finite momentum component")]
    NonFiniteMomentum,

    #[error("matrix is not Hermitian (relative residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("degenerate finite-difference step {0}")]
    DegenerateStep(f64),

    #[error("rotation plane needs two distinct axes")]
    DegenerateAxes,

    #[error("operator {name} is not a Hermitian projector (residual {residual:e})")]
    NotAProjector { name: String, residual: f64 },

    #[error("operator {name} does not commute with {with} (residual {residual:e})")]
    NonCommuting { name: String, with: String, residual: f64 },

    #[error("nilpotent generator {name} violates {invariant} (residual {residual:e})")]
    GeneratorInvariant {
        name: String,
        invariant: &'static str,
        residual: f64,
    },

    #[error("unknown suite '{name}'; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
