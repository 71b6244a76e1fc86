//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{what} needs {needed} qubits, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("gate {index} is not a Clifford gate ({reason})")]
    NonClifford { index: usize, reason: String },

    #[error("gate {index} is not diagonal in the Z basis")]
    NonDiagonal { index: usize },

    #[error("condition has probability {probability:.3e}; cannot condition on it")]
    Unconditionable { probability: f64 },

    #[error("expectation value has imaginary part {imag:.3e}, beyond tolerance")]
    NonRealExpectation { imag: f64 },

    #[error("phase level {level} exceeds the maximum {max}")]
    PhaseLevel { level: u32, max: u32 },

    #[error("state norm drifted to {norm_sq} after gate {index}")]
    NormDrift { index: usize, norm_sq: f64 },

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
