//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("trit value {0} out of range (must be 0, 1 or 2)")]
    InvalidTrit(u8),

    #[error("index {index} out of range for {lines} lines")]
    IndexOutOfRange { index: usize, lines: usize },

    #[error("not a permutation: {0}")]
    InvalidPerm(String),

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("synthesis exceeded the gate limit of {limit}")]
    GateLimit { limit: usize },

    #[error("subcircuits do not commute; they cannot be freely reordered")]
    NonCommuting,

    #[error("gate with {0} controls is not covered by the single-control cost model")]
    MultiControlCost(usize),

    #[error("verification failed at rank {rank} for method {method}")]
    Verification { rank: u64, method: String },

    #[error("corrupt checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
