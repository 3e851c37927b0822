//! Solver-side error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// A cycle was detected where a DAG was required: the propagation
    /// queue ran dry with vertices still unprocessed.
    #[error("input is not acyclic: {unprocessed} vertices remain unprocessed")]
    NotADag { unprocessed: usize },
    /// The select step found no random candidate while unprocessed
    /// vertices remain, which only happens on non-MEC-free inputs.
    #[error("malformed input: {0}")]
    Malformed(String),
}
