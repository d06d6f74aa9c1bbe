use thiserror::Error;

use crate::digraph::Arc;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed color map: {0}")]
    MalformedMap(String),

    #[error("unsupported field order {q}: {reason}")]
    UnsupportedField { q: u64, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },

    #[error("clique enumeration budget exceeded ({0} cliques); use the certified property chain instead")]
    CliqueBudget(u64),

    /// An existence guarantee was contradicted by a concrete run. Always a bug
    /// or an uncertified target, never an expected outcome.
    #[error("theorem contradiction: {0}")]
    TheoremContradiction(String),

    #[error("homomorphism violated at arc {0}")]
    Violation(Arc),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("uncertified: {0}")]
    Uncertified(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
