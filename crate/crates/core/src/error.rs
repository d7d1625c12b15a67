use thiserror::Error;

use crate::kripke::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("signature has {0} variables, at most 32 are supported")]
    TooManyVariables(usize),

    #[error("variable `{0}` is outside the signature")]
    UnknownVariable(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("invalid Kripke model: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Diagnostic>),

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("types live over different signatures")]
    SignatureMismatch,

    #[error("operation needs a type of level at least 1")]
    LevelZero,

    #[error("formula has implication degree {degree}, above level {level}")]
    DegreeExceedsLevel { degree: u32, level: u32 },

    #[error("type is not an element of the space")]
    NotInSpace,

    #[error("set of types is not up-closed")]
    NotUpClosed,

    #[error("no separating formula: the first type is below the second")]
    NoSeparator,

    #[error("malformed type: {0}")]
    InvalidType(String),

    #[error("eliminated variable `{0}` occurs in a candidate interpolant")]
    EliminatedVariableOccurs(String),

    #[error("the antecedent does not entail the consequent")]
    NotProvable,

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("empty probe: {0}")]
    EmptyProbe(String),

    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
