use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position} in {input:?}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error("word {0:?} ends in 'a' and has no composite form")]
    EndsInA(String),

    #[error("word {0:?} is not admissible")]
    NotAdmissible(String),

    #[error("index {0} is divergent")]
    Divergent(String),

    #[error("empty index has no word form")]
    EmptyIndex,

    #[error("cut position {position} out of range 0..={len}")]
    CutOutOfRange { position: usize, len: usize },

    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("insufficient relations: unresolved atoms {0:?}")]
    InsufficientRelations(Vec<String>),

    #[error("basis dependent: relation among basis atoms {0:?}")]
    BasisDependent(Vec<String>),

    #[error("basis atom {0} is not an admissible word of weight {1}")]
    BadBasis(String, usize),

    #[error("A-series of order {have} cannot act on degree {need}")]
    DegreeOverflow { have: usize, need: usize },

    #[error("need zeta values up to {need}, got up to {have}")]
    InsufficientOrder { have: usize, need: usize },

    #[error("precision target 1e-{digits} unreachable with {terms} series terms")]
    Precision { digits: u32, terms: usize },

    #[error("fixture error: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_error(input: &str, position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        position,
        message: message.into(),
    }
}
