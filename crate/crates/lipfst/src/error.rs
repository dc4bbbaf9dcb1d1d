use thiserror::Error;

/// Errors shared by every analysis in this crate.
///
/// Anything that makes an input object malformed, or a query meaningless for
/// the given object, is reported here instead of through a verdict type.
/// Verdicts are reserved for well-posed questions with a yes/no answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("letter {letter:?} is not in the {side} alphabet")]
    UnknownLetter { letter: String, side: &'static str },

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("{0}")]
    Malformed(String),

    #[error("transducer is not functional")]
    NotFunctional,

    #[error("transducer is not synchronized: {0}")]
    NotSynchronized(String),

    #[error("similarity automaton is not functional (bound {bound} check failed)")]
    SimilarityNotFunctional { bound: usize },

    #[error("invalid difference table: {0}")]
    InvalidDiffTable(String),

    #[error("invalid value function: {0}")]
    InvalidValueFunction(String),

    #[error("value function mismatch: {0}")]
    ValueFunctionMismatch(String),

    #[error("unsupported query: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("generator spec infeasible: {0}")]
    Infeasible(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
