use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// Hypothesis failures carry the name of the violated hypothesis so that
/// pipelines can report exactly which assumption broke; corollary violations
/// are the structured diagnostics produced by `eval_f` in reduced-parameter
/// mode.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("letter {letter} out of range for alphabet of size {alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("invalid operation table: {0}")]
    InvalidOp(String),
    #[error("unknown builtin operation `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("hypothesis `{name}` failed: {detail}")]
    Hypothesis { name: &'static str, detail: String },
    #[error("no cycle walk of length {length}")]
    MissingCycle { length: usize },
    #[error("{what} budget exceeded: needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        budget: u64,
    },
    #[error("`{name}` violated on word {word:?}: {detail}")]
    CorollaryViolated {
        name: &'static str,
        word: Vec<u8>,
        detail: String,
    },
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {detail}")]
    Parse { path: PathBuf, detail: String },
}
