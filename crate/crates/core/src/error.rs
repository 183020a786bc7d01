use thiserror::Error;

/// Errors raised by the subshift library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration cap of {cap} words exceeded at length {length}")]
    CapExceeded { cap: u64, length: usize },

    #[error("word length {n} is too short for a potential of range {range} (need n > {min})")]
    Range { n: usize, range: usize, min: usize },

    #[error("empty sample set")]
    EmptySamples,

    #[error("sample {index} has length {len}, shorter than offset {offset} + target length {target}")]
    SampleTooShort { index: usize, len: usize, offset: usize, target: usize },

    #[error("difference window {start}..{end} needs margin {margin} inside words of length {len}")]
    WindowCoverage { start: usize, end: usize, margin: usize, len: usize },

    #[error("invalid pair: {0}")]
    InvalidPair(String),

    #[error("transition matrix is reducible")]
    Reducible,

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid transition matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parameters on the boundary of the domain: {0}")]
    Boundary(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid beta: {0}")]
    InvalidBeta(String),

    #[error("root finding failed: {0}")]
    RootNotFound(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
