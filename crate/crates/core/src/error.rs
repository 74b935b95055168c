use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph must be connected")]
    Disconnected,

    #[error("{what} requires {limit}, got {got}")]
    SizeLimit {
        what: &'static str,
        limit: String,
        got: String,
    },

    #[error("empty vertex set")]
    EmptySet,

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("orientation has unoriented edges")]
    NotFull,

    #[error("orientation contains a directed cycle")]
    Cyclic,

    #[error("sampling stayed degenerate after {attempts} attempts")]
    Degenerate { attempts: u32 },

    #[error("induced orientation failed transitivity: {0}")]
    Inconsistent(String),

    #[error("graph is not a comparability graph")]
    NotComparability,

    #[error("inconclusive after {trials} spectral trials; brute force out of range")]
    Inconclusive { trials: u32 },

    #[error("generation failed after {attempts} rejection attempts")]
    GenerationFailed { attempts: u32 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
