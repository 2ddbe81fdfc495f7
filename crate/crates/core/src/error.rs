use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug)]
pub enum Error {
    /// Invalid geometry (non-closed cell, negative decomposition volume, ...).
    #[error("geometry error{}: {msg}", cell.map(|c| format!(" in cell {c}")).unwrap_or_default())]
    Geometry { cell: Option<usize>, msg: String },

    /// Malformed mesh or config file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A local Gram factorization detected rank deficiency.
    #[error("numerical rank deficiency: {0}")]
    NumericalRank(String),

    /// A local projector system could not be solved.
    #[error("singular local system: {0}")]
    SingularSystem(String),

    /// Global sparse factorization or solve failure.
    #[error("linear solve failed: {0}")]
    Solve(String),

    /// The SAV scalar equation denominator collapsed.
    #[error("degenerate SAV scalar equation: |denominator| = {denom:.3e} < {threshold:.3e}")]
    DegenerateScalar { denom: f64, threshold: f64 },

    /// Energy grew in a zero-load run, violating the discrete energy law.
    #[error("energy increased by {increase:.3e} at step {step} of a zero-load run")]
    NonmonotoneEnergy { step: usize, increase: f64 },

    /// Local/global DOF layout mismatch (programming error guard).
    #[error("index error: {0}")]
    Index(String),

    /// Invalid run configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn geometry(cell: impl Into<Option<usize>>, msg: impl Into<String>) -> Self {
        Error::Geometry {
            cell: cell.into(),
            msg: msg.into(),
        }
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
