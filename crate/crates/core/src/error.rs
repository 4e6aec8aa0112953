use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("split ({s}, {t}) out of range for {n1}x{n2} slices")]
    SplitOutOfRange {
        s: usize,
        t: usize,
        n1: usize,
        n2: usize,
    },

    #[error("matrix is not in the image of mat(.): reconstruction residual {residual:e}")]
    NotInMatImage { residual: f64 },

    #[error("off-diagonal block ({row}, {col}) has magnitude {magnitude:e} above tolerance {tolerance:e}")]
    BlockDiagonalizationFailure {
        row: usize,
        col: usize,
        magnitude: f64,
        tolerance: f64,
    },

    #[error("{routine} did not converge within {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },

    /// Transform-domain slice `slice` (1-based) is numerically singular.
    #[error("transform-domain slice {slice} is singular (rank {rank} < {n})")]
    SingularSlice { slice: usize, rank: usize, n: usize },

    #[error("transform-domain slice ranks differ: {ranks:?}")]
    RankMismatch { ranks: Vec<usize> },

    #[error("tensor index is {0}, group inverse needs index <= 1")]
    IndexTooLarge(usize),

    /// The leading block `X_i` of transform-domain slice `slice` (1-based) is singular.
    #[error("not invertible along G: block X_{slice} is singular (rank {rank} < {expected})")]
    NotInvertibleAlong {
        slice: usize,
        rank: usize,
        expected: usize,
    },

    #[error("not a transition tensor: {0}")]
    NotStochastic(String),

    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("payload disagrees with header: {0}")]
    DimsMismatch(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }
}
