use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A series operation produced an empty truncation window.
    #[error("window underflow")]
    WindowUnderflow,

    /// Attempt to invert a series whose leading coefficient vanishes.
    #[error("not invertible")]
    NotInvertible,

    /// The coefficient of z^-1 lies in the unknown region of the window.
    #[error("residue outside window")]
    ResidueOutsideWindow,

    /// Matrix or vector sizes do not match.
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    /// An operator expected to be monic of order 0 is not.
    #[error("not in big-cell group")]
    NotMonic,

    /// A Grassmannian point violates a big-cell precondition.
    #[error("big-cell violation")]
    BigCellViolation,

    /// A generator has support outside the declared window.
    #[error("generator outside window: order {0}")]
    GeneratorOutsideWindow(i64),

    /// The truncation floor is too shallow to certify the requested result.
    #[error("truncation floor insufficient: {0}")]
    FloorInsufficient(String),

    /// The characteristic polynomial has a repeated root at the expansion point.
    #[error("ramified at p")]
    Ramified,

    /// An eigenbranch does not live in the configured coefficient domain.
    #[error("irrational branch")]
    IrrationalBranch,

    /// Sp flows require a seed on the twisted self-adjoint locus.
    #[error("not on the Sp locus")]
    NotOnSpLocus,

    /// A parameter is outside the range a formula assumes.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed JSON payload.
    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
