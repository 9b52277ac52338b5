use thiserror::Error;

/// Errors raised by the algebra and reduction routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not unimodular")]
    NotUnimodular,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a cocycle")]
    NotACocycle,

    #[error("invalid minimal model: {0}")]
    InvalidModel(String),

    #[error("zero polynomial has no P-degree")]
    ZeroPolynomial,

    #[error("rational H-space; no forms to extract")]
    RationalHSpace,

    #[error("all bilinear forms are zero")]
    ZeroForms,

    #[error("missing variable `{0}`")]
    MissingVariable(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("search budget exceeded: box has {required} points, {explored} nodes explored, budget {budget}")]
    BudgetExceeded {
        required: String,
        explored: u64,
        budget: u64,
    },

    #[error("malformed attaching data: {0}")]
    MalformedAttaching(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid stabilizer: {0}")]
    InvalidStabilizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;
