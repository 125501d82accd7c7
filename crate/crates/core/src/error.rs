use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    #[error("cannot parse group spec `{0}` (expected `G(m,p,n)` or `Z(m)@k^n`)")]
    GroupSyntax(String),

    #[error("character `{name}` is not available for {group}")]
    UnknownCharacter { name: String, group: String },

    #[error("character is not multiplicative: chi({left}*{right}) != chi({left})chi({right})")]
    NotMultiplicative { left: usize, right: usize },

    #[error("character definition invalid: {0}")]
    InvalidCharacter(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("polynomial is not analytic (has negative exponents)")]
    NotAnalytic,

    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("input is not in the isotypic component: {0}")]
    NotIsotypic(String),

    #[error("polynomial is not invariant under the group")]
    NotInvariant,

    #[error("index {0:?} is not a canonical representative of the index set")]
    NotCanonical(Vec<i32>),

    #[error("point lies outside the domain: {0}")]
    OutsideDomain(String),

    #[error("relative invariant vanishes at the evaluation point (|l(z)| = {value:e}); use the series kernel")]
    SingularPoint { value: f64 },

    #[error("branch guard violated: Re det(I - Z W*) = {0:e} <= 0")]
    BranchGuard(f64),

    #[error("window too small: need D >= {required}, got {got}")]
    MarginTooSmall { required: u32, got: u32 },

    #[error("entries do not stabilise along diagonal shifts at rows {row:?}, cols {col:?} (spread {spread:e})")]
    NotStabilising { row: Vec<i32>, col: Vec<i32>, spread: f64 },

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
