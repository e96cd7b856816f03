use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("gram matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("duplicate basis label {0}")]
    DuplicateLabel(String),
    #[error("Jacobi identity fails on basis triple {triple:?} (residual {residual})")]
    Jacobi { triple: (usize, usize, usize), residual: String },
    #[error("representation is not a homomorphism on basis pair ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("not a derivation: action of left element {left} fails Leibniz on right pair ({i}, {j})")]
    NotDerivation { left: usize, i: usize, j: usize },
    #[error("[a,r] != 0: left elements {0} and {1} do not commute")]
    NotCentral(usize, usize),
    #[error("limit diverges: bracket ({i},{j})->{k} carries exponent +{exponent}")]
    LimitDiverges { i: usize, j: usize, k: usize, exponent: i32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("decomposition unresolved: {0}")]
    Unresolved(String),
    #[error("certificate not found within grid: {0}")]
    NotFound(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
