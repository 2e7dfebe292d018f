use thiserror::Error;

/// Errors produced by the numerical kernels and certification pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is numerically singular (smallest singular value {smallest:e})")]
    SingularInput { smallest: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("determinant {det} is not 1 within tolerance")]
    NotUnimodular { det: f64 },

    #[error("invalid face type: {0}")]
    BadFace(String),

    #[error("face types differ: {0}")]
    FaceMismatch(String),

    #[error("face pivots {pivots:?} in dimension {dim} are not invariant under the opposition involution")]
    NotIotaInvariant { dim: usize, pivots: Vec<usize> },

    #[error("not a permutation: {0}")]
    BadPermutation(String),

    #[error("relative position is numerically ambiguous (singular value {value:e} near tolerance {tol:e})")]
    DegeneratePosition { value: f64, tol: f64 },

    #[error("sequence is not regular for the face: smallest root gap {gap} at the last term")]
    NotRegular { gap: f64 },

    #[error("element is not proximal for the face (root gap stays bounded at {gap})")]
    NotProximal { gap: f64 },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("word `{0}` is not freely reduced")]
    NotReduced(String),

    #[error("ball of radius {radius} needs {needed} evaluations, budget is {budget}")]
    BallTooLarge { radius: usize, needed: u64, budget: u64 },

    #[error("bad eigenvalues: {0}")]
    BadEigenvalues(String),

    #[error("fixed flags are not pairwise antipodal (margin {margin:e})")]
    NotGeneric { margin: f64 },

    #[error("ping-pong neighborhoods overlap (distance {distance} <= 2 * radius {radius})")]
    NeighborhoodsOverlap { distance: f64, radius: f64 },

    #[error("no power up to cap {cap} passed the pipeline")]
    CapExceeded { cap: u64 },

    #[error("invalid tolerance `{name}` = {value}")]
    BadTolerance { name: &'static str, value: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
