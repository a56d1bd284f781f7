use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus {0}: {1}")]
    InvalidModulus(u64, &'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("malformed matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("not an S(V)-module: multiplication fails to commute at q={q}, i={i}, j={j}")]
    NotAModule { q: i64, i: usize, j: usize },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("graded piece B_{0} is not available and not known to vanish")]
    MissingDegree(i64),

    #[error("internal error: negative Koszul dimension at (p={p}, q={q})")]
    NegativeDimension { p: i64, q: i64 },

    #[error("duality precondition not certified: {0}")]
    DualityUncertified(String),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("power series precision cap {0} exceeded (form vanishes on a branch?)")]
    PrecisionCap(usize),

    #[error("divisor normalization failed: {0}")]
    Normalization(String),

    #[error("Riemann-Roch self-check failed for {divisor}: h0={h0}, h1={h1}, deg={deg}, genus={genus}")]
    RiemannRoch {
        divisor: String,
        h0: usize,
        h1: usize,
        deg: i64,
        genus: i64,
    },

    #[error("product not in span of the next graded piece: {0}")]
    NotInSpan(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
