use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("twist mismatch: {0:?} vs {1:?}")]
    TwistMismatch(Vec<i64>, Vec<i64>),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("pfaffian of odd size {0}")]
    OddSize(usize),
    #[error("infeasible degrees: {0}")]
    DegreeInfeasible(String),
    #[error("rank prerequisite violated: sub-pfaffian removing {0:?} is nonzero")]
    RankPrereqViolated(Vec<usize>),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("degenerate hyperplane: coefficient {0} of f vanishes")]
    DegenerateW(usize),
    #[error("composition is not zero")]
    CompositionNonzero,
    #[error("degree constraint violated: {0}")]
    DegreeConstraintViolated(String),
    #[error("homogeneity violated: {0}")]
    HomogeneityViolated(String),
    #[error("no compatible row for b = {0}")]
    NoCompatibleRow(usize),
    #[error("expected rank 2, got {0}")]
    RankNotTwo(i64),
    #[error("non-integral Chern class {0}")]
    IntegralityViolation(String),
    #[error("singular linear system")]
    SingularSystem,
    #[error("not a prime below 2^31: {0}")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
