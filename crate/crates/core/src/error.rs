use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unimodular: det = {det}")]
    NotUnimodular { det: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("zero vector has no orthogonal complement")]
    ZeroVector,

    #[error("scale parameter must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("entry {entry} is not integral (distance {distance} from nearest integer)")]
    NotIntegral { entry: f64, distance: f64 },

    #[error("integer determinant is {0}, expected 1")]
    IntegerDeterminant(i128),

    #[error("degenerate lattice basis")]
    DegenerateBasis,

    #[error("epsilon = {0} outside (0, pi/6)")]
    EpsilonOutOfRange(f64),

    #[error("|theta| = {theta} is not below epsilon = {epsilon}")]
    ThetaOutsideCone { theta: f64, epsilon: f64 },

    #[error("lattice vector with coefficients ({p}, {q}) is not primitive")]
    NotPrimitive { p: i64, q: i64 },

    #[error("no lattice point found in the cone within coefficient box {0}")]
    ConeSearchExhausted(i64),

    #[error("t = {t} is not admissible for a = {a}, theta = {theta}")]
    NotAdmissible { t: f64, a: f64, theta: f64 },

    #[error("reduction residual {residual} exceeds tolerance {tolerance}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("oracle coefficient bound {0} exhausted")]
    OracleBoundExhausted(i64),

    #[error("test function does not vanish at the a-window edge (value {value} at a = {a})")]
    SupportCheck { a: f64, value: f64 },

    #[error("rejection sampler accepted no proposals")]
    ZeroAcceptance,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
