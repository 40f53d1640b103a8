use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the zero polynomial is not representable")]
    ZeroPolynomial,

    #[error("coefficient {0} is not finite")]
    NonFinite(usize),

    #[error("constant has zero derivative")]
    ConstantDerivative,

    #[error("gap form requires a_0 != 0")]
    GapRequiresConstantTerm,

    #[error("root within margin of |z| = {0}")]
    AmbiguousRoot(f64),

    #[error("hypotheses not satisfied: {0}")]
    Hypotheses(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible pattern: {0}")]
    Infeasible(String),

    #[error("formula is singular: {0}")]
    Singular(String),

    #[error("|alpha| >= 1 required, got |alpha| = {0}")]
    AlphaTooSmall(f64),

    #[error("bound {bound} does not apply: {reason}")]
    NotApplicable { bound: String, reason: String },

    #[error("classification mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
