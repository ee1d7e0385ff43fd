use thiserror::Error;

/// Errors raised by the analysis engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("constraint is constant in `{0}`; nothing to eliminate")]
    ConstantConstraint(String),

    #[error("negative graded degree {0}")]
    NegativeDegree(i64),

    #[error("expected a quasi-homogeneous input of degree {expected}, found monomial `{monomial}`")]
    NotQuasiHomogeneous { expected: i64, monomial: String },

    #[error("principal part is not admissible: {0}")]
    PrincipalPart(String),

    #[error("coprime resonance test needs nonzero leading coefficients")]
    ZeroResonanceCoefficient,

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("{0}")]
    Parse(#[from] crate::frontend::ParseError),

    #[error("parameter `{0}` is not bound to a value")]
    UnboundParameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
