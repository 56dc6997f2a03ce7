use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial has degree 0, no roots to find")]
    ConstantPolynomial,

    #[error("eigenvalue iteration did not converge for degree {degree} polynomial")]
    RootsDidNotConverge { degree: usize },

    #[error("transfer function denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("improper transfer function (relative degree {relative_degree}) where a proper one is required")]
    Improper { relative_degree: i64 },

    #[error("pole on the imaginary axis at omega = {omega} rad/s")]
    PoleOnAxis { omega: f64 },

    #[error("no stability crossing in gain bracket (stable at low end: {stable_at_lo}, at high end: {stable_at_hi})")]
    NoCrossing { stable_at_lo: bool, stable_at_hi: bool },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid scenario: `{field}`: {reason}")]
    InvalidScenario { field: String, reason: String },

    #[error("numerical blowup at step {step} (t = {t} s): |{state}| exceeded 1e12")]
    NumericalBlowup { step: usize, t: f64, state: &'static str },

    #[error("channel `{0}` never holds a constant reference for 20% of the run")]
    NotSettled(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidScenario {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
