use thiserror::Error;

use crate::outcome::Outcome;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied parameter is outside the operation's domain.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown mode label `{0}`")]
    UnknownMode(String),

    #[error("state is defined on modes {found:?}, expected {expected:?}")]
    ModeMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("outcome {0} is not covered by this table")]
    OutcomeNotCovered(Outcome),

    #[error("visibility undefined for {0}: both parties need unequal counts")]
    UndefinedVisibility(Outcome),

    /// The LHV construction would need a negative submodel weight.
    #[error(
        "LHV model invalid: weight Δ{event} = {value:.6e} < 0 \
         (α² = {alpha2}, certified region α² < {threshold:.6})"
    )]
    NegativeWeight {
        event: Outcome,
        value: f64,
        alpha2: f64,
        threshold: f64,
    },

    #[error("response probability {value} outside [0, 1] for {context}")]
    InvalidProbability { value: f64, context: String },

    #[error("joint table for settings ({0}, {1}) sums to {2}, expected 1")]
    NotNormalized(usize, usize, f64),

    #[error("assignment is not a bijection onto 0..4")]
    InvalidAssignment,

    #[error("no sign change found for {0}")]
    NoRoot(&'static str),
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        })
    }
}

pub(crate) fn check_squeezing(gamma: f64) -> Result<f64> {
    if (0.0..1.0).contains(&gamma) {
        Ok(gamma)
    } else {
        Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "squeezing parameter must satisfy 0 <= gamma < 1",
        })
    }
}

pub(crate) fn check_amplitude(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(alpha)
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "local oscillator amplitude must be finite and >= 0",
        })
    }
}
