use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("model validity violated: {0}")]
    Validity(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Validity(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<pbl_core::Error> for CliError {
    fn from(e: pbl_core::Error) -> Self {
        use pbl_core::Error as E;
        match e {
            E::NegativeWeight { .. } => CliError::Validity(e.to_string()),
            E::InvalidParameter { .. }
            | E::UnknownMode(_)
            | E::ModeMismatch { .. }
            | E::UndefinedVisibility(_)
            | E::InvalidAssignment
            | E::NotNormalized(..)
            | E::OutcomeNotCovered(_) => CliError::Invalid(e.to_string()),
            E::InvalidProbability { .. } | E::NoRoot(_) => CliError::Internal(e.to_string()),
        }
    }
}
