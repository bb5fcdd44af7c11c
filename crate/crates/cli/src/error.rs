use qbb_core::cartan::CartanError;
use qbb_core::charcalc::CharError;
use qbb_core::datum::DatumError;
use qbb_core::expr::ExprError;
use qbb_core::ubase::AlgebraError;
use qbb_core::verma::VermaError;
use thiserror::Error;

use crate::commands::Output;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad datum, arguments or expression.
    #[error("{0}")]
    Input(String),
    /// A computation disagreed with an independent check.
    #[error("{0}")]
    Internal(String),
    /// The command ran but reported failing checks.
    #[error("consistency check failed")]
    Failed(Output),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) | CliError::Failed(_) => 2,
        }
    }
}

impl From<DatumError> for CliError {
    fn from(e: DatumError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CartanError> for CliError {
    fn from(e: CartanError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        match e {
            CharError::NotDominant(_) => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<VermaError> for CliError {
    fn from(e: VermaError) -> Self {
        match e {
            VermaError::Cutoff { .. } | VermaError::NotDominant(_) | VermaError::Algebra(_) => CliError::Input(e.to_string()),
            VermaError::Char(c) => c.into(),
            VermaError::Truncation { .. } | VermaError::SingularGram { .. } => CliError::Internal(e.to_string()),
        }
    }
}
