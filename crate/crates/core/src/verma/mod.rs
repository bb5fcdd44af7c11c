//! Highest-weight modules: truncated Verma modules, the contravariant form,
//! irreducible quotients, tensor products and their decomposition.

mod checks;
mod highest;
mod module;
mod tensor;

use thiserror::Error;

use crate::cartan::RootVec;
use crate::charcalc::CharError;
use crate::ubase::AlgebraError;

pub use checks::{check_annihilation, check_gram, check_imaginary_weights, check_oint, CheckItem, Report, Status};
pub use highest::{build_verma, irreducible_quotient, Quotient, Verma};
pub use module::{Module, Op, Vector};
pub use tensor::{decompose, tensor, Component, Decomposition, PairIndex, TensorModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VermaError {
    #[error("requested depth {requested} exceeds the available cutoff {available}")]
    Cutoff { requested: usize, available: usize },
    #[error("depth {depth} lies outside the truncation")]
    Truncation { depth: RootVec },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("principal Gram block at {depth} is singular")]
    SingularGram { depth: RootVec },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Char(#[from] CharError),
}

#[cfg(test)]
mod tests;
