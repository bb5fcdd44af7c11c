//! The algebra `U` itself: graded bases of the halves, normal forms of
//! products, the coproduct and the involutions.

mod algebra;
mod basis;
mod coproduct;
mod element;
mod relations;
mod rewrite;
mod torus;

pub use algebra::{Algebra, AlgebraError};
pub use basis::{relation_elements, Coords, DegreePiece, GradedBasis};
pub use coproduct::TensorElement;
pub use element::{Combination, Element, Gen, TermKey};
pub use relations::{FormRank, Half, ResidualReport};
pub use rewrite::Schedule;
pub use torus::Torus;

#[cfg(test)]
mod tests;
