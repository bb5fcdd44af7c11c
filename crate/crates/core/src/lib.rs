//! Exact symbolic computation for quantum Borcherds-Bozec algebras.

pub mod cartan;
pub mod charcalc;
pub mod datum;
pub mod expr;
pub mod freealg;
pub mod linalg;
pub mod qfield;
pub mod stringalg;
pub mod ubase;
pub mod verma;
