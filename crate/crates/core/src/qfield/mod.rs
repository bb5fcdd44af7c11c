//! Exact arithmetic in `Q(q)`, q-combinatorics and truncated power series.

mod poly;
mod qnum;
mod rational;
mod series;

pub use poly::Poly;
pub use qnum::{q_binomial, q_factorial, q_integer};
pub use rational::RationalFunction;
pub use series::{check_tau_assumption, TruncatedSeries};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("division by zero in Q(q)")]
    DivisionByZero,
    #[error("q-binomial [{n} choose {k}] requires 0 <= k <= n")]
    BinomialDomain { n: u32, k: u32 },
    #[error("{0} has no power-series expansion at q = 0")]
    NotExpandable(String),
}
