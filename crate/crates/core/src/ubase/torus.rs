use std::fmt;
use std::ops::{Add, Neg};

use serde::Serialize;

use crate::cartan::{CartanDatum, RootVec, Weight};

/// `q^h` for `h = Σ a_i h_i + Σ b_i d_i`, stored as `[a_1..a_n, b_1..b_n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Torus(pub Vec<i64>);

impl Torus {
    pub fn zero(rank: usize) -> Self {
        Torus(vec![0; 2 * rank])
    }

    /// `K_i^p = q^{p s_i h_i}`.
    pub fn k(datum: &CartanDatum, i: usize, p: i64) -> Self {
        let mut t = Torus::zero(datum.rank());
        t.0[i] = p * datum.s(i);
        t
    }

    pub fn from_parts(h: &[i64], d: &[i64]) -> Self {
        let mut v = h.to_vec();
        v.extend_from_slice(d);
        Torus(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len() / 2
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `⟨h, β⟩` for `β` in the root lattice.
    pub fn pair_root(&self, datum: &CartanDatum, beta: &RootVec) -> i64 {
        let n = self.rank();
        let mut acc = 0;
        for j in 0..n {
            let kj = beta.0[j];
            if kj == 0 {
                continue;
            }
            let mut hj = self.0[n + j];
            for i in 0..n {
                hj += self.0[i] * datum.a(i, j);
            }
            acc += hj * kj;
        }
        acc
    }

    /// `⟨h, λ⟩`.
    pub fn pair_weight(&self, lambda: &Weight) -> i64 {
        let n = self.rank();
        (0..n).map(|i| self.0[i] * lambda.h[i] + self.0[n + i] * lambda.d[i]).sum()
    }

    /// Renders as a product of `K` powers when possible, else `q[..]`.
    pub fn render(&self, datum: &CartanDatum) -> String {
        let n = self.rank();
        let k_form = self.0[n..].iter().all(|&b| b == 0) && (0..n).all(|i| self.0[i] % datum.s(i) == 0);
        if k_form {
            (0..n)
                .filter(|&i| self.0[i] != 0)
                .map(|i| {
                    let p = self.0[i] / datum.s(i);
                    if p == 1 {
                        format!("K[{}]", datum.name(i))
                    } else {
                        format!("K[{}]^{p}", datum.name(i))
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            format!("q[{}]", parts.join(","))
        }
    }
}

impl fmt::Debug for Torus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{:?}", self.0)
    }
}

impl Add for &Torus {
    type Output = Torus;
    fn add(self, rhs: &Torus) -> Torus {
        Torus(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Neg for &Torus {
    type Output = Torus;
    fn neg(self) -> Torus {
        Torus(self.0.iter().map(|a| -a).collect())
    }
}
