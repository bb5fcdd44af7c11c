//! Residuals of the defining relations, evaluated through the normal-form
//! engine (and through `Δ`); each should vanish.

use serde::Serialize;

use crate::cartan::RootVec;
use crate::freealg::{Letter, LusztigForm, Word};
use crate::qfield::{q_binomial, RationalFunction};

use super::algebra::{Algebra, AlgebraError};
use super::coproduct::TensorElement;
use super::element::{Combination, Element, Gen};
use super::torus::Torus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Plus,
    Minus,
}

fn gen(half: Half, l: Letter) -> Gen {
    match half {
        Half::Plus => Gen::E(l),
        Half::Minus => Gen::F(l),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub kind: String,
    pub params: String,
    pub vanishes: bool,
    pub delta_vanishes: Option<bool>,
}

/// Rank of the form on the free algebra in one degree against the dimension
/// of that degree of `U^-`.
#[derive(Clone, Debug, Serialize)]
pub struct FormRank {
    pub weight: RootVec,
    pub words: usize,
    pub gram_rank: usize,
    pub dim: usize,
}

impl FormRank {
    /// The radical of the form is exactly the relation ideal in this degree.
    pub fn matches(&self) -> bool {
        self.gram_rank == self.dim
    }
}

impl Algebra {
    /// Gram rank of the form on all words of each degree through `n`, next to
    /// `dim U^-_{-β}`.
    pub fn form_ranks(&self, n: usize) -> Result<Vec<FormRank>, AlgebraError> {
        let form = LusztigForm::new(self.datum(), self.tau());
        let mut out = Vec::new();
        for piece in self.basis().pieces().filter(|p| p.weight.height() >= 1 && p.weight.height() as usize <= n) {
            let (words, gram) = form.gram_matrix(&piece.weight)?;
            out.push(FormRank { weight: piece.weight.clone(), words: words.len(), gram_rank: gram.rank(), dim: piece.dim() });
        }
        Ok(out)
    }

    /// Normal form of a combination of generator products.
    pub fn evaluate(&self, comb: &Combination) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (c, gens) in comb {
            let factors: Vec<Element> = gens.iter().map(|g| self.gen_element(g)).collect::<Result<_, _>>()?;
            out.add_scaled(&self.multiply_all(&factors)?, c);
        }
        Ok(out)
    }

    pub fn gen_element(&self, g: &Gen) -> Result<Element, AlgebraError> {
        match g {
            Gen::E(l) => self.e(l.node, l.level),
            Gen::F(l) => self.f(l.node, l.level),
            Gen::T(h) => Ok(self.torus(h.clone())),
        }
    }

    /// `Σ_k (-1)^k [N choose k]_i x_i^{N-k} x_{jl} x_i^k` with `N = 1 - l a_ij`.
    pub fn serre_combination(&self, half: Half, i: usize, j: usize, l: u32) -> Combination {
        let top = (1 - l as i64 * self.datum().a(i, j)) as u32;
        let s = self.datum().s(i) as u32;
        (0..=top)
            .map(|k| {
                let mut c = q_binomial(top, k, s).expect("k <= top");
                if k % 2 == 1 {
                    c = -c;
                }
                let mut gens = vec![gen(half, Letter::new(i, 1)); (top - k) as usize];
                gens.push(gen(half, Letter::new(j, l)));
                gens.extend(std::iter::repeat_n(gen(half, Letter::new(i, 1)), k as usize));
                (c, gens)
            })
            .collect()
    }

    /// `x_a x_b - x_b x_a`.
    pub fn commuting_combination(&self, half: Half, a: Letter, b: Letter) -> Combination {
        vec![(RationalFunction::one(), vec![gen(half, a), gen(half, b)]), (-RationalFunction::one(), vec![gen(half, b), gen(half, a)])]
    }

    /// `q^h x q^{-h} - q^{±l⟨h, α_j⟩} x` for `x = e_{jl}` (plus) or `f_{jl}`.
    pub fn torus_combination(&self, half: Half, h: &Torus, x: Letter) -> Combination {
        let e = h.pair_root(self.datum(), &Word(vec![x]).weight(self.rank()));
        let e = if half == Half::Plus { e } else { -e };
        vec![
            (RationalFunction::one(), vec![Gen::T(h.clone()), gen(half, x), Gen::T(-h)]),
            (-RationalFunction::q_pow(e), vec![gen(half, x)]),
        ]
    }

    /// Left minus right side of the rank-one string relation at node `i`:
    /// `Σ q_(i)^{n(m-s)} τ_{in} e_{is} f_{im} K_i^{-n} -
    ///  Σ q_(i)^{-n(m-s)} τ_{in} f_{im} e_{is} K_i^n`, `m = k-n`, `s = l-n`.
    pub fn string_combination(&self, i: usize, k: u32, l: u32) -> Result<Combination, AlgebraError> {
        let qe = self.datum().q_paren_exp(i);
        let mut out = Vec::new();
        for n in 0..=k.min(l) {
            let (m, s) = (k - n, l - n);
            let ms = m as i64 - s as i64;
            let tau = self.tau().get(i, n)?;
            let mut left = Vec::new();
            let mut right = Vec::new();
            if s > 0 {
                left.push(Gen::E(Letter::new(i, s)));
            }
            if m > 0 {
                left.push(Gen::F(Letter::new(i, m)));
                right.push(Gen::F(Letter::new(i, m)));
            }
            if s > 0 {
                right.push(Gen::E(Letter::new(i, s)));
            }
            if n > 0 {
                left.push(Gen::T(Torus::k(self.datum(), i, -(n as i64))));
                right.push(Gen::T(Torus::k(self.datum(), i, n as i64)));
            }
            out.push((&RationalFunction::q_pow(n as i64 * qe * ms) * &tau, left));
            out.push((-(&RationalFunction::q_pow(-(n as i64) * qe * ms) * &tau), right));
        }
        Ok(out)
    }

    pub fn string_residual(&self, i: usize, k: u32, l: u32) -> Result<Element, AlgebraError> {
        self.evaluate(&self.string_combination(i, k, l)?)
    }

    /// `Δ` of the string relation, expanded generator by generator in
    /// `U ⊗ U`.
    pub fn string_delta_residual(&self, i: usize, k: u32, l: u32) -> Result<TensorElement, AlgebraError> {
        self.delta_combination(&self.string_combination(i, k, l)?)
    }

    /// Every relation residual whose generators fit within height `n`, with
    /// the `Δ` image checked when `with_delta` is set.
    pub fn check_relations(&self, n: usize, with_delta: bool) -> Result<Vec<ResidualReport>, AlgebraError> {
        let d = self.datum().clone();
        let rank = d.rank();
        let mut reports = Vec::new();
        let mut record = |kind: &str, params: String, comb: Combination| -> Result<(), AlgebraError> {
            let vanishes = self.evaluate(&comb)?.is_zero();
            let delta_vanishes = if with_delta { Some(self.delta_combination(&comb)?.is_zero()) } else { None };
            reports.push(ResidualReport { kind: kind.to_string(), params, vanishes, delta_vanishes });
            Ok(())
        };
        for half in [Half::Minus, Half::Plus] {
            let hs = if half == Half::Minus { "f" } else { "e" };
            for i in d.real_nodes() {
                for j in (0..rank).filter(|&j| j != i) {
                    for l in 1..=d.max_level(j, n) {
                        if (1 - l as i64 * d.a(i, j) + l as i64) as usize <= n {
                            let comb = self.serre_combination(half, i, j, l);
                            record("serre", format!("{hs}: i={}, j={}, l={l}", d.name(i), d.name(j)), comb)?;
                        }
                    }
                }
            }
            for i in 0..rank {
                for j in i..rank {
                    if d.a(i, j) != 0 {
                        continue;
                    }
                    for k in 1..=d.max_level(i, n) {
                        for l in 1..=d.max_level(j, n) {
                            if (i == j && k >= l) || (k + l) as usize > n {
                                continue;
                            }
                            let comb = self.commuting_combination(half, Letter::new(i, k), Letter::new(j, l));
                            record("commuting", format!("{hs}: ({},{k}) ({},{l})", d.name(i), d.name(j)), comb)?;
                        }
                    }
                }
            }
            for j in 0..rank {
                for l in 1..=d.max_level(j, n) {
                    for i in 0..rank {
                        let h = Torus::k(&d, i, 1);
                        let comb = self.torus_combination(half, &h, Letter::new(j, l));
                        record("torus", format!("{hs}: K[{}] x ({},{l})", d.name(i), d.name(j)), comb)?;
                    }
                }
            }
        }
        for i in 0..rank {
            for k in 1..=d.max_level(i, n) {
                for l in 1..=d.max_level(i, n) {
                    if (k + l) as usize > n {
                        continue;
                    }
                    let comb = self.string_combination(i, k, l)?;
                    record("string", format!("i={}, k={k}, l={l}", d.name(i)), comb)?;
                }
            }
        }
        for i in 0..rank {
            for j in (0..rank).filter(|&j| j != i) {
                for k in 1..=d.max_level(i, n) {
                    for l in 1..=d.max_level(j, n) {
                        if (k + l) as usize > n {
                            continue;
                        }
                        let comb = vec![
                            (RationalFunction::one(), vec![Gen::E(Letter::new(j, l)), Gen::F(Letter::new(i, k))]),
                            (-RationalFunction::one(), vec![Gen::F(Letter::new(i, k)), Gen::E(Letter::new(j, l))]),
                        ];
                        record("cross", format!("e({},{l}) f({},{k})", d.name(j), d.name(i)), comb)?;
                    }
                }
            }
        }
        Ok(reports)
    }
}
