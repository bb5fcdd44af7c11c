//! Rank-one string algebras `U_(i)`: closed-form bases and structural
//! classification, used as oracles for the generic engine.

use serde::Serialize;

use crate::cartan::{CartanDatum, NodeKind};
use crate::freealg::{Letter, Word};
use crate::qfield::RationalFunction;
use crate::ubase::{Algebra, AlgebraError, Combination, Gen, Half, Torus};

/// Partitions of `l` with weakly decreasing parts, in lexicographically
/// decreasing order.
pub fn partitions(l: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(l, l, &mut Vec::new(), &mut out);
    out
}

/// All compositions of `l`.
pub fn compositions(l: u32) -> Vec<Vec<u32>> {
    if l == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=l {
        for mut rest in compositions(l - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The monomial basis of `U^-_{-lα_i}` predicted by the node type.
pub fn enumerate_basis(datum: &CartanDatum, i: usize, l: u32) -> Vec<Word> {
    let word = |parts: Vec<u32>| Word(parts.into_iter().map(|p| Letter::new(i, p)).collect());
    let mut out: Vec<Word> = match datum.kind(i) {
        NodeKind::Real => vec![Word(vec![Letter::new(i, 1); l as usize])],
        NodeKind::Isotropic => partitions(l).into_iter().map(word).collect(),
        NodeKind::Imaginary => compositions(l).into_iter().map(word).collect(),
    };
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    Sl2,
    TwistedHeisenberg,
    Free,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub node: String,
    pub structure: Structure,
    pub witnesses: Vec<Witness>,
}

impl Classification {
    pub fn confirmed(&self) -> bool {
        self.witnesses.iter().all(|w| w.holds)
    }
}

/// Classifies `U_(i)` by its diagonal entry and checks the defining
/// relations of that structure up to level `n`.
pub fn classify(u: &Algebra, i: usize, n: u32) -> Result<Classification, AlgebraError> {
    let d = u.datum();
    let mut witnesses = Vec::new();
    let mut push = |relation: String, holds: bool| witnesses.push(Witness { relation, holds });
    let structure = match d.kind(i) {
        NodeKind::Real => {
            let tau1 = u.tau().get(i, 1)?;
            let qi = RationalFunction::q_pow(d.s(i));
            let qi_inv = RationalFunction::q_pow(-d.s(i));
            let bracket = &qi - &qi_inv;
            // F = c f with c τ_1 (q_i - q_i^{-1}) = 1
            let c = RationalFunction::one().checked_div(&(&tau1 * &bracket)).map_err(|e| AlgebraError::Form(e.into()))?;
            let e = u.e(i, 1)?;
            let f = u.f(i, 1)?.scale(&c);
            let lhs = u.multiply(&e, &f)?.sub(&u.multiply(&f, &e)?);
            let k = u.k(i, 1).sub(&u.k(i, -1));
            let rhs = k.scale(&RationalFunction::one().checked_div(&bracket).expect("nonzero"));
            push("e F - F e = (K - K^-1)/(q_i - q_i^-1)".into(), lhs == rhs);
            push("string k=1, l=1".into(), u.string_residual(i, 1, 1)?.is_zero());
            Structure::Sl2
        }
        NodeKind::Isotropic => {
            for k in 1..=n {
                for l in 1..=n {
                    if k + l > u.cutoff() as u32 {
                        continue;
                    }
                    if k < l {
                        for half in [Half::Plus, Half::Minus] {
                            let comb = u.commuting_combination(half, Letter::new(i, k), Letter::new(i, l));
                            let name = if half == Half::Plus { 'e' } else { 'f' };
                            push(format!("{name}[{k}] {name}[{l}] = {name}[{l}] {name}[{k}]"), u.evaluate(&comb)?.is_zero());
                        }
                    }
                    push(format!("string k={k}, l={l}"), u.string_residual(i, k, l)?.is_zero());
                }
                for (half, name) in [(Half::Plus, 'e'), (Half::Minus, 'f')] {
                    let comb = torus_fixes(u, i, k, half);
                    push(format!("K {name}[{k}] K^-1 = {name}[{k}]"), u.evaluate(&comb)?.is_zero());
                }
            }
            Structure::TwistedHeisenberg
        }
        NodeKind::Imaginary => {
            for k in 1..=n {
                for l in 1..=n {
                    if k + l <= u.cutoff() as u32 {
                        push(format!("string k={k}, l={l}"), u.string_residual(i, k, l)?.is_zero());
                    }
                }
            }
            for l in 1..=n.min(u.cutoff() as u32) {
                let dim = u.basis().dim(&crate::cartan::RootVec::simple(d.rank(), i, l as i64));
                push(format!("dim U^-_(-{l}a) = 2^{}", l - 1), dim == Some(1usize << (l - 1)));
            }
            Structure::Free
        }
    };
    Ok(Classification { node: d.name(i).to_string(), structure, witnesses })
}

fn torus_fixes(u: &Algebra, i: usize, k: u32, half: Half) -> Combination {
    let h = Torus::k(u.datum(), i, 1);
    let x = Letter::new(i, k);
    let g = if half == Half::Plus { Gen::E(x) } else { Gen::F(x) };
    vec![(RationalFunction::one(), vec![Gen::T(h.clone()), g.clone(), Gen::T(-&h)]), (-RationalFunction::one(), vec![g])]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::RootVec;
    use crate::freealg::Tau;
    use crate::ubase::GradedBasis;

    fn datum(a: i64) -> CartanDatum {
        CartanDatum::from_matrix(vec![vec![a]], vec![1]).unwrap()
    }

    #[test]
    fn counts() {
        let p: Vec<usize> = (0..=8).map(|l| partitions(l).len()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        for l in 1..=8 {
            assert_eq!(compositions(l).len(), 1 << (l - 1));
        }
    }

    #[test]
    fn level_three_bases() {
        let real = enumerate_basis(&datum(2), 0, 3);
        assert_eq!(real, vec![Word(vec![Letter::new(0, 1); 3])]);
        let iso = enumerate_basis(&datum(0), 0, 3);
        let expected: Vec<Word> =
            [vec![3], vec![2, 1], vec![1, 1, 1]].into_iter().map(|c| Word(c.into_iter().map(|p| Letter::new(0, p)).collect())).collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(iso, expected);
        assert_eq!(enumerate_basis(&datum(-2), 0, 3).len(), 4);
    }

    #[test]
    fn matches_elimination() {
        for a in [2, 0, -2] {
            let d = datum(a);
            let b = GradedBasis::build(&d, 6);
            for l in 0..=6u32 {
                let piece = b.piece(&RootVec(vec![l as i64])).unwrap();
                assert_eq!(piece.basis, enumerate_basis(&d, 0, l), "a={a}, l={l}");
            }
        }
    }

    #[test]
    fn classification() {
        for (a, s) in [(2, Structure::Sl2), (0, Structure::TwistedHeisenberg), (-2, Structure::Free)] {
            let d = datum(a);
            let u = Algebra::new(d.clone(), Tau::geometric(&d, 4), 4).unwrap();
            let c = classify(&u, 0, 2).unwrap();
            assert_eq!(c.structure, s);
            assert!(c.confirmed(), "{c:?}");
        }
    }
}
