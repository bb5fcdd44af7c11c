//! A schedule-driven rewriting normalizer, independent of the memoized
//! recursion in [`Algebra::straighten`]. Used to check that normal forms do
//! not depend on the order in which adjacent pairs are rewritten.

use std::collections::BTreeMap;

use crate::freealg::Word;
use crate::qfield::RationalFunction;

use super::algebra::{Algebra, AlgebraError};
use super::element::{Element, Gen};
use super::torus::Torus;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    LeftmostFirst,
    RightmostFirst,
}

fn rank_of(g: &Gen) -> u8 {
    match g {
        Gen::F(_) => 0,
        Gen::T(_) => 1,
        Gen::E(_) => 2,
    }
}

impl Algebra {
    /// Normalizes a combination of generator products by repeatedly
    /// rewriting one out-of-order adjacent pair (`e f`, `q^h f`, `e q^h`,
    /// `q^h q^h'`) chosen by `schedule`.
    pub fn rewrite_normalize(&self, start: &[(RationalFunction, Vec<Gen>)], schedule: Schedule) -> Result<Element, AlgebraError> {
        let datum = self.datum();
        let n = self.rank();
        let mut pending: BTreeMap<Vec<Gen>, RationalFunction> = BTreeMap::new();
        for (c, g) in start {
            accumulate(&mut pending, g.clone(), c.clone());
        }
        let mut out = Element::zero();
        while let Some((gens, c)) = pending.pop_first() {
            let spots: Vec<usize> = (0..gens.len().saturating_sub(1))
                .filter(|&p| {
                    let (a, b) = (&gens[p], &gens[p + 1]);
                    rank_of(a) > rank_of(b) || matches!((a, b), (Gen::T(_), Gen::T(_)))
                })
                .collect();
            let pos = match schedule {
                Schedule::LeftmostFirst => spots.first(),
                Schedule::RightmostFirst => spots.last(),
            };
            let Some(&p) = pos else {
                let f = Word(gens.iter().filter_map(|g| if let Gen::F(l) = g { Some(*l) } else { None }).collect());
                let e = Word(gens.iter().filter_map(|g| if let Gen::E(l) = g { Some(*l) } else { None }).collect());
                let h = gens
                    .iter()
                    .filter_map(|g| if let Gen::T(h) = g { Some(h.clone()) } else { None })
                    .fold(Torus::zero(n), |acc, h| &acc + &h);
                self.push_reduced(&mut out, &f, &h, &e, &c)?;
                continue;
            };
            let head = &gens[..p];
            let tail = &gens[p + 2..];
            let splice = |mid: Vec<Gen>| -> Vec<Gen> {
                let mut v = head.to_vec();
                v.extend(mid);
                v.extend_from_slice(tail);
                v
            };
            match (&gens[p], &gens[p + 1]) {
                (Gen::E(x), Gen::F(y)) => {
                    for (k, ck) in self.reorder_letters(*x, *y).terms() {
                        let mut mid = Vec::new();
                        mid.extend(k.f.letters().iter().map(|&l| Gen::F(l)));
                        if !k.h.is_zero() {
                            mid.push(Gen::T(k.h.clone()));
                        }
                        mid.extend(k.e.letters().iter().map(|&l| Gen::E(l)));
                        accumulate(&mut pending, splice(mid), &c * ck);
                    }
                }
                (Gen::T(h), Gen::F(y)) => {
                    // q^h f_y = q^{-⟨h, wt y⟩} f_y q^h
                    let e = h.pair_root(datum, &Word(vec![*y]).weight(n));
                    let moved = splice(vec![Gen::F(*y), Gen::T(h.clone())]);
                    accumulate(&mut pending, moved, &c * &RationalFunction::q_pow(-e));
                }
                (Gen::E(x), Gen::T(h)) => {
                    // e_x q^h = q^{-⟨h, wt x⟩} q^h e_x
                    let e = h.pair_root(datum, &Word(vec![*x]).weight(n));
                    let moved = splice(vec![Gen::T(h.clone()), Gen::E(*x)]);
                    accumulate(&mut pending, moved, &c * &RationalFunction::q_pow(-e));
                }
                (Gen::T(a), Gen::T(b)) => {
                    let merged = a + b;
                    let mid = if merged.is_zero() { vec![] } else { vec![Gen::T(merged)] };
                    accumulate(&mut pending, splice(mid), c);
                }
                _ => unreachable!("only out-of-order pairs are selected"),
            }
        }
        Ok(out)
    }
}

fn accumulate(map: &mut BTreeMap<Vec<Gen>, RationalFunction>, key: Vec<Gen>, c: RationalFunction) {
    if c.is_zero() {
        return;
    }
    let key: Vec<Gen> = key.into_iter().filter(|g| !matches!(g, Gen::T(h) if h.is_zero())).collect();
    match map.get_mut(&key) {
        Some(slot) => {
            *slot += &c;
            if slot.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}
