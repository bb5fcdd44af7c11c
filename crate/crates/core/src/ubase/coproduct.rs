use std::collections::BTreeMap;
use std::fmt;

use crate::freealg::Word;
use crate::qfield::RationalFunction;

use super::algebra::{Algebra, AlgebraError};
use super::element::{Combination, Element, Gen, TermKey};
use super::torus::Torus;

/// Element of `U ⊗ U` with both factors in normal form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(TermKey, TermKey), RationalFunction>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn terms(&self) -> &BTreeMap<(TermKey, TermKey), RationalFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: TermKey, b: TermKey, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorElement, c: &RationalFunction) {
        for ((a, b), v) in &other.terms {
            self.add_term(a.clone(), b.clone(), &(v * c));
        }
    }

    /// `x ⊗ y`.
    pub fn outer(x: &Element, y: &Element) -> TensorElement {
        let mut out = TensorElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out.add_term(a.clone(), b.clone(), &(ca * cb));
            }
        }
        out
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Algebra {
    fn key(&self, f: Word, h: Torus, e: Word) -> TermKey {
        TermKey::new(f, h, e)
    }

    fn word_or_empty(node: usize, level: u32) -> Word {
        if level == 0 {
            Word::empty()
        } else {
            Word::letter(node, level)
        }
    }

    /// `Δ(f_{il}) = Σ_{m+n=l} q_(i)^{-mn} f_{im} K_i^n ⊗ f_{in}`.
    pub fn delta_f(&self, i: usize, l: u32) -> Result<TensorElement, AlgebraError> {
        self.check_letter(i, l)?;
        let qe = self.datum().q_paren_exp(i);
        let zero = Torus::zero(self.rank());
        let mut out = TensorElement::zero();
        for m in 0..=l {
            let n = l - m;
            let a = self.key(Self::word_or_empty(i, m), Torus::k(self.datum(), i, n as i64), Word::empty());
            let b = self.key(Self::word_or_empty(i, n), zero.clone(), Word::empty());
            out.add_term(a, b, &RationalFunction::q_pow(-qe * (m * n) as i64));
        }
        Ok(out)
    }

    /// `Δ(e_{il}) = Σ_{m+n=l} q_(i)^{mn} e_{im} ⊗ K_i^{-m} e_{in}`.
    pub fn delta_e(&self, i: usize, l: u32) -> Result<TensorElement, AlgebraError> {
        self.check_letter(i, l)?;
        let qe = self.datum().q_paren_exp(i);
        let zero = Torus::zero(self.rank());
        let mut out = TensorElement::zero();
        for m in 0..=l {
            let n = l - m;
            let a = self.key(Word::empty(), zero.clone(), Self::word_or_empty(i, m));
            let b = self.key(Word::empty(), Torus::k(self.datum(), i, -(m as i64)), Self::word_or_empty(i, n));
            out.add_term(a, b, &RationalFunction::q_pow(qe * (m * n) as i64));
        }
        Ok(out)
    }

    /// `Δ(q^h) = q^h ⊗ q^h`.
    pub fn delta_torus(&self, h: &Torus) -> TensorElement {
        let mut out = TensorElement::zero();
        let k = self.key(Word::empty(), h.clone(), Word::empty());
        out.add_term(k.clone(), k, &RationalFunction::one());
        out
    }

    pub fn delta_gen(&self, g: &Gen) -> Result<TensorElement, AlgebraError> {
        match g {
            Gen::E(l) => self.delta_e(l.node, l.level),
            Gen::F(l) => self.delta_f(l.node, l.level),
            Gen::T(h) => Ok(self.delta_torus(h)),
        }
    }

    /// Componentwise product in `U ⊗ U`.
    pub fn tensor_multiply(&self, x: &TensorElement, y: &TensorElement) -> Result<TensorElement, AlgebraError> {
        let mut out = TensorElement::zero();
        for ((a1, a2), ca) in x.terms() {
            let a1e = Element::term(a1.clone(), RationalFunction::one());
            let a2e = Element::term(a2.clone(), RationalFunction::one());
            for ((b1, b2), cb) in y.terms() {
                let left = self.multiply(&a1e, &Element::term(b1.clone(), RationalFunction::one()))?;
                if left.is_zero() {
                    continue;
                }
                let right = self.multiply(&a2e, &Element::term(b2.clone(), RationalFunction::one()))?;
                let c = ca * cb;
                for (l, cl) in left.terms() {
                    let cc = &c * cl;
                    for (r, cr) in right.terms() {
                        out.add_term(l.clone(), r.clone(), &(&cc * cr));
                    }
                }
            }
        }
        Ok(out)
    }

    fn tensor_one(&self) -> TensorElement {
        let id = TermKey::identity(self.rank());
        let mut out = TensorElement::zero();
        out.add_term(id.clone(), id, &RationalFunction::one());
        out
    }

    /// `Δ` of a product of generators.
    pub fn delta_product(&self, gens: &[Gen]) -> Result<TensorElement, AlgebraError> {
        let mut acc = self.tensor_one();
        for g in gens {
            acc = self.tensor_multiply(&acc, &self.delta_gen(g)?)?;
        }
        Ok(acc)
    }

    /// `Δ` of a combination of generator products, each product expanded
    /// through the homomorphism property.
    pub fn delta_combination(&self, comb: &Combination) -> Result<TensorElement, AlgebraError> {
        let mut out = TensorElement::zero();
        for (c, gens) in comb {
            out.add_scaled(&self.delta_product(gens)?, c);
        }
        Ok(out)
    }

    /// `Δ(x)` for a normal-form element.
    pub fn comultiply(&self, x: &Element) -> Result<TensorElement, AlgebraError> {
        let mut out = TensorElement::zero();
        for (k, c) in x.terms() {
            let gens = Self::term_gens(k);
            out.add_scaled(&self.delta_product(&gens)?, c);
        }
        Ok(out)
    }

    /// Spells a triangular monomial as a generator product.
    pub fn term_gens(k: &TermKey) -> Vec<Gen> {
        let mut gens: Vec<Gen> = k.f.letters().iter().map(|&l| Gen::F(l)).collect();
        if !k.h.is_zero() {
            gens.push(Gen::T(k.h.clone()));
        }
        gens.extend(k.e.letters().iter().map(|&l| Gen::E(l)));
        gens
    }
}
