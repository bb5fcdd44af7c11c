use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::CartanDatum;
use crate::freealg::{Letter, Word};
use crate::qfield::RationalFunction;

use super::torus::Torus;

/// A triangular monomial `f_F q^h e_E`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub f: Word,
    pub h: Torus,
    pub e: Word,
}

impl TermKey {
    pub fn new(f: Word, h: Torus, e: Word) -> Self {
        TermKey { f, h, e }
    }

    pub fn identity(rank: usize) -> Self {
        TermKey::new(Word::empty(), Torus::zero(rank), Word::empty())
    }

    pub fn render(&self, datum: &CartanDatum) -> String {
        let mut parts = Vec::new();
        if !self.f.is_empty() {
            parts.push(self.f.render('f', datum));
        }
        if !self.h.is_zero() {
            parts.push(self.h.render(datum));
        }
        if !self.e.is_empty() {
            parts.push(self.e.render('e', datum));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Debug for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{:?} {:?} e{:?}", self.f, self.h, self.e)
    }
}

/// Linear combination of triangular monomials. When produced by an
/// [`Algebra`](super::Algebra), the words are basis representatives and the
/// element is in normal form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<TermKey, RationalFunction>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn term(key: TermKey, c: RationalFunction) -> Self {
        let mut e = Element::zero();
        e.add_term(key, &c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, RationalFunction> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<TermKey, RationalFunction> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: TermKey, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
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

    pub fn add_scaled(&mut self, other: &Element, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &RationalFunction::one());
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &-RationalFunction::one());
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    /// Coefficient of the pure torus part, i.e. terms with empty words.
    pub fn torus_part(&self) -> Vec<(&Torus, &RationalFunction)> {
        self.terms.iter().filter(|(k, _)| k.f.is_empty() && k.e.is_empty()).map(|(k, v)| (&k.h, v)).collect()
    }

    pub fn render(&self, datum: &CartanDatum) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(k, c)| {
                let body = k.render(datum);
                if c.is_one() {
                    body
                } else if body == "1" {
                    format!("({c})")
                } else {
                    format!("({c}) {body}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// A generator of the algebra, used to spell products before normalizing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E(Letter),
    F(Letter),
    T(Torus),
}

/// A linear combination of generator products.
pub type Combination = Vec<(RationalFunction, Vec<Gen>)>;
