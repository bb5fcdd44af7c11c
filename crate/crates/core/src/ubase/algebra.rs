use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::freealg::{FormError, Letter, Tau, Word};
use crate::qfield::RationalFunction;

use super::basis::GradedBasis;
use super::element::{Element, TermKey};
use super::torus::Torus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("height {height} exceeds the configured cutoff {cutoff}")]
    HeightOverflow { height: i64, cutoff: usize },
    #[error("invalid generator at node {node}, level {level}: {reason}")]
    BadGenerator { node: usize, level: u32, reason: &'static str },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// The quantum Borcherds-Bozec algebra of a datum, truncated at a height
/// cutoff for both halves.
///
/// Elements are kept in triangular normal form `Σ c f_F q^h e_E` with `F`, `E`
/// basis words. Products are normalized by [`Algebra::straighten`], which
/// moves a block of `e` letters past a block of `f` letters using the
/// rank-one string relations, and memoizes every intermediate result.
pub struct Algebra {
    datum: CartanDatum,
    tau: Tau,
    cutoff: usize,
    basis: GradedBasis,
    reorder_memo: Mutex<HashMap<(usize, u32, u32), Element>>,
    straighten_memo: Mutex<HashMap<(Word, Word), Element>>,
}

impl Algebra {
    /// Builds bases through `cutoff`; every `τ_{il}` reachable at that height
    /// must be present and lie in `1 + q Z>=0[[q]]`.
    pub fn new(datum: CartanDatum, tau: Tau, cutoff: usize) -> Result<Self, AlgebraError> {
        tau.validate(&datum, cutoff, 2 * cutoff + 4)?;
        let basis = GradedBasis::build(&datum, cutoff);
        Ok(Algebra { datum, tau, cutoff, basis, reorder_memo: Mutex::new(HashMap::new()), straighten_memo: Mutex::new(HashMap::new()) })
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn tau(&self) -> &Tau {
        &self.tau
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn check_letter(&self, node: usize, level: u32) -> Result<(), AlgebraError> {
        let bad = |reason| Err(AlgebraError::BadGenerator { node, level, reason });
        if node >= self.rank() {
            return bad("node out of range");
        }
        if level == 0 {
            return bad("levels start at 1");
        }
        if self.datum.is_real(node) && level != 1 {
            return bad("real nodes only carry level 1");
        }
        if level as usize > self.cutoff {
            return Err(AlgebraError::HeightOverflow { height: level as i64, cutoff: self.cutoff });
        }
        Ok(())
    }

    pub fn one(&self) -> Element {
        Element::term(TermKey::identity(self.rank()), RationalFunction::one())
    }

    pub fn scalar(&self, c: RationalFunction) -> Element {
        Element::term(TermKey::identity(self.rank()), c)
    }

    pub fn f(&self, node: usize, level: u32) -> Result<Element, AlgebraError> {
        self.check_letter(node, level)?;
        let key = TermKey::new(Word::letter(node, level), Torus::zero(self.rank()), Word::empty());
        Ok(Element::term(key, RationalFunction::one()))
    }

    pub fn e(&self, node: usize, level: u32) -> Result<Element, AlgebraError> {
        self.check_letter(node, level)?;
        let key = TermKey::new(Word::empty(), Torus::zero(self.rank()), Word::letter(node, level));
        Ok(Element::term(key, RationalFunction::one()))
    }

    pub fn torus(&self, h: Torus) -> Element {
        Element::term(TermKey::new(Word::empty(), h, Word::empty()), RationalFunction::one())
    }

    /// `K_i^p`.
    pub fn k(&self, node: usize, p: i64) -> Element {
        self.torus(Torus::k(&self.datum, node, p))
    }

    /// Reduces a word of either half to basis coordinates.
    pub fn reduce_word(&self, w: &Word) -> Result<Vec<(Word, RationalFunction)>, AlgebraError> {
        let height = w.height();
        if height > self.cutoff as i64 {
            return Err(AlgebraError::HeightOverflow { height, cutoff: self.cutoff });
        }
        Ok(self.basis.reduce(w, self.rank()).expect("every word within the cutoff has coordinates"))
    }

    /// Adds `c f_F q^h e_E` for raw words `F`, `E`, reducing both.
    pub fn push_reduced(&self, out: &mut Element, f: &Word, h: &Torus, e: &Word, c: &RationalFunction) -> Result<(), AlgebraError> {
        if c.is_zero() {
            return Ok(());
        }
        let fs = self.reduce_word(f)?;
        let es = self.reduce_word(e)?;
        for (fw, fc) in &fs {
            let fc = fc * c;
            for (ew, ec) in &es {
                out.add_term(TermKey::new(fw.clone(), h.clone(), ew.clone()), &(&fc * ec));
            }
        }
        Ok(())
    }

    /// Normal form of `c f_F q^h e_E` for raw words.
    pub fn monomial(&self, f: &Word, h: &Torus, e: &Word, c: &RationalFunction) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        self.push_reduced(&mut out, f, h, e, c)?;
        Ok(out)
    }

    /// `q^{⟨h, β⟩}` as a field element.
    fn q_pair(&self, h: &Torus, w: &Word) -> RationalFunction {
        if h.is_zero() || w.is_empty() {
            return RationalFunction::one();
        }
        RationalFunction::q_pow(h.pair_root(&self.datum, &w.weight(self.rank())))
    }

    /// `x q^h`.
    pub fn mul_torus_right(&self, x: &Element, h: &Torus) -> Element {
        let mut out = Element::zero();
        for (k, c) in x.terms() {
            // e_E q^h = q^{-⟨h, wt E⟩} q^h e_E
            let factor = self.q_pair(h, &k.e).inv().expect("nonzero");
            out.add_term(TermKey::new(k.f.clone(), &k.h + h, k.e.clone()), &(c * &factor));
        }
        out
    }

    /// `q^h x`.
    pub fn mul_torus_left(&self, h: &Torus, x: &Element) -> Element {
        let mut out = Element::zero();
        for (k, c) in x.terms() {
            // q^h f_F = q^{-⟨h, wt F⟩} f_F q^h
            let factor = self.q_pair(h, &k.f).inv().expect("nonzero");
            out.add_term(TermKey::new(k.f.clone(), h + &k.h, k.e.clone()), &(c * &factor));
        }
        out
    }

    /// Normal form of `x y`.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let mid = self.straighten(&a.e, &b.f)?;
                let c0 = ca * cb;
                for (m, cm) in mid.terms() {
                    // q^{h1} f_{F'} = q^{-⟨h1, wt F'⟩} f_{F'} q^{h1}
                    // e_{E'} q^{h2} = q^{-⟨h2, wt E'⟩} q^{h2} e_{E'}
                    let shift = self.q_pair(&a.h, &m.f) * self.q_pair(&b.h, &m.e);
                    let c = &(&c0 * cm) * &shift.inv().expect("nonzero");
                    let h = &(&a.h + &m.h) + &b.h;
                    self.push_reduced(&mut out, &a.f.concat(&m.f), &h, &m.e.concat(&b.e), &c)?;
                }
            }
        }
        Ok(out)
    }

    pub fn multiply_all(&self, factors: &[Element]) -> Result<Element, AlgebraError> {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// Normal form of `e_E f_F` for raw words `E`, `F`.
    ///
    /// Peels the last letter `x` of `E` and the first letter `y` of `F`:
    /// `E' (x y) F'` with `x y` given by [`Algebra::reorder_letters`]. The
    /// recursion decreases the pair (total level of `E`, length of `F`).
    pub fn straighten(&self, e: &Word, f: &Word) -> Result<Element, AlgebraError> {
        let zero = Torus::zero(self.rank());
        if e.is_empty() || f.is_empty() {
            return self.monomial(f, &zero, e, &RationalFunction::one());
        }
        let key = (e.clone(), f.clone());
        if let Some(v) = self.straighten_memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let (x, e_rest) = e.0.split_last().unwrap();
        let (y, f_rest) = f.0.split_first().unwrap();
        let e_rest = Word(e_rest.to_vec());
        let f_rest = Word(f_rest.to_vec());
        let swapped = self.reorder_letters(*x, *y);
        let mut out = Element::zero();
        for (t, ct) in swapped.terms() {
            let left = self.straighten(&e_rest, &t.f)?;
            for (l, cl) in left.terms() {
                // e_{E''} q^h = q^{-⟨h, wt E''⟩} q^h e_{E''}
                let hh = &l.h + &t.h;
                let c1 = &(ct * cl) * &self.q_pair(&t.h, &l.e).inv().expect("nonzero");
                let right = self.straighten(&l.e.concat(&t.e), &f_rest)?;
                for (r, cr) in right.terms() {
                    // q^{hh} f_{F3} = q^{-⟨hh, wt F3⟩} f_{F3} q^{hh}
                    let c = &(&c1 * cr) * &self.q_pair(&hh, &r.f).inv().expect("nonzero");
                    self.push_reduced(&mut out, &l.f.concat(&r.f), &(&hh + &r.h), &r.e, &c)?;
                }
            }
        }
        self.straighten_memo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Normal form of `e_x f_y` for single letters.
    pub fn reorder_letters(&self, x: Letter, y: Letter) -> Element {
        if x.node != y.node {
            let key = TermKey::new(Word(vec![y]), Torus::zero(self.rank()), Word(vec![x]));
            return Element::term(key, RationalFunction::one());
        }
        self.reorder_ef(x.node, x.level, y.level)
    }

    /// Normal form of `e_{il} f_{ik}` from the string relation
    ///
    /// `Σ_{n} q_(i)^{n(m-s)} τ_{in} e_{is} f_{im} K_i^{-n} =
    ///  Σ_{n} q_(i)^{-n(m-s)} τ_{in} f_{im} e_{is} K_i^{n}`
    ///
    /// (`m = k - n`, `s = l - n`), solved for the `n = 0` term on the left.
    /// The remaining left-hand terms have smaller levels and are reordered
    /// recursively.
    pub fn reorder_ef(&self, i: usize, l: u32, k: u32) -> Element {
        if let Some(v) = self.reorder_memo.lock().unwrap().get(&(i, l, k)) {
            return v.clone();
        }
        let qe = self.datum.q_paren_exp(i);
        let letter = |lv: u32| if lv == 0 { Word::empty() } else { Word::letter(i, lv) };
        let tau = |n: u32| self.tau.get(i, n).expect("tau validated at construction");
        let mut out = Element::zero();
        for n in 0..=l.min(k) {
            let (m, s) = (k - n, l - n);
            let ms = m as i64 - s as i64;
            // f_{im} e_{is} K^n = q^{-⟨n s_i h_i, s α_i⟩} f_{im} K^n e_{is}
            let kn = Torus::k(&self.datum, i, n as i64);
            let c = &RationalFunction::q_pow(-(n as i64) * qe * ms) * &tau(n);
            let c = &c * &self.q_pair(&kn, &letter(s)).inv().expect("nonzero");
            out.add_term(TermKey::new(letter(m), kn, letter(s)), &c);
        }
        for n in 1..=l.min(k) {
            let (m, s) = (k - n, l - n);
            let ms = m as i64 - s as i64;
            let inner = if m > 0 && s > 0 {
                self.reorder_ef(i, s, m)
            } else {
                Element::term(TermKey::new(letter(m), Torus::zero(self.rank()), letter(s)), RationalFunction::one())
            };
            let moved = self.mul_torus_right(&inner, &Torus::k(&self.datum, i, -(n as i64)));
            let c = &RationalFunction::q_pow(n as i64 * qe * ms) * &tau(n);
            out.add_scaled(&moved, &-c);
        }
        let tau0 = tau(0);
        if !tau0.is_one() {
            out = out.scale(&tau0.inv().expect("tau_0 is nonzero"));
        }
        self.reorder_memo.lock().unwrap().insert((i, l, k), out.clone());
        out
    }

    /// `ω`: `e ↔ f`, `q^h ↦ q^{-h}`; an algebra involution.
    pub fn omega(&self, x: &Element) -> Result<Element, AlgebraError> {
        let zero = Torus::zero(self.rank());
        let mut out = Element::zero();
        for (k, c) in x.terms() {
            // ω(f_F q^h e_E) = e_F q^{-h} f_E
            let left = Element::term(TermKey::new(Word::empty(), zero.clone(), k.f.clone()), c.clone());
            let right = Element::term(TermKey::new(k.e.clone(), zero.clone(), Word::empty()), RationalFunction::one());
            let left = self.mul_torus_right(&left, &-&k.h);
            out = out.add(&self.multiply(&left, &right)?);
        }
        Ok(out)
    }

    /// `φ`: the anti-automorphism with `e_{il} ↔ f_{il}` fixing `q^h`.
    /// `φ(f_F q^h e_E) = f_{rev E} q^h e_{rev F}` is already triangular.
    pub fn phi(&self, x: &Element) -> Result<Element, AlgebraError> {
        let mut out = Element::zero();
        for (k, c) in x.terms() {
            self.push_reduced(&mut out, &k.e.reversed(), &k.h, &k.f.reversed(), c)?;
        }
        Ok(out)
    }

    /// Drops memo tables (mainly for measuring cold timings).
    pub fn clear_caches(&self) {
        self.reorder_memo.lock().unwrap().clear();
        self.straighten_memo.lock().unwrap().clear();
    }
}
