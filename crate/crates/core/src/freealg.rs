//! The free algebra on the letters `f_{il}`, its twisted tensor square, the
//! co-multiplication `δ` and the Lusztig bilinear form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use thiserror::Error;

use crate::cartan::{CartanDatum, RootVec};
use crate::linalg::Matrix;
use crate::qfield::{check_tau_assumption, q_integer, QError, RationalFunction};

/// Generator `f_{il}` (or `e_{il}`; the free algebra does not care).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub node: usize,
    pub level: u32,
}

impl Letter {
    pub fn new(node: usize, level: u32) -> Self {
        Letter { node, level }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.node, self.level)
    }
}

/// A monomial in the letters. Words are ordered by length, then
/// lexicographically on `(node, level)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(node: usize, level: u32) -> Self {
        Word(vec![Letter::new(node, level)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// `Σ l α_i` over the letters (the negated grading degree).
    pub fn weight(&self, rank: usize) -> RootVec {
        let mut k = vec![0i64; rank];
        for l in &self.0 {
            k[l.node] += l.level as i64;
        }
        RootVec(k)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().map(|l| l.level as i64).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Renders the word with the given generator symbol, e.g. `f[1,2] f[2,1]`.
    pub fn render(&self, symbol: char, datum: &CartanDatum) -> String {
        self.0.iter().map(|l| format!("{symbol}[{},{}]", datum.name(l.node), l.level)).collect::<Vec<_>>().join(" ")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All words of weight `beta` (levels on real nodes fixed at 1), sorted.
pub fn words_of_weight(datum: &CartanDatum, beta: &RootVec) -> Vec<Word> {
    fn go(datum: &CartanDatum, rest: &mut RootVec, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if rest.is_zero() {
            out.push(Word(cur.clone()));
            return;
        }
        for i in 0..datum.rank() {
            let avail = rest.0[i];
            let top = if datum.is_real(i) { avail.min(1) } else { avail };
            for l in 1..=top {
                rest.0[i] -= l;
                cur.push(Letter::new(i, l as u32));
                go(datum, rest, cur, out);
                cur.pop();
                rest.0[i] += l;
            }
        }
    }
    let mut out = Vec::new();
    if beta.is_nonneg() {
        go(datum, &mut beta.clone(), &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Every `β ∈ Q_+` with `|β| <= n`, ordered by height then lexicographically.
pub fn weights_up_to(rank: usize, n: usize) -> Vec<RootVec> {
    fn go(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<RootVec>) {
        if i == cur.len() {
            out.push(RootVec(cur.clone()));
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            go(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, n as i64, &mut vec![0; rank], &mut out);
    out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("no tau value configured for node {node}, level {level}")]
    MissingTau { node: usize, level: u32 },
    #[error("tau for node {node}, level {level} violates the series condition 1 + q Z>=0[[q]]")]
    TauAssumption { node: usize, level: u32 },
    #[error(transparent)]
    Field(#[from] QError),
}

/// The generator norms `τ_{il}`; `τ_{i0} = 1` always.
#[derive(Clone, Debug, Default)]
pub struct Tau {
    table: BTreeMap<(usize, u32), RationalFunction>,
}

impl Tau {
    pub fn new() -> Self {
        Tau::default()
    }

    /// `τ_{i1} = 1/(1 - q_i^2)` on every real node; imaginary nodes stay
    /// unset.
    pub fn real_defaults(datum: &CartanDatum) -> Self {
        let mut t = Tau::new();
        for i in datum.real_nodes() {
            t.set(i, 1, Tau::real_default(datum.s(i)));
        }
        t
    }

    /// Real defaults plus `τ_{il} = 1/(1 - q^{2 s_i l})` on imaginary nodes
    /// for `l <= n`.
    pub fn geometric(datum: &CartanDatum, n: usize) -> Self {
        let mut t = Tau::real_defaults(datum);
        for i in (0..datum.rank()).filter(|&i| !datum.is_real(i)) {
            for l in 1..=n as u32 {
                t.set(i, l, Tau::real_default(datum.s(i) * l as i64));
            }
        }
        t
    }

    pub fn real_default(s: i64) -> RationalFunction {
        let den = &RationalFunction::one() - &RationalFunction::q_pow(2 * s);
        RationalFunction::one().checked_div(&den).expect("1 - q^2s is nonzero")
    }

    pub fn set(&mut self, node: usize, level: u32, value: RationalFunction) {
        self.table.insert((node, level), value);
    }

    pub fn get(&self, node: usize, level: u32) -> Result<RationalFunction, FormError> {
        if level == 0 {
            return Ok(RationalFunction::one());
        }
        self.table.get(&(node, level)).cloned().ok_or(FormError::MissingTau { node, level })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, u32), &RationalFunction)> {
        self.table.iter()
    }

    /// Checks presence and the series condition for every level a height-`n`
    /// computation can touch.
    pub fn validate(&self, datum: &CartanDatum, n: usize, order: usize) -> Result<(), FormError> {
        for i in 0..datum.rank() {
            for l in 1..=datum.max_level(i, n) {
                let t = self.get(i, l)?;
                if !check_tau_assumption(&t, order)? {
                    return Err(FormError::TauAssumption { node: i, level: l });
                }
            }
        }
        Ok(())
    }
}

/// Element of the free algebra.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FreeElement {
    terms: BTreeMap<Word, RationalFunction>,
}

impl FreeElement {
    pub fn zero() -> Self {
        FreeElement::default()
    }

    pub fn one() -> Self {
        FreeElement::word(Word::empty())
    }

    pub fn word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, RationalFunction::one());
        FreeElement { terms }
    }

    pub fn letter(node: usize, level: u32) -> Self {
        FreeElement::word(Word::letter(node, level))
    }

    pub fn terms(&self) -> &BTreeMap<Word, RationalFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero();
        }
        FreeElement { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &FreeElement) -> FreeElement {
        let mut out = FreeElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), &(x * y));
            }
        }
        out
    }
}

impl fmt::Debug for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Element of `F ⊗ F` with the twisted product
/// `(a1 ⊗ a2)(b1 ⊗ b2) = q^{-(deg a2, deg b1)} a1 b1 ⊗ a2 b2`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TwistedTensor {
    terms: BTreeMap<(Word, Word), RationalFunction>,
}

impl TwistedTensor {
    pub fn zero() -> Self {
        TwistedTensor::default()
    }

    pub fn one() -> Self {
        TwistedTensor::pure(Word::empty(), Word::empty())
    }

    pub fn pure(a: Word, b: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((a, b), RationalFunction::one());
        TwistedTensor { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), RationalFunction> {
        &self.terms
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn mul(&self, other: &TwistedTensor, datum: &CartanDatum) -> TwistedTensor {
        let n = datum.rank();
        let mut out = TwistedTensor::zero();
        for ((a1, a2), x) in &self.terms {
            let w2 = a2.weight(n);
            for ((b1, b2), y) in &other.terms {
                let e = datum.pair_roots(&w2, &b1.weight(n));
                let c = &(x * y) * &RationalFunction::q_pow(-e);
                out.add_term(a1.concat(b1), a2.concat(b2), &c);
            }
        }
        out
    }
}

impl fmt::Debug for TwistedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `δ(f_{il}) = Σ_{m+n=l} q_(i)^{-mn} f_{im} ⊗ f_{in}`.
pub fn delta_letter(datum: &CartanDatum, letter: Letter) -> TwistedTensor {
    let i = letter.node;
    let l = letter.level;
    let qe = datum.q_paren_exp(i);
    let mut out = TwistedTensor::zero();
    for m in 0..=l {
        let n = l - m;
        let a = if m == 0 { Word::empty() } else { Word::letter(i, m) };
        let b = if n == 0 { Word::empty() } else { Word::letter(i, n) };
        out.add_term(a, b, &RationalFunction::q_pow(-qe * (m * n) as i64));
    }
    out
}

/// `δ` extended multiplicatively through the twisted product.
pub fn delta(datum: &CartanDatum, x: &FreeElement) -> TwistedTensor {
    let mut out = TwistedTensor::zero();
    for (w, c) in x.terms() {
        let mut t = TwistedTensor::one();
        for &l in w.letters() {
            t = t.mul(&delta_letter(datum, l), datum);
        }
        for ((a, b), v) in t.terms {
            out.add_term(a, b, &(&v * c));
        }
    }
    out
}

/// The Lusztig form, evaluated by the recursion `(x, y1 y')_L =
/// (δ(x), y1 ⊗ y')_L` on the first letter `y1`, with symmetry used when the
/// second argument is a single letter. Word pairings are memoized.
pub struct LusztigForm<'a> {
    datum: &'a CartanDatum,
    tau: &'a Tau,
    memo: Mutex<HashMap<(Word, Word), RationalFunction>>,
}

impl<'a> LusztigForm<'a> {
    pub fn new(datum: &'a CartanDatum, tau: &'a Tau) -> Self {
        LusztigForm { datum, tau, memo: Mutex::new(HashMap::new()) }
    }

    pub fn pair(&self, x: &FreeElement, y: &FreeElement) -> Result<RationalFunction, FormError> {
        let mut acc = RationalFunction::zero();
        for (a, c) in x.terms() {
            for (b, d) in y.terms() {
                let v = self.pair_words(a, b)?;
                if !v.is_zero() {
                    acc += &(&v * &(c * d));
                }
            }
        }
        Ok(acc)
    }

    /// `(δ(x), y ⊗ z)_L = Σ c (a, y)_L (b, z)_L` over the terms of a tensor.
    pub fn pair_tensor(&self, t: &TwistedTensor, y: &Word, z: &Word) -> Result<RationalFunction, FormError> {
        let mut acc = RationalFunction::zero();
        for ((a, b), c) in t.terms() {
            let u = self.pair_words(a, y)?;
            if u.is_zero() {
                continue;
            }
            let v = self.pair_words(b, z)?;
            if !v.is_zero() {
                acc += &(&(&u * &v) * c);
            }
        }
        Ok(acc)
    }

    pub fn pair_words(&self, x: &Word, y: &Word) -> Result<RationalFunction, FormError> {
        let n = self.datum.rank();
        if x.height() != y.height() || x.weight(n) != y.weight(n) {
            return Ok(RationalFunction::zero());
        }
        if y.is_empty() {
            return Ok(RationalFunction::one());
        }
        if x.len() == 1 && y.len() == 1 {
            let l = x.0[0];
            return if l == y.0[0] { self.tau.get(l.node, l.level) } else { Ok(RationalFunction::zero()) };
        }
        let key = (x.clone(), y.clone());
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = if y.len() == 1 { self.pair_words(y, x)? } else { self.peel(x, y)? };
        self.memo.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Sums over the splits of `δ(x)` whose left factor has the weight of the
    /// first letter of `y`.
    fn peel(&self, x: &Word, y: &Word) -> Result<RationalFunction, FormError> {
        let first = y.0[0];
        let rest = Word(y.0[1..].to_vec());
        let target = first.level;
        let j = first.node;
        let letters = x.letters();
        let mut acc = RationalFunction::zero();
        let mut split = vec![0u32; letters.len()];
        self.splits(letters, j, 0, target, &mut split, &mut |m| {
            let mut a = Vec::new();
            let mut b = Vec::new();
            let mut exp = 0i64;
            for (p, (&l, &mp)) in letters.iter().zip(m.iter()).enumerate() {
                let np = l.level - mp;
                exp -= self.datum.q_paren_exp(l.node) * (mp * np) as i64;
                if mp > 0 {
                    a.push(Letter::new(l.node, mp));
                }
                if np > 0 {
                    b.push(Letter::new(l.node, np));
                }
                for (&lr, &mr) in letters.iter().zip(m.iter()).skip(p + 1) {
                    if np > 0 && mr > 0 {
                        let ab = self.datum.s(l.node) * self.datum.a(l.node, lr.node);
                        exp -= (np as i64) * (mr as i64) * ab;
                    }
                }
            }
            let u = self.pair_words(&Word(a), &Word::letter(j, target))?;
            if u.is_zero() {
                return Ok(());
            }
            let v = self.pair_words(&Word(b), &rest)?;
            if !v.is_zero() {
                acc += &(&(&u * &v) * &RationalFunction::q_pow(exp));
            }
            Ok(())
        })?;
        Ok(acc)
    }

    fn splits(
        &self,
        letters: &[Letter],
        node: usize,
        pos: usize,
        left: u32,
        cur: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]) -> Result<(), FormError>,
    ) -> Result<(), FormError> {
        if pos == letters.len() {
            return if left == 0 { f(cur) } else { Ok(()) };
        }
        let l = letters[pos];
        let top = if l.node == node { l.level.min(left) } else { 0 };
        for m in 0..=top {
            cur[pos] = m;
            self.splits(letters, node, pos + 1, left - m, cur, f)?;
        }
        cur[pos] = 0;
        Ok(())
    }

    /// Gram matrix of the form on the words of weight `beta`, in word order.
    pub fn gram_matrix(&self, beta: &RootVec) -> Result<(Vec<Word>, Matrix), FormError> {
        let words = words_of_weight(self.datum, beta);
        let mut m = Matrix::zeros(words.len(), words.len());
        for (r, x) in words.iter().enumerate() {
            for (c, y) in words.iter().enumerate().skip(r) {
                let v = self.pair_words(x, y)?;
                m.set(r, c, v.clone());
                m.set(c, r, v);
            }
        }
        Ok((words, m))
    }
}

/// The `q`-Serre element `Σ_k (-1)^k [N choose k]_i f_i^{N-k} f_{jl} f_i^k`
/// with `N = 1 - l a_ij`, for real `i` and `j != i`.
pub fn serre_element(datum: &CartanDatum, i: usize, j: usize, l: u32) -> FreeElement {
    debug_assert!(datum.is_real(i) && i != j);
    let top = (1 - l as i64 * datum.a(i, j)) as u32;
    let si = datum.s(i) as u32;
    let mut out = FreeElement::zero();
    for k in 0..=top {
        let mut letters = vec![Letter::new(i, 1); (top - k) as usize];
        letters.push(Letter::new(j, l));
        letters.extend(std::iter::repeat_n(Letter::new(i, 1), k as usize));
        let mut c = q_binomial_real(top, k, si);
        if k % 2 == 1 {
            c = -c;
        }
        out.add_term(Word(letters), &c);
    }
    out
}

fn q_binomial_real(n: u32, k: u32, s: u32) -> RationalFunction {
    let num = (n - k + 1..=n).fold(RationalFunction::one(), |acc, t| acc * q_integer(t, s));
    let den = (1..=k).fold(RationalFunction::one(), |acc, t| acc * q_integer(t, s));
    num.checked_div(&den).expect("q-integers are nonzero")
}

/// `f_{ik} f_{jl} - f_{jl} f_{ik}` (for `a_ij = 0`).
pub fn commutator_element(a: Letter, b: Letter) -> FreeElement {
    let mut out = FreeElement::zero();
    out.add_term(Word(vec![a, b]), &RationalFunction::one());
    out.add_term(Word(vec![b, a]), &-RationalFunction::one());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank2() -> CartanDatum {
        CartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 0]], vec![1, 1]).unwrap()
    }

    fn tau_for(d: &CartanDatum) -> Tau {
        let mut t = Tau::real_defaults(d);
        for i in 0..d.rank() {
            if !d.is_real(i) {
                for l in 1..=6u32 {
                    t.set(i, l, Tau::real_default(l as i64));
                }
            }
        }
        t
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let a = Word(vec![Letter::new(1, 2)]);
        let b = Word(vec![Letter::new(0, 1), Letter::new(0, 1)]);
        assert!(a < b);
        let c = Word(vec![Letter::new(0, 1), Letter::new(1, 1)]);
        assert!(c < Word(vec![Letter::new(1, 1), Letter::new(0, 1)]));
    }

    #[test]
    fn words_enumerated_by_weight() {
        let d = rank2();
        let ws = words_of_weight(&d, &RootVec(vec![1, 2]));
        // f0 f12, f12 f0, f0 f11 f11, f11 f0 f11, f11 f11 f0
        assert_eq!(ws.len(), 5);
        assert_eq!(words_of_weight(&d, &RootVec(vec![2, 0])).len(), 1);
        assert_eq!(weights_up_to(2, 2).len(), 6);
    }

    #[test]
    fn delta_of_generators() {
        let d = CartanDatum::from_matrix(vec![vec![-2]], vec![1]).unwrap();
        let t = delta_letter(&d, Letter::new(0, 2));
        assert_eq!(t.terms().len(), 3);
        let mid = &t.terms()[&(Word::letter(0, 1), Word::letter(0, 1))];
        assert_eq!(*mid, RationalFunction::q_pow(1));
        let t1 = delta(&d, &FreeElement::letter(0, 1));
        assert_eq!(t1.terms().len(), 2);
        assert_eq!(delta(&d, &FreeElement::one()), TwistedTensor::one());
    }

    #[test]
    fn form_on_letters_and_grading() {
        let d = rank2();
        let tau = tau_for(&d);
        let form = LusztigForm::new(&d, &tau);
        assert_eq!(form.pair_words(&Word::letter(1, 2), &Word::letter(1, 2)).unwrap(), tau.get(1, 2).unwrap());
        assert!(form.pair_words(&Word::letter(1, 2), &Word::letter(1, 1)).unwrap().is_zero());
        assert!(form.pair_words(&Word::letter(0, 1), &Word::letter(1, 1)).unwrap().is_zero());
        let (_, g0) = form.gram_matrix(&RootVec(vec![0, 0])).unwrap();
        assert_eq!(g0, Matrix::identity(1));
        let (ws, g) = form.gram_matrix(&RootVec(vec![0, 2])).unwrap();
        assert_eq!(ws.len(), 2);
        assert!(g.is_symmetric());
    }

    #[test]
    fn missing_tau_is_reported() {
        let d = CartanDatum::from_matrix(vec![vec![0]], vec![1]).unwrap();
        let tau = Tau::real_defaults(&d);
        let form = LusztigForm::new(&d, &tau);
        assert_eq!(form.pair_words(&Word::letter(0, 1), &Word::letter(0, 1)), Err(FormError::MissingTau { node: 0, level: 1 }));
    }

    #[test]
    fn serre_shape() {
        let d = rank2();
        let s = serre_element(&d, 0, 1, 1);
        // N = 2: f0 f0 f1 - [2] f0 f1 f0 + f1 f0 f0
        assert_eq!(s.terms().len(), 3);
        let mid = Word(vec![Letter::new(0, 1), Letter::new(1, 1), Letter::new(0, 1)]);
        assert_eq!(s.terms()[&mid], -RationalFunction::laurent(-1, &[1, 0, 1]));
    }
}
