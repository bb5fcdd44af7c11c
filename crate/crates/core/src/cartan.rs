//! Borcherds-Cartan data: matrix validation, the weight lattice realization,
//! the symmetric bilinear form and bounded Weyl group enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Real,
    Isotropic,
    Imaginary,
}

impl NodeKind {
    pub fn is_real(self) -> bool {
        self == NodeKind::Real
    }

    pub fn is_imaginary(self) -> bool {
        self != NodeKind::Real
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeKind::Real => "real",
            NodeKind::Isotropic => "isotropic",
            NodeKind::Imaginary => "imaginary",
        })
    }
}

/// First violated matrix condition found by [`check_matrix`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("condition (i): diagonal entry a[{i}][{i}] = {value} must be 2 or an even integer <= 0")]
    Diagonal { i: usize, value: i64 },
    #[error("condition (ii): off-diagonal entry a[{i}][{j}] = {value} must be <= 0")]
    OffDiagonal { i: usize, j: usize, value: i64 },
    #[error("condition (iii): symmetrizer fails s[{i}]*a[{i}][{j}] = s[{j}]*a[{j}][{i}]")]
    Symmetrizer { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("malformed datum: {0}")]
    Malformed(String),
    #[error("invalid Borcherds-Cartan matrix: {0}")]
    Invalid(#[from] Violation),
    #[error("node {0} is not real; only real nodes have reflections")]
    NotReal(usize),
    #[error("the pairing of two weights is undefined unless one lies in the root lattice")]
    UnsupportedPairing,
    #[error("weight has {got} components, expected {expected}")]
    Dimension { expected: usize, got: usize },
}

/// Checks shape and positivity (hard errors), then conditions (i)-(iii).
pub fn check_matrix(a: &[Vec<i64>], s: &[i64]) -> Result<Option<Violation>, CartanError> {
    let n = a.len();
    if n == 0 {
        return Err(CartanError::Malformed("empty matrix".into()));
    }
    if let Some(r) = a.iter().position(|row| row.len() != n) {
        return Err(CartanError::Malformed(format!("matrix is not square: row {r} has {} entries, expected {n}", a[r].len())));
    }
    if s.len() != n {
        return Err(CartanError::Malformed(format!("symmetrizer has {} entries, expected {n}", s.len())));
    }
    if let Some(i) = s.iter().position(|&v| v <= 0) {
        return Err(CartanError::Malformed(format!("symmetrizer entry s[{i}] = {} must be positive", s[i])));
    }
    for (i, row) in a.iter().enumerate() {
        let d = row[i];
        if d != 2 && (d > 0 || d % 2 != 0) {
            return Ok(Some(Violation::Diagonal { i, value: d }));
        }
    }
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j && v > 0 {
                return Ok(Some(Violation::OffDiagonal { i, j, value: v }));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if s[i] * a[i][j] != s[j] * a[j][i] {
                return Ok(Some(Violation::Symmetrizer { i, j }));
            }
        }
    }
    Ok(None)
}

/// Element `Σ k_i α_i` of the root lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct RootVec(pub Vec<i64>);

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        RootVec(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize, times: i64) -> Self {
        let mut v = vec![0; rank];
        v[i] = times;
        RootVec(v)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&k| k >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, c: i64) -> RootVec {
        RootVec(self.0.iter().map(|k| k * c).collect())
    }

    /// `self <= other` componentwise.
    pub fn le(&self, other: &RootVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &RootVec {
    type Output = RootVec;
    fn add(self, rhs: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RootVec {
    type Output = RootVec;
    fn sub(self, rhs: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RootVec {
    type Output = RootVec;
    fn neg(self) -> RootVec {
        RootVec(self.0.iter().map(|a| -a).collect())
    }
}

/// A weight, recorded by its pairings with the coroot basis `{h_i} ∪ {d_i}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight {
    pub h: Vec<i64>,
    pub d: Vec<i64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight { h: vec![0; rank], d: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight { h: self.h.iter().map(|x| x * c).collect(), d: self.d.iter().map(|x| x * c).collect() }
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight(h={:?}, d={:?})", self.h, self.d)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight { h: self.h.iter().zip(&rhs.h).map(|(a, b)| a + b).collect(), d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight { h: self.h.iter().zip(&rhs.h).map(|(a, b)| a - b).collect(), d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect() }
    }
}

/// Argument of [`CartanDatum::bilinear`].
#[derive(Clone, Debug)]
pub enum Pairing<'a> {
    Root(&'a RootVec),
    Weight(&'a Weight),
}

/// Element of the Weyl group, as a reduced word `r_{w0} r_{w1} ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement { word: Vec::new() }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn sign(&self) -> i64 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// One element of a bounded Weyl enumeration: `image = w(start)` and
/// `defect = start - w(start)`, which lies in `Q_+`.
#[derive(Clone, Debug)]
pub struct WeylOrbitPoint {
    pub element: WeylElement,
    pub image: Weight,
    pub defect: RootVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    names: Vec<String>,
    a: Vec<Vec<i64>>,
    s: Vec<i64>,
    kinds: Vec<NodeKind>,
}

impl CartanDatum {
    pub fn new(names: Vec<String>, a: Vec<Vec<i64>>, s: Vec<i64>) -> Result<Self, CartanError> {
        if let Some(v) = check_matrix(&a, &s)? {
            return Err(v.into());
        }
        if names.len() != a.len() {
            return Err(CartanError::Malformed(format!("{} node names for a {}x{} matrix", names.len(), a.len(), a.len())));
        }
        let kinds = (0..a.len())
            .map(|i| match a[i][i] {
                2 => NodeKind::Real,
                0 => NodeKind::Isotropic,
                _ => NodeKind::Imaginary,
            })
            .collect();
        Ok(CartanDatum { names, a, s, kinds })
    }

    /// Datum with nodes named `1..n`.
    pub fn from_matrix(a: Vec<Vec<i64>>, s: Vec<i64>) -> Result<Self, CartanError> {
        let names = (1..=a.len()).map(|i| i.to_string()).collect();
        CartanDatum::new(names, a, s)
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.s
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn s(&self, i: usize) -> i64 {
        self.s[i]
    }

    pub fn kind(&self, i: usize) -> NodeKind {
        self.kinds[i]
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.kinds[i].is_real()
    }

    pub fn real_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(|&i| self.is_real(i))
    }

    /// Exponent `e` with `q_(i) = q^e`, i.e. `s_i a_ii / 2`.
    pub fn q_paren_exp(&self, i: usize) -> i64 {
        self.s[i] * self.a[i][i] / 2
    }

    /// Largest level allowed on node `i` within height `n`.
    pub fn max_level(&self, i: usize, n: usize) -> u32 {
        if self.is_real(i) {
            n.min(1) as u32
        } else {
            n as u32
        }
    }

    pub fn simple_root(&self, j: usize) -> Weight {
        let n = self.rank();
        let mut d = vec![0; n];
        d[j] = 1;
        Weight { h: (0..n).map(|i| self.a[i][j]).collect(), d }
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        let n = self.rank();
        let mut h = vec![0; n];
        h[i] = 1;
        Weight { h, d: vec![0; n] }
    }

    /// `Σ c_i Λ_i`.
    pub fn weight_from_fundamental(&self, coeffs: &[i64]) -> Result<Weight, CartanError> {
        self.check_len(coeffs.len())?;
        Ok(Weight { h: coeffs.to_vec(), d: vec![0; self.rank()] })
    }

    pub fn rho(&self) -> Weight {
        Weight { h: vec![1; self.rank()], d: vec![0; self.rank()] }
    }

    pub fn root_weight(&self, beta: &RootVec) -> Weight {
        let n = self.rank();
        let h = (0..n).map(|i| (0..n).map(|j| self.a[i][j] * beta.0[j]).sum()).collect();
        Weight { h, d: beta.0.clone() }
    }

    /// `λ - β`.
    pub fn shift_down(&self, lambda: &Weight, beta: &RootVec) -> Weight {
        lambda - &self.root_weight(beta)
    }

    /// `(β, λ) = Σ k_i s_i ⟨h_i, λ⟩`.
    pub fn pair_root_weight(&self, beta: &RootVec, lambda: &Weight) -> i64 {
        beta.0.iter().enumerate().map(|(i, k)| k * self.s[i] * lambda.h[i]).sum()
    }

    pub fn pair_roots(&self, beta: &RootVec, gamma: &RootVec) -> i64 {
        let n = self.rank();
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc += beta.0[i] * gamma.0[j] * self.s[i] * self.a[i][j];
            }
        }
        acc
    }

    pub fn bilinear(&self, x: Pairing<'_>, y: Pairing<'_>) -> Result<i64, CartanError> {
        match (x, y) {
            (Pairing::Root(b), Pairing::Root(g)) => Ok(self.pair_roots(b, g)),
            (Pairing::Root(b), Pairing::Weight(l)) | (Pairing::Weight(l), Pairing::Root(b)) => Ok(self.pair_root_weight(b, l)),
            (Pairing::Weight(_), Pairing::Weight(_)) => Err(CartanError::UnsupportedPairing),
        }
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.h.iter().all(|&v| v >= 0)
    }

    /// `r_i(λ) = λ - ⟨h_i, λ⟩ α_i`.
    pub fn reflect(&self, i: usize, lambda: &Weight) -> Result<Weight, CartanError> {
        if !self.is_real(i) {
            return Err(CartanError::NotReal(i));
        }
        Ok(self.reflect_unchecked(i, lambda))
    }

    fn reflect_unchecked(&self, i: usize, lambda: &Weight) -> Weight {
        let c = lambda.h[i];
        if c == 0 {
            return lambda.clone();
        }
        lambda - &self.simple_root(i).scale(c)
    }

    /// Applies `w = r_{w0} r_{w1} ...` to `λ` (rightmost letter first).
    pub fn act(&self, w: &WeylElement, lambda: &Weight) -> Weight {
        w.word.iter().rev().fold(lambda.clone(), |acc, &i| self.reflect_unchecked(i, &acc))
    }

    /// `r_i` acting on the root lattice.
    pub fn reflect_root(&self, i: usize, beta: &RootVec) -> RootVec {
        let c: i64 = (0..self.rank()).map(|j| self.a[i][j] * beta.0[j]).sum();
        let mut out = beta.clone();
        out.0[i] -= c;
        out
    }

    pub fn act_root(&self, w: &WeylElement, beta: &RootVec) -> RootVec {
        w.word.iter().rev().fold(beta.clone(), |acc, &i| self.reflect_root(i, &acc))
    }

    /// All Weyl elements `w` with `ht(start - w(start)) <= bound`, where
    /// `start` pairs positively with every real coroot. Breadth-first over
    /// length; a step `w -> r_i w` is length-increasing exactly when
    /// `⟨h_i, w(start)⟩ > 0`, and then the defect grows by that amount times
    /// `α_i`, so pruning at the bound is exact. Elements are identified by
    /// their image of `start`, which is injective for a regular start.
    /// Output is ordered by length, then lexicographically by word, and each
    /// element carries its lexicographically smallest reduced word.
    pub fn enumerate_weyl(&self, start: &Weight, bound: i64) -> Vec<WeylOrbitPoint> {
        debug_assert!(self.real_nodes().all(|i| start.h[i] > 0));
        let n = self.rank();
        let mut out = vec![WeylOrbitPoint { element: WeylElement::identity(), image: start.clone(), defect: RootVec::zero(n) }];
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next: BTreeMap<Weight, (Vec<usize>, RootVec)> = BTreeMap::new();
            for &idx in &frontier {
                let p = &out[idx];
                for i in self.real_nodes() {
                    let c = p.image.h[i];
                    if c <= 0 {
                        continue;
                    }
                    let mut defect = p.defect.clone();
                    defect.0[i] += c;
                    if defect.height() > bound {
                        continue;
                    }
                    let image = self.reflect_unchecked(i, &p.image);
                    let mut word = Vec::with_capacity(p.element.word.len() + 1);
                    word.push(i);
                    word.extend_from_slice(&p.element.word);
                    match next.get_mut(&image) {
                        Some(slot) if slot.0 <= word => {}
                        Some(slot) => slot.0 = word,
                        None => {
                            next.insert(image, (word, defect));
                        }
                    }
                }
            }
            let mut level: Vec<WeylOrbitPoint> =
                next.into_iter().map(|(image, (word, defect))| WeylOrbitPoint { element: WeylElement { word }, image, defect }).collect();
            level.sort_by(|x, y| x.element.word.cmp(&y.element.word));
            let base = out.len();
            frontier = (base..base + level.len()).collect();
            out.extend(level);
        }
        out
    }

    fn check_len(&self, got: usize) -> Result<(), CartanError> {
        if got != self.rank() {
            return Err(CartanError::Dimension { expected: self.rank(), got });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl3() -> CartanDatum {
        CartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 2]], vec![1, 1]).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert_eq!(check_matrix(&[vec![2]], &[1]), Ok(None));
        assert_eq!(check_matrix(&[vec![2, -1], vec![-1, 0]], &[1, 1]), Ok(None));
        assert_eq!(check_matrix(&[vec![3]], &[1]), Ok(Some(Violation::Diagonal { i: 0, value: 3 })));
        assert_eq!(check_matrix(&[vec![-1]], &[1]), Ok(Some(Violation::Diagonal { i: 0, value: -1 })));
        assert_eq!(check_matrix(&[vec![2, 1], vec![1, 2]], &[1, 1]), Ok(Some(Violation::OffDiagonal { i: 0, j: 1, value: 1 })));
        assert_eq!(check_matrix(&[vec![2, -1], vec![-2, 2]], &[1, 1]), Ok(Some(Violation::Symmetrizer { i: 0, j: 1 })));
        assert_eq!(check_matrix(&[vec![2, -1], vec![-2, 2]], &[2, 1]), Ok(None));
        assert!(matches!(check_matrix(&[vec![2, 0]], &[1]), Err(CartanError::Malformed(_))));
    }

    #[test]
    fn kinds_and_roots() {
        let d = CartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 0]], vec![1, 1]).unwrap();
        assert_eq!(d.kind(0), NodeKind::Real);
        assert_eq!(d.kind(1), NodeKind::Isotropic);
        let a1 = d.simple_root(0);
        assert_eq!(a1.h, vec![2, -1]);
        assert_eq!(a1.d, vec![1, 0]);
        assert_eq!(d.root_weight(&RootVec(vec![1, 0])), a1);
    }

    #[test]
    fn bilinear_examples() {
        let d = sl3();
        let a1 = RootVec::simple(2, 0, 1);
        let a2 = RootVec::simple(2, 1, 1);
        assert_eq!(d.bilinear(Pairing::Root(&a1), Pairing::Root(&a1)), Ok(2));
        assert_eq!(d.bilinear(Pairing::Root(&a1), Pairing::Root(&a2)), Ok(-1));
        let l2 = d.fundamental(1);
        assert_eq!(d.bilinear(Pairing::Weight(&l2), Pairing::Root(&a2)), Ok(1));
        assert_eq!(d.bilinear(Pairing::Root(&a1), Pairing::Weight(&l2)), Ok(0));
        assert_eq!(d.bilinear(Pairing::Weight(&l2), Pairing::Weight(&l2)), Err(CartanError::UnsupportedPairing));
    }

    #[test]
    fn reflections() {
        let d = sl3();
        let l1 = d.fundamental(0);
        assert_eq!(d.reflect(0, &l1).unwrap(), &l1 - &d.simple_root(0));
        assert_eq!(d.reflect(1, &l1).unwrap(), l1);
        let lam = Weight { h: vec![3, -2], d: vec![1, 4] };
        assert_eq!(d.reflect(0, &d.reflect(0, &lam).unwrap()).unwrap(), lam);
        let im = CartanDatum::from_matrix(vec![vec![-2]], vec![1]).unwrap();
        assert_eq!(im.reflect(0, &im.fundamental(0)), Err(CartanError::NotReal(0)));
    }

    #[test]
    fn weyl_rank_one() {
        let d = CartanDatum::from_matrix(vec![vec![2]], vec![1]).unwrap();
        let lam_rho = &d.fundamental(0).scale(2) + &d.rho();
        let pts = d.enumerate_weyl(&lam_rho, 3);
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].element.sign(), 1);
        assert_eq!(pts[1].element.sign(), -1);
        assert_eq!(pts[1].defect, RootVec(vec![3]));
        assert_eq!(d.enumerate_weyl(&lam_rho, 2).len(), 1);

        let im = CartanDatum::from_matrix(vec![vec![0]], vec![1]).unwrap();
        assert_eq!(im.enumerate_weyl(&im.rho(), 100).len(), 1);
    }

    #[test]
    fn weyl_sl3_is_s3() {
        let d = sl3();
        let pts = d.enumerate_weyl(&d.rho(), 100);
        let signs: Vec<i64> = pts.iter().map(|p| p.element.sign()).collect();
        assert_eq!(signs, vec![1, -1, -1, 1, 1, -1]);
        assert_eq!(pts[5].defect, RootVec(vec![2, 2]));
        for p in &pts {
            assert_eq!(d.act(&p.element, &d.rho()), p.image);
            for i in 0..2 {
                for j in 0..2 {
                    let ai = d.act_root(&p.element, &RootVec::simple(2, i, 1));
                    let aj = d.act_root(&p.element, &RootVec::simple(2, j, 1));
                    assert_eq!(d.pair_roots(&ai, &aj), d.pair_roots(&RootVec::simple(2, i, 1), &RootVec::simple(2, j, 1)));
                }
            }
        }
    }
}
