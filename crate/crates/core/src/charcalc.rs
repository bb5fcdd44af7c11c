//! Characters of integrable highest-weight modules and root multiplicities
//! from the denominator identity.
//!
//! Formal sums live in `Z[[x_1, .., x_n]]` truncated at total degree `N`,
//! where `x^β` stands for `e^{-β}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanDatum, NodeKind, RootVec, Weight};
use crate::freealg::weights_up_to;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("root multiplicity at {beta} is not an integer: {value}")]
    NonIntegral { beta: RootVec, value: String },
    #[error("root multiplicity at {beta} is negative: {value}")]
    NegativeMultiplicity { beta: RootVec, value: i64 },
    #[error("root multiplicity at {beta} disagrees between solvers: {log} vs {peel}")]
    SolverMismatch { beta: RootVec, log: i64, peel: i64 },
    #[error("character coefficient at {beta} is negative: {value}")]
    NegativeCharacter { beta: RootVec, value: i64 },
    #[error("coefficient at {0} does not fit in 64 bits")]
    Overflow(RootVec),
}

/// Truncated power series with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    rank: usize,
    order: usize,
    coeffs: BTreeMap<RootVec, BigInt>,
}

impl Series {
    pub fn zero(rank: usize, order: usize) -> Self {
        Series { rank, order, coeffs: BTreeMap::new() }
    }

    pub fn one(rank: usize, order: usize) -> Self {
        let mut s = Series::zero(rank, order);
        s.add_term(RootVec::zero(rank), &BigInt::one());
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, beta: &RootVec) -> BigInt {
        self.coeffs.get(beta).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> &BTreeMap<RootVec, BigInt> {
        &self.coeffs
    }

    pub fn add_term(&mut self, beta: RootVec, c: &BigInt) {
        if c.is_zero() || beta.height() > self.order as i64 {
            return;
        }
        let slot = self.coeffs.entry(beta.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&beta);
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let mut out = Series::zero(self.rank, self.order.min(other.order));
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let g = a + b;
                if g.height() <= out.order as i64 {
                    out.add_term(g, &(ca * cb));
                }
            }
        }
        out
    }

    /// Multiplies in place by `(1 - x^β)^{-1}`.
    pub fn divide_one_minus(&mut self, beta: &RootVec) {
        let keys: Vec<RootVec> = weights_up_to(self.rank, self.order);
        for g in keys {
            let src = &g - beta;
            if !src.is_nonneg() {
                continue;
            }
            let c = self.coeff(&src);
            self.add_term(g, &c);
        }
    }

    /// Multiplies in place by `(1 - x^β)`.
    pub fn times_one_minus(&mut self, beta: &RootVec) {
        let mut keys: Vec<RootVec> = weights_up_to(self.rank, self.order);
        keys.reverse();
        for g in keys {
            let src = &g - beta;
            if !src.is_nonneg() {
                continue;
            }
            let c = -self.coeff(&src);
            self.add_term(g, &c);
        }
    }
}

/// `φ(n)`: the coefficient of `q^n` in `∏_{k>=1} (1 - q^k)`.
pub fn pentagonal_phi(n: usize) -> i64 {
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for k in 1..=n {
        for j in (k..=n).rev() {
            c[j] -= c[j - k];
        }
    }
    c[n]
}

/// An element `s` of `F_λ` with its sign `ε(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub s: RootVec,
    pub sign: i64,
}

/// All `s ∈ F_λ` of height at most `n`: lattice vectors supported on
/// pairwise orthogonal imaginary nodes (distinct nodes only), each
/// orthogonal to `λ`.
pub fn enumerate_f(datum: &CartanDatum, lambda: &Weight, n: usize) -> Result<Vec<Correction>, CharError> {
    if !datum.is_dominant(lambda) {
        return Err(CharError::NotDominant(lambda.h.clone()));
    }
    let rank = datum.rank();
    let candidates: Vec<usize> = (0..rank).filter(|&i| !datum.is_real(i) && lambda.h[i] == 0).collect();
    let mut out = Vec::new();
    fn go(datum: &CartanDatum, cands: &[usize], pos: usize, budget: i64, chosen: &mut Vec<(usize, i64)>, out: &mut Vec<Correction>) {
        if pos == cands.len() {
            let mut s = RootVec::zero(datum.rank());
            let mut sign = 1;
            for &(i, l) in chosen.iter() {
                s.0[i] = l;
                sign *= match datum.kind(i) {
                    NodeKind::Isotropic => pentagonal_phi(l as usize),
                    _ => -1,
                };
            }
            if sign != 0 {
                out.push(Correction { s, sign });
            }
            return;
        }
        go(datum, cands, pos + 1, budget, chosen, out);
        let i = cands[pos];
        if chosen.iter().any(|&(j, _)| datum.s(j) * datum.a(j, i) != 0) {
            return;
        }
        for l in 1..=budget {
            chosen.push((i, l));
            go(datum, cands, pos + 1, budget - l, chosen, out);
            chosen.pop();
        }
    }
    go(datum, &candidates, 0, n as i64, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.s.height().cmp(&b.s.height()).then_with(|| a.s.cmp(&b.s)));
    Ok(out)
}

/// `Σ_{w, s} ε(w) ε(s) x^{s + (μ - wμ)}` with `μ = λ + ρ - s`, truncated at
/// height `n`. Only Weyl elements with `ht(μ - wμ) <= n - ht(s)` can
/// contribute, and the enumeration prunes exactly there.
pub fn numerator(datum: &CartanDatum, lambda: &Weight, n: usize) -> Result<Series, CharError> {
    let rank = datum.rank();
    let rho = datum.rho();
    let mut out = Series::zero(rank, n);
    for corr in enumerate_f(datum, lambda, n)? {
        let mu = datum.shift_down(&(lambda + &rho), &corr.s);
        let budget = n as i64 - corr.s.height();
        for p in datum.enumerate_weyl(&mu, budget) {
            out.add_term(&corr.s + &p.defect, &BigInt::from(corr.sign * p.element.sign()));
        }
    }
    Ok(out)
}

/// `dim g_β` for every `β` of height `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootMultiplicities {
    pub cutoff: usize,
    #[serde(serialize_with = "serialize_table")]
    pub table: BTreeMap<RootVec, i64>,
}

fn serialize_table<S: serde::Serializer>(t: &BTreeMap<RootVec, i64>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for (b, m) in t {
        seq.serialize_element(&(&b.0, m))?;
    }
    seq.end()
}

impl RootMultiplicities {
    pub fn get(&self, beta: &RootVec) -> i64 {
        self.table.get(beta).copied().unwrap_or(0)
    }

    /// Positive roots (nonzero multiplicity) in height order.
    pub fn roots(&self) -> Vec<(RootVec, i64)> {
        let mut v: Vec<(RootVec, i64)> = self.table.iter().filter(|(_, &m)| m != 0).map(|(b, &m)| (b.clone(), m)).collect();
        v.sort_by(|a, b| a.0.height().cmp(&b.0.height()).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

/// Solves `∏ (1 - x^β)^{m_β} = numerator(0)` for the exponents, through the
/// logarithm over `Q` and independently by peeling factors over `Z`.
pub fn root_multiplicities(datum: &CartanDatum, n: usize) -> Result<RootMultiplicities, CharError> {
    let zero = Weight::zero(datum.rank());
    let num = numerator(datum, &zero, n)?;
    let log_side = solve_by_log(&num, datum.rank(), n)?;
    let peel_side = solve_by_peeling(&num, datum.rank(), n)?;
    for (beta, &m) in &log_side {
        let p = peel_side.get(beta).copied().unwrap_or(0);
        if p != m {
            return Err(CharError::SolverMismatch { beta: beta.clone(), log: m, peel: p });
        }
    }
    Ok(RootMultiplicities { cutoff: n, table: log_side })
}

type RatSeries = BTreeMap<RootVec, BigRational>;

fn rat_mul(a: &RatSeries, b: &RatSeries, n: usize) -> RatSeries {
    let mut out = RatSeries::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let g = x + y;
            if g.height() <= n as i64 {
                *out.entry(g).or_insert_with(BigRational::zero) += cx * cy;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn to_i64(beta: &RootVec, v: &BigRational) -> Result<i64, CharError> {
    if !v.is_integer() {
        return Err(CharError::NonIntegral { beta: beta.clone(), value: v.to_string() });
    }
    v.to_integer().to_i64().ok_or_else(|| CharError::Overflow(beta.clone()))
}

/// `log P = -Σ_β m_β Σ_k x^{kβ}/k`, so `m_β = -L_β - Σ_{k>=2, kγ=β} m_γ/k`.
fn solve_by_log(num: &Series, rank: usize, n: usize) -> Result<BTreeMap<RootVec, i64>, CharError> {
    let u: RatSeries =
        num.terms().iter().filter(|(b, _)| !b.is_zero()).map(|(b, c)| (b.clone(), BigRational::from_integer(c.clone()))).collect();
    let mut log = RatSeries::new();
    let mut power = u.clone();
    for j in 1..=n {
        let c = BigRational::new(if j % 2 == 1 { 1 } else { -1 }.into(), BigInt::from(j));
        for (b, v) in &power {
            *log.entry(b.clone()).or_insert_with(BigRational::zero) += v * &c;
        }
        power = rat_mul(&power, &u, n);
    }
    let mut mult: BTreeMap<RootVec, i64> = BTreeMap::new();
    for beta in weights_up_to(rank, n).into_iter().filter(|b| !b.is_zero()) {
        let mut v = -log.get(&beta).cloned().unwrap_or_else(BigRational::zero);
        for k in 2..=beta.height() {
            if beta.0.iter().all(|c| c % k == 0) {
                let gamma = RootVec(beta.0.iter().map(|c| c / k).collect());
                v -= BigRational::new(mult[&gamma].into(), k.into());
            }
        }
        let m = to_i64(&beta, &v)?;
        if m < 0 {
            return Err(CharError::NegativeMultiplicity { beta, value: m });
        }
        mult.insert(beta, m);
    }
    Ok(mult)
}

/// Divides out one factor at a time in height order: if the running series
/// is `1 + c x^β + ...`, then `m_β = -c`.
fn solve_by_peeling(num: &Series, rank: usize, n: usize) -> Result<BTreeMap<RootVec, i64>, CharError> {
    let mut p = num.clone();
    let mut mult = BTreeMap::new();
    for beta in weights_up_to(rank, n).into_iter().filter(|b| !b.is_zero()) {
        let m = (-p.coeff(&beta)).to_i64().ok_or_else(|| CharError::Overflow(beta.clone()))?;
        for _ in 0..m.abs() {
            if m > 0 {
                p.divide_one_minus(&beta);
            } else {
                p.times_one_minus(&beta);
            }
        }
        mult.insert(beta, m);
    }
    Ok(mult)
}

/// Weight multiplicities `dim V(λ)_{λ-β}` for `|β| <= N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    pub lambda: Weight,
    pub cutoff: usize,
    #[serde(serialize_with = "serialize_table")]
    pub mults: BTreeMap<RootVec, i64>,
}

impl Character {
    pub fn get(&self, beta: &RootVec) -> i64 {
        self.mults.get(beta).copied().unwrap_or(0)
    }
}

/// The character formula: the numerator divided by `∏ (1 - x^β)^{m_β}`.
pub fn character(datum: &CartanDatum, lambda: &Weight, n: usize, roots: &RootMultiplicities) -> Result<Character, CharError> {
    let mut series = numerator(datum, lambda, n)?;
    for (beta, m) in roots.roots() {
        if beta.height() > n as i64 {
            continue;
        }
        for _ in 0..m {
            series.divide_one_minus(&beta);
        }
    }
    let mut mults = BTreeMap::new();
    for beta in weights_up_to(datum.rank(), n) {
        let c = series.coeff(&beta);
        let v = c.to_i64().ok_or_else(|| CharError::Overflow(beta.clone()))?;
        if v < 0 {
            return Err(CharError::NegativeCharacter { beta, value: v });
        }
        mults.insert(beta, v);
    }
    Ok(Character { lambda: lambda.clone(), cutoff: n, mults })
}

/// Convenience wrapper computing root multiplicities first.
pub fn character_of(datum: &CartanDatum, lambda: &Weight, n: usize) -> Result<Character, CharError> {
    let roots = root_multiplicities(datum, n)?;
    character(datum, lambda, n, &roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank1(a: i64) -> CartanDatum {
        CartanDatum::from_matrix(vec![vec![a]], vec![1]).unwrap()
    }

    /// Coefficients of `∏_{k=1}^{n} (1 - q^k)` by brute force over subsets.
    fn phi_brute(n: usize) -> i64 {
        let mut total = 0;
        for mask in 0u32..(1 << n) {
            let sum: usize = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| k + 1).sum();
            if sum == n {
                total += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            }
        }
        total
    }

    #[test]
    fn pentagonal() {
        assert_eq!(pentagonal_phi(0), 1);
        assert_eq!(pentagonal_phi(1), -1);
        assert_eq!(pentagonal_phi(2), -1);
        assert_eq!(pentagonal_phi(5), 1);
        assert_eq!(pentagonal_phi(6), 0);
        for n in 0..=16 {
            assert_eq!(pentagonal_phi(n), phi_brute(n));
        }
        for n in 0..=20 {
            assert!((-1..=1).contains(&pentagonal_phi(n)));
        }
    }

    #[test]
    fn rank_one_corrections() {
        let real = rank1(2);
        let f = enumerate_f(&real, &Weight::zero(1), 5).unwrap();
        assert_eq!(f, vec![Correction { s: RootVec(vec![0]), sign: 1 }]);
        let iso = rank1(0);
        let f = enumerate_f(&iso, &Weight::zero(1), 6).unwrap();
        let signs: Vec<i64> = (0..=6).map(pentagonal_phi).collect();
        let got: Vec<i64> = (0..=6).map(|l| f.iter().find(|c| c.s.0[0] == l).map(|c| c.sign).unwrap_or(0)).collect();
        assert_eq!(got, signs);
        let im = rank1(-2);
        let f = enumerate_f(&im, &Weight::zero(1), 4).unwrap();
        assert_eq!(f.iter().map(|c| c.sign).collect::<Vec<_>>(), vec![1, -1, -1, -1, -1]);
        let lam = im.fundamental(0);
        assert_eq!(enumerate_f(&im, &lam, 4).unwrap().len(), 1);
    }

    #[test]
    fn orthogonality_excludes_pairs() {
        let d = CartanDatum::from_matrix(vec![vec![0, -1], vec![-1, 0]], vec![1, 1]).unwrap();
        let f = enumerate_f(&d, &Weight::zero(2), 3).unwrap();
        assert!(f.iter().all(|c| c.s.0[0] == 0 || c.s.0[1] == 0));
        let d = CartanDatum::from_matrix(vec![vec![0, 0], vec![0, -2]], vec![1, 1]).unwrap();
        let f = enumerate_f(&d, &Weight::zero(2), 3).unwrap();
        assert!(f.iter().any(|c| c.s == RootVec(vec![1, 1]) && c.sign == 1));
    }

    #[test]
    fn rank_one_root_multiplicities() {
        let iso = root_multiplicities(&rank1(0), 8).unwrap();
        assert!((1..=8).all(|l| iso.get(&RootVec(vec![l])) == 1));
        let im = root_multiplicities(&rank1(-2), 5).unwrap();
        let got: Vec<i64> = (1..=5).map(|l| im.get(&RootVec(vec![l]))).collect();
        assert_eq!(got, vec![1, 1, 2, 3, 6]);
        let real = root_multiplicities(&rank1(2), 5).unwrap();
        assert_eq!(real.roots(), vec![(RootVec(vec![1]), 1)]);
    }

    #[test]
    fn sl3_roots() {
        let d = CartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 2]], vec![1, 1]).unwrap();
        let r = root_multiplicities(&d, 6).unwrap();
        assert_eq!(r.roots(), vec![(RootVec(vec![0, 1]), 1), (RootVec(vec![1, 0]), 1), (RootVec(vec![1, 1]), 1)]);
    }

    #[test]
    fn sl2_character() {
        let d = rank1(2);
        let ch = character_of(&d, &d.weight_from_fundamental(&[2]).unwrap(), 4).unwrap();
        let got: Vec<i64> = (0..=4).map(|l| ch.get(&RootVec(vec![l]))).collect();
        assert_eq!(got, vec![1, 1, 1, 0, 0]);
    }

    #[test]
    fn imaginary_verma_character() {
        let d = rank1(-2);
        let ch = character_of(&d, &d.fundamental(0), 6).unwrap();
        for l in 1..=6 {
            assert_eq!(ch.get(&RootVec(vec![l])), 1 << (l - 1));
        }
    }

    #[test]
    fn depends_only_on_pairings() {
        let d = CartanDatum::from_matrix(vec![vec![2, -1], vec![-1, 0]], vec![1, 1]).unwrap();
        let a = Weight { h: vec![1, 1], d: vec![0, 0] };
        let b = Weight { h: vec![1, 1], d: vec![3, -2] };
        assert_eq!(character_of(&d, &a, 4).unwrap().mults, character_of(&d, &b, 4).unwrap().mults);
    }
}
