//! Dense univariate polynomials in `q` with arbitrary-precision integer
//! coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial stored little-endian (`coeffs[k]` is the coefficient of `q^k`)
/// with no trailing zeros, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * q^deg`.
    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Largest `k` with `q^k` dividing `self` (0 for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divides by `q^k`; the caller guarantees `k <= valuation()`.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.is_zero() || k <= self.valuation());
        if k == 0 {
            return self.clone();
        }
        Poly { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        }
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.lead().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        if c.is_one() {
            self.clone()
        } else {
            self.div_scalar_exact(&c)
        }
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("pseudo-remainder by zero");
        let mut r = self.clone();
        let ld = d.lead().unwrap().clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.lead().unwrap().clone();
            let shift = dr - dd;
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &ld).collect();
            for (k, dc) in d.coeffs.iter().enumerate() {
                coeffs[k + shift] -= &lr * dc;
            }
            r = Poly::from_coeffs(coeffs);
        }
        r
    }

    /// Exact quotient `self / d` in `Z[q]`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let ds = self.degree().unwrap();
        if ds < dd {
            return None;
        }
        if dd == 0 {
            let c = &d.coeffs[0];
            if self.coeffs.iter().any(|a| !(a % c).is_zero()) {
                return None;
            }
            return Some(self.div_scalar_exact(c));
        }
        let ld = d.lead().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(ld);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &qk * dc;
            }
            quot[k] = qk;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::from_coeffs(quot))
    }

    /// Greatest common divisor in `Z[q]`, normalised to a positive leading
    /// coefficient. Primitive polynomial remainder sequence.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        if self.is_constant() || other.is_constant() {
            return Poly::constant(c);
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn add_impl(&self, other: &Poly, sign: bool) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = other.coeffs.get(k);
            let c = match (a, b) {
                (Some(a), Some(b)) => {
                    if sign {
                        a + b
                    } else {
                        a - b
                    }
                }
                (Some(a), None) => a.clone(),
                (None, Some(b)) => {
                    if sign {
                        b.clone()
                    } else {
                        -b
                    }
                }
                (None, None) => unreachable!(),
            };
            coeffs.push(c);
        }
        Poly::from_coeffs(coeffs)
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Sign-and-magnitude ordering used only to make canonical forms
    /// deterministic when sorting.
    pub fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Writes the polynomial with exponents offset by `shift`, highest
    /// power first (`2*q^3 - q + 1`, `q^-1`).
    pub(crate) fn fmt_laurent(&self, f: &mut fmt::Formatter<'_>, shift: i64) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = k as i64 + shift;
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_laurent(f, 0)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, true)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, false)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}
