use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::poly::Poly;
use super::QError;

/// An element of `Q(q)`, kept in a canonical form:
///
/// value = `q^val * num / den`, where `num` and `den` both have a nonzero
/// constant term, share no common factor in `Z[q]` (content included) and
/// `den` has a positive leading coefficient. Zero is `0 / 1` with `val = 0`.
///
/// Factoring the power of `q` out keeps Laurent polynomials, which dominate
/// in practice, on a gcd-free path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
    val: i64,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one(), val: 0 }
    }

    pub fn one() -> Self {
        Self::q_pow(0)
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        RationalFunction { num: Poly::one(), den: Poly::one(), val: e }
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: Poly::constant(c), den: Poly::one(), val: 0 }
    }

    /// `c * q^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        Self::from_int(c) * Self::q_pow(e)
    }

    /// Laurent polynomial `sum_k c_k q^(low + k)`.
    pub fn laurent(low: i64, coeffs: &[i64]) -> Self {
        Self::from_parts(Poly::from_i64s(coeffs), Poly::one(), low)
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_parts(p, Poly::one(), 0)
    }

    /// `num / den` for arbitrary polynomials.
    pub fn from_polys(num: Poly, den: Poly) -> Result<Self, QError> {
        if den.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Self::from_parts(num, den, 0))
    }

    /// Normalises `q^val * num / den` into canonical form.
    fn from_parts(num: Poly, den: Poly, val: i64) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let val = val + vn as i64 - vd as i64;
        if !den.is_one() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
            if den.lead().is_some_and(|l| l.is_negative()) {
                num = -&num;
                den = -&den;
            }
        }
        RationalFunction { num, den, val }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.val == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is a power of `q` (a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Numerator polynomial of the reduced fraction in `Z[q]`.
    pub fn numerator(&self) -> Poly {
        if self.val > 0 {
            self.num.shift_up(self.val as usize)
        } else {
            self.num.clone()
        }
    }

    /// Denominator polynomial of the reduced fraction in `Z[q]`.
    pub fn denominator(&self) -> Poly {
        if self.val < 0 {
            self.den.shift_up((-self.val) as usize)
        } else {
            self.den.clone()
        }
    }

    /// Returns the integer if this is a constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        (self.val == 0 && self.num.is_constant() && self.den.is_one()).then(|| self.num.coeff(0))
    }

    /// Laurent coefficients `(lowest exponent, coefficients)` when the value
    /// is a Laurent polynomial.
    pub fn laurent_coeffs(&self) -> Option<(i64, Vec<BigInt>)> {
        self.is_laurent().then(|| (self.val, self.num.coeffs().to_vec()))
    }

    pub fn inv(&self) -> Result<Self, QError> {
        if self.is_zero() {
            return Err(QError::DivisionByZero);
        }
        let mut num = self.den.clone();
        let mut den = self.num.clone();
        if den.lead().is_some_and(|l| l.is_negative()) {
            num = -&num;
            den = -&den;
        }
        Ok(RationalFunction { num, den, val: -self.val })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, QError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, QError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Image under `q -> q^-1`.
    pub fn bar(&self) -> Self {
        let rev = |p: &Poly| {
            let mut c = p.coeffs().to_vec();
            c.reverse();
            Poly::from_coeffs(c)
        };
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        Self::from_parts(rev(&self.num), rev(&self.den), -self.val - dn + dd)
    }

    /// Evaluates at an integer point where the denominator does not vanish,
    /// returning numerator and denominator integers (used by sampling tests).
    pub fn eval_at(&self, x: i64) -> Option<num_rational::BigRational> {
        let xb = BigInt::from(x);
        let d = self.den.eval(&xb);
        if d.is_zero() || (x == 0 && self.val < 0) {
            return None;
        }
        let n = self.num.eval(&xb);
        let r = num_rational::BigRational::new(n, d);
        let p = num_rational::BigRational::from_integer(xb);
        Some(if self.val >= 0 { r * num_traits::Pow::pow(p, self.val as u32) } else { r / num_traits::Pow::pow(p, (-self.val) as u32) })
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        let rnum = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.is_zero() {
            return RationalFunction { num: rnum, den: rhs.den.clone(), val: rhs.val };
        }
        let v = self.val.min(rhs.val);
        let a = self.num.shift_up((self.val - v) as usize);
        let b = rnum.shift_up((rhs.val - v) as usize);
        if self.den == rhs.den {
            Self::from_parts(&a + &b, self.den.clone(), v)
        } else {
            let n = &(&a * &rhs.den) + &(&b * &self.den);
            Self::from_parts(n, &self.den * &rhs.den, v)
        }
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let val = self.val + rhs.val;
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction { num: &self.num * &rhs.num, den: Poly::one(), val };
        }
        // cross-cancel; inputs are already reduced
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let mut out = RationalFunction { num, den, val };
        if out.den.lead().is_some_and(|l| l.is_negative()) {
            out.num = -&out.num;
            out.den = -&out.den;
        }
        out
    }
}

fn cancel(n: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_one() {
        return (n.clone(), d.clone());
    }
    let g = n.gcd(d);
    if g.is_one() {
        (n.clone(), d.clone())
    } else {
        (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(rhs, true)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.mul_impl(rhs)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::checked_div`]
    /// where the divisor is not known to be nonzero.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero in Q(q)")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone(), val: self.val }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl AddAssign<&RationalFunction> for RationalFunction {
    fn add_assign(&mut self, rhs: &RationalFunction) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RationalFunction> for RationalFunction {
    fn sub_assign(&mut self, rhs: &RationalFunction) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&RationalFunction> for RationalFunction {
    fn mul_assign(&mut self, rhs: &RationalFunction) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let multi = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
        if self.den.is_one() {
            return self.num.fmt_laurent(f, self.val);
        }
        if multi {
            write!(f, "(")?;
            self.num.fmt_laurent(f, self.val)?;
            write!(f, ")")?;
        } else {
            self.num.fmt_laurent(f, self.val)?;
        }
        write!(f, "/(")?;
        self.den.fmt_laurent(f, 0)?;
        write!(f, ")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl num_traits::Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
}

impl num_traits::One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::from_polys(Poly::from_i64s(n), Poly::from_i64s(d)).unwrap()
    }

    #[test]
    fn canonical_sign_and_gcd() {
        // (q^2 - 1) / (-(q - 1)) = -(q + 1)
        let x = rf(&[-1, 0, 1], &[1, -1]);
        assert_eq!(x, RationalFunction::laurent(0, &[-1, -1]));
        assert!(x.is_laurent());
    }

    #[test]
    fn q_powers_factor_out() {
        let x = rf(&[0, 0, 3], &[0, 1, 1]);
        assert_eq!(x.numerator(), Poly::from_i64s(&[0, 3]));
        assert_eq!(x.denominator(), Poly::from_i64s(&[1, 1]));
    }

    #[test]
    fn inverse_of_zero_is_error() {
        assert!(matches!(RationalFunction::zero().inv(), Err(QError::DivisionByZero)));
    }

    #[test]
    fn bar_swaps_q() {
        let x = rf(&[1, 2], &[1, 0, -1]);
        let expected = rf(&[0, 2, 1], &[-1, 0, 1]);
        assert_eq!(x.bar(), expected);
        assert_eq!(x.bar().bar(), x);
    }

    #[test]
    fn display_round_shapes() {
        assert_eq!(RationalFunction::laurent(-1, &[1, 0, 1]).to_string(), "q + q^-1");
        assert_eq!(rf(&[1], &[1, 0, -1]).to_string(), "-1/(q^2 - 1)");
    }
}
