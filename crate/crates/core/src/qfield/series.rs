use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Poly, QError, RationalFunction};

/// Power series in `q` known through `q^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Expands `f` around `q = 0` through `q^order`. The reduced denominator
    /// must have a nonzero constant term.
    pub fn expand(f: &RationalFunction, order: usize) -> Result<Self, QError> {
        let num = f.numerator();
        let den = f.denominator();
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(QError::NotExpandable(f.to_string()));
        }
        let d0 = BigRational::from_integer(d0);
        let mut coeffs: Vec<BigRational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = BigRational::from_integer(num.coeff(k));
            for j in 1..=k {
                let dj = den.coeff(j);
                if !dj.is_zero() {
                    acc -= BigRational::from_integer(dj) * &coeffs[k - j];
                }
            }
            coeffs.push(acc / &d0);
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Multiplies back by `den` and returns the result truncated at the
    /// series order; equals the numerator's low coefficients when the
    /// expansion is correct.
    pub fn resum_against(&self, den: &Poly) -> Vec<BigRational> {
        (0..=self.order())
            .map(|k| (0..=k).fold(BigRational::zero(), |acc, j| acc + BigRational::from_integer(den.coeff(j)) * &self.coeffs[k - j]))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

/// Checks `tau` lies in `1 + q Z_{>=0}[[q]]` through `q^order`.
pub fn check_tau_assumption(tau: &RationalFunction, order: usize) -> Result<bool, QError> {
    let s = TruncatedSeries::expand(tau, order)?;
    let mut it = s.coeffs.iter();
    if it.next() != Some(&BigRational::one()) {
        return Ok(false);
    }
    Ok(it.all(|c| c.is_integer() && !c.is_negative()))
}

#[allow(dead_code)]
fn big(c: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(c))
}
