use super::{QError, RationalFunction};

/// Balanced q-integer `[n]_i = (q_i^n - q_i^-n) / (q_i - q_i^-1)` with
/// `q_i = q^s`, expanded as `q_i^(n-1) + q_i^(n-3) + ... + q_i^(1-n)`.
pub fn q_integer(n: u32, s: u32) -> RationalFunction {
    if n == 0 {
        return RationalFunction::zero();
    }
    let step = 2 * s as usize;
    let low = -((n as i64 - 1) * s as i64);
    let mut coeffs = vec![0i64; (n as usize - 1) * step + 1];
    for k in 0..n as usize {
        coeffs[k * step] = 1;
    }
    RationalFunction::laurent(low, &coeffs)
}

/// `[n]_i! = [n]_i [n-1]_i ... [1]_i`.
pub fn q_factorial(n: u32, s: u32) -> RationalFunction {
    (1..=n).fold(RationalFunction::one(), |acc, k| acc * q_integer(k, s))
}

/// `[n choose k]_i = [n]_i! / ([k]_i! [n-k]_i!)`.
pub fn q_binomial(n: u32, k: u32, s: u32) -> Result<RationalFunction, QError> {
    if k > n {
        return Err(QError::BinomialDomain { n, k });
    }
    let num = q_factorial(n, s);
    let den = q_factorial(k, s) * q_factorial(n - k, s);
    num.checked_div(&den)
}
