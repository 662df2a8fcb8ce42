//! Exact scalar and polynomial arithmetic.
//!
//! Everything downstream is built on three layers:
//!
//! * [`Rational`] — arbitrary-precision rationals in canonical reduced form
//!   (backed by `num-rational`, so `2/4` and `1/2` are the same value).
//! * [`ComplexScalar`] — complex numbers with rational real/imaginary parts.
//! * [`Polynomial`] — dense one-variable polynomials over [`ComplexScalar`].
//!
//! Every exact operation has a float-complex mirror ([`Complex64`]-based,
//! see [`float`]) used where parameters are irrational. Conversion between
//! the two paths is always explicit; [`Scalar`] carries the exact-or-float
//! distinction through APIs that accept both.

mod complex;
pub mod float;
mod poly;
mod scalar;

pub use complex::ComplexScalar;
pub use num_complex::Complex64;
pub use poly::Polynomial;
pub use scalar::Scalar;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in reduced form with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational or complex-rational literal")]
    Parse(String),
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lossy conversion to `f64` (correctly rounded for values in range).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| AlgebraError::Parse(s.to_string()))
}

/// Exact square root of a nonnegative rational, if one exists in the rationals.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sn = sqrt_exact_int(r.numer())?;
    let sd = sqrt_exact_int(r.denom())?;
    Some(Rational::new(sn, sd))
}

fn sqrt_exact_int(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Double factorial `n!!` with the empty-product conventions
/// `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    assert!(n >= -1, "double factorial undefined for n < -1");
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial `n(n-1)...(n-s+1)`.
///
/// Returns `1` for `s = 0` (empty product) and `0` whenever `s > n`, since
/// the factor `n - n` then appears in the product.
pub fn falling_factorial(n: u64, s: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..s {
        if i > n {
            return BigInt::zero();
        }
        acc *= BigInt::from(n) - BigInt::from(i);
        if acc.is_zero() {
            return acc;
        }
    }
    acc
}

/// Pre-computed factorials `0! ..= max!`, used by the coefficient formulas
/// that divide by `l_i! m_i!` in inner loops.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    table: Vec<BigInt>,
}

impl FactorialTable {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(BigInt::one());
        for k in 1..=max {
            let next = &table[k - 1] * BigInt::from(k);
            table.push(next);
        }
        Self { table }
    }

    pub fn get(&self, n: usize) -> &BigInt {
        &self.table[n]
    }

    pub fn as_rational(&self, n: usize) -> Rational {
        Rational::from_integer(self.table[n].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form_is_unique() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-3, -6), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert_eq!(rat(1, 2).denom(), rat(2, 4).denom());
    }

    #[test]
    fn rational_string_roundtrip() {
        for s in ["1/2", "-3", "0", "22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, 5), BigInt::zero());
        assert_eq!(falling_factorial(7, 0), BigInt::one());
        assert_eq!(falling_factorial(10_000, 2), BigInt::from(99_990_000u64));
    }

    #[test]
    fn factorial_and_double_factorial() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(10), BigInt::from(3_628_800u64));
        assert_eq!(double_factorial(-1), BigInt::one());
        assert_eq!(double_factorial(0), BigInt::one());
        assert_eq!(double_factorial(5), BigInt::from(15));
        assert_eq!(double_factorial(6), BigInt::from(48));
        let t = FactorialTable::new(20);
        assert_eq!(*t.get(20), factorial(20));
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(4, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn sqrt_exact_detects_squares() {
        assert_eq!(sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        assert_eq!(sqrt_exact(&rat(-1, 1)), None);
        assert_eq!(sqrt_exact(&rat(0, 1)), Some(rat(0, 1)));
    }
}
