use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ComplexScalar, Rational};

/// Dense one-variable polynomial over [`ComplexScalar`], index = monomial
/// degree, trailing zeros trimmed. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<ComplexScalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<ComplexScalar>) -> Self {
        while coeffs.last().is_some_and(ComplexScalar::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ComplexScalar::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, ComplexScalar::one())
    }

    pub fn constant(c: ComplexScalar) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^degree`.
    pub fn monomial(degree: usize, c: ComplexScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![ComplexScalar::zero(); degree + 1];
        coeffs[degree] = c;
        Self { coeffs }
    }

    /// Convenience constructor from integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&n| ComplexScalar::from_int(n)).collect())
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Self::new(coeffs.into_iter().map(ComplexScalar::from_rational).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> ComplexScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ComplexScalar::zero)
    }

    pub fn leading(&self) -> Option<&ComplexScalar> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &ComplexScalar) -> ComplexScalar {
        let mut acc = ComplexScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    /// Returns `q` with `q(x) = p(lambda * x)`: coefficient `k` is multiplied
    /// by `lambda^k`.
    pub fn scale_arg(&self, lambda: &ComplexScalar) -> Self {
        let mut pow = ComplexScalar::one();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    pow = &pow * lambda;
                }
                c * &pow
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &ComplexScalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(ComplexScalar::to_c64).collect()
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Polynomial::new(coeffs)
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs =
            vec![ComplexScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Polynomial::new(coeffs)
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}
forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_real() && c.re < Rational::from_integer(0.into()) {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let unit_coeff = mag.is_one();
            match (k, unit_coeff) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) if mag.is_real() => write!(f, "{mag}")?,
                (_, false) => write!(f, "({mag})")?,
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Self::new(Vec::<ComplexScalar>::deserialize(deserializer)?))
    }
}
