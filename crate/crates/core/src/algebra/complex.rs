use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, rat_int, rational_to_f64, sqrt_exact, AlgebraError, Rational};

/// Exact complex number with rational real and imaginary parts.
///
/// Field operations are closed; inversion of zero is reported through
/// [`ComplexScalar::inv`] as an error rather than producing any NaN-like
/// value (the `/` operator panics on a zero divisor, like integer division).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexScalar {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// `n/d` as a real scalar.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(super::rat(n, d))
    }

    /// `(a/b) + (c/d) i`.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(super::rat(a, b), super::rat(c, d))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.inv()?)
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    /// Exact square root in `Q(i)`, if one exists; the principal root
    /// (positive real part, or zero real part with nonnegative imaginary
    /// part) is returned.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return sqrt_exact(&self.re).map(Self::from_rational);
            }
            let s = sqrt_exact(&(-self.re.clone()))?;
            return Some(Self::new(Rational::zero(), s));
        }
        // w = c + d i with c^2 - d^2 = re, 2cd = im: then c^2 = (re + |z|)/2.
        let norm = sqrt_exact(&self.norm_sqr())?;
        let c_sq = (&self.re + &norm) / rat_int(2);
        let c = sqrt_exact(&c_sq)?;
        if c.is_zero() {
            return None; // im != 0 requires c != 0
        }
        let d = &self.im / (rat_int(2) * &c);
        let root = Self::new(c, d);
        Some(if root.re.is_negative() { -&root } else { root })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<ComplexScalar> for ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: ComplexScalar) -> ComplexScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexScalar> for ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: &ComplexScalar) -> ComplexScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ComplexScalar> for &ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: ComplexScalar) -> ComplexScalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn add(self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}
forward_binop!(Add, add);

impl Sub<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn sub(self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}
forward_binop!(Sub, sub);

impl Mul<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn mul(self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}
forward_binop!(Mul, mul);

impl Div<&ComplexScalar> for &ComplexScalar {
    type Output = ComplexScalar;
    fn div(self, rhs: &ComplexScalar) -> ComplexScalar {
        self.try_div(rhs).expect("complex division by zero")
    }
}
forward_binop!(Div, div);

impl Neg for &ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        ComplexScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        -&self
    }
}

impl From<Rational> for ComplexScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for ComplexScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag_part(im: &Rational) -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{im}i")
            }
        }
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}", imag_part(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}{}", self.re, imag_part(&self.im))
        } else {
            write!(f, "{}+{}", self.re, imag_part(&self.im))
        }
    }
}

impl FromStr for ComplexScalar {
    type Err = AlgebraError;

    /// Accepts `"p/q"`, `"p/q i"` forms without spaces (`"2/3i"`, `"-i"`,
    /// `"i"`) and combined `"a+bi"` / `"a-bi"` literals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(AlgebraError::Parse(s.to_string()));
        }
        let parse_imag = |u: &str| -> Result<Rational, AlgebraError> {
            match u {
                "" | "+" => Ok(Rational::one()),
                "-" => Ok(-Rational::one()),
                _ => parse_rational(u),
            }
        };
        if let Some(body) = t.strip_suffix('i') {
            // Find a '+'/'-' separating real and imaginary parts (not the
            // leading sign of the real part).
            let split = body
                .char_indices()
                .skip(1)
                .find(|&(_, c)| c == '+' || c == '-')
                .map(|(idx, _)| idx);
            return match split {
                Some(idx) => {
                    let re = parse_rational(&body[..idx])?;
                    let im = parse_imag(&body[idx..])?;
                    Ok(Self::new(re, im))
                }
                None => Ok(Self::new(Rational::zero(), parse_imag(body)?)),
            };
        }
        Ok(Self::from_rational(parse_rational(&t)?))
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexParts {
    re: String,
    im: String,
}

impl Serialize for ComplexScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ComplexParts { re: self.re.to_string(), im: self.im.to_string() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Parts(ComplexParts),
            Literal(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Parts(p) => {
                let re = parse_rational(&p.re).map_err(D::Error::custom)?;
                let im = parse_rational(&p.im).map_err(D::Error::custom)?;
                Ok(Self::new(re, im))
            }
            Repr::Literal(s) => s.parse().map_err(D::Error::custom),
        }
    }
}
