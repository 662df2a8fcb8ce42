use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraError, ComplexScalar};

/// A complex value that is either exact (rational parts) or floating point.
///
/// Arithmetic between two exact values stays exact; as soon as one operand
/// is a float the result is a float. The demotion is part of the operation's
/// contract — callers that need to preserve exactness check [`Scalar::is_exact`]
/// or destructure via [`Scalar::as_exact`] first.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(ComplexScalar),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(ComplexScalar::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(ComplexScalar::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(ComplexScalar::from_int(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn as_exact(&self) -> Option<&ComplexScalar> {
        match self {
            Scalar::Exact(z) => Some(z),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => z.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn powu(&self, e: u32) -> Self {
        match self {
            Scalar::Exact(z) => Scalar::Exact(z.powu(e)),
            Scalar::Float(z) => Scalar::Float(z.powi(e as i32)),
        }
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.try_div(b)?)),
            _ => {
                let b = rhs.to_c64();
                if b.re == 0.0 && b.im == 0.0 {
                    return Err(AlgebraError::DivisionByZero);
                }
                Ok(Scalar::Float(self.to_c64() / b))
            }
        }
    }

    /// Square root: exact when a rational-complex root exists, otherwise the
    /// principal float root.
    pub fn sqrt(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => match z.sqrt_exact() {
                Some(r) => Scalar::Exact(r),
                None => Scalar::Float(z.to_c64().sqrt()),
            },
            Scalar::Float(z) => Scalar::Float(z.sqrt()),
        }
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_c64() + rhs.to_c64()),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Float(self.to_c64() - rhs.to_c64()),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_c64() * rhs.to_c64()),
        }
    }
}

macro_rules! forward_scalar_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}
forward_scalar_binop!(Add, add);
forward_scalar_binop!(Sub, sub);
forward_scalar_binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(-z),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<ComplexScalar> for Scalar {
    fn from(z: ComplexScalar) -> Self {
        Scalar::Exact(z)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Float(z)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => write!(f, "{z}"),
            Scalar::Float(z) => write!(f, "{z}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            // Exact values serialize with rational strings, floats with
            // JSON numbers; the two shapes are distinguishable on read.
            Scalar::Exact(z) => z.serialize(serializer),
            Scalar::Float(z) => {
                let mut s = serializer.serialize_struct("Scalar", 2)?;
                s.serialize_field("re", &z.re)?;
                s.serialize_field("im", &z.im)?;
                s.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Exact(ComplexScalar),
            Float { re: f64, im: f64 },
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Exact(z) => Scalar::Exact(z),
            Repr::Float { re, im } => Scalar::Float(Complex64::new(re, im)),
        })
    }
}
