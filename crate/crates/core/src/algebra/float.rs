//! Float-complex mirrors of the exact polynomial operations.
//!
//! A float polynomial is a plain `Vec<Complex64>` with the same
//! lowest-degree-first layout as [`super::Polynomial`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Float complex number with named parts, the JSON face of every float
/// complex value in reports (`{"re": .., "im": ..}`, matching the shape of
/// exact scalars).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C64Parts {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C64Parts {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<C64Parts> for Complex64 {
    fn from(p: C64Parts) -> Self {
        Complex64::new(p.re, p.im)
    }
}

pub fn trim(mut coeffs: Vec<Complex64>) -> Vec<Complex64> {
    while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
        coeffs.pop();
    }
    coeffs
}

/// Horner evaluation.
pub fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

pub fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
    trim((0..n).map(|k| get(a, k) + get(b, k)).collect())
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn scale(a: &[Complex64], c: Complex64) -> Vec<Complex64> {
    trim(a.iter().map(|x| x * c).collect())
}

/// Coefficient `k` multiplied by `lambda^k`.
pub fn scale_arg(a: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    let mut pow = Complex64::new(1.0, 0.0);
    trim(a
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                pow *= lambda;
            }
            c * pow
        })
        .collect())
}

/// Relative error `|a - b| / max(1, |b|)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
