//! Hermite polynomials for the standard normal weight, basis conversion,
//! and the polynomial identities they satisfy (value at zero, squared norms,
//! the multiplication formula for sums of variables).
//!
//! The `H_l` here are the monic ("probabilists'") Hermite polynomials:
//! `H_0 = 1`, `H_1 = x`, `H_{l+1} = x H_l - l H_{l-1}`, orthogonal with
//! `∫ H_l H_m dγ = δ_{lm} l!`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{self, factorial, float, ComplexScalar, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermiteError {
    #[error(
        "multiplication weights for degree {l} over {n} variables are irrational \
         (odd degree with non-square variable count)"
    )]
    IrrationalWeights { l: usize, n: usize },
}

/// The monic Hermite polynomial of degree `l`.
pub fn hermite_polynomial(l: usize) -> Polynomial {
    hermite_table(l).pop().unwrap()
}

/// `H_0 ..= H_max` in one pass of the recursion.
pub fn hermite_table(max: usize) -> Vec<Polynomial> {
    let mut table = Vec::with_capacity(max + 1);
    table.push(Polynomial::one());
    if max == 0 {
        return table;
    }
    table.push(Polynomial::x());
    for l in 1..max {
        let next = &(&Polynomial::x() * &table[l])
            - &table[l - 1].scale(&ComplexScalar::from_int(l as i64));
        table.push(next);
    }
    table
}

/// `H_l(0)` in closed form: zero for odd `l`, `(-1)^{l/2} l! / ((l/2)! 2^{l/2})`
/// for even `l`.
pub fn hermite_at_zero(l: usize) -> Rational {
    if l % 2 == 1 {
        return Rational::zero();
    }
    let h = l / 2;
    let num = factorial(l);
    let den = factorial(h) * num_bigint::BigInt::from(2u32).pow(h as u32);
    let v = Rational::new(num, den);
    if h % 2 == 0 {
        v
    } else {
        -v
    }
}

/// `∫ |H_l|^2 dγ = l!`.
pub fn hermite_norm_sq(l: usize) -> Rational {
    Rational::from_integer(factorial(l))
}

/// Expansion of a polynomial in the Hermite basis: `coeffs[l]` multiplies `H_l`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HermiteExpansion {
    coeffs: Vec<ComplexScalar>,
}

impl HermiteExpansion {
    pub fn new(mut coeffs: Vec<ComplexScalar>) -> Self {
        while coeffs.last().is_some_and(ComplexScalar::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> ComplexScalar {
        self.coeffs.get(l).cloned().unwrap_or_else(ComplexScalar::zero)
    }

    /// Degree of the represented polynomial (largest index with a nonzero
    /// coefficient), `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// Exact change of basis, monomials -> Hermite, by descending-degree
/// elimination against the monic `H_l`.
pub fn to_hermite(p: &Polynomial) -> HermiteExpansion {
    let Some(deg) = p.degree() else {
        return HermiteExpansion::default();
    };
    let table = hermite_table(deg);
    let mut rem = p.clone();
    let mut coeffs = vec![ComplexScalar::zero(); deg + 1];
    for d in (0..=deg).rev() {
        let c = rem.coeff(d);
        if !c.is_zero() {
            rem = &rem - &table[d].scale(&c);
            coeffs[d] = c;
        }
    }
    debug_assert!(rem.is_zero());
    HermiteExpansion::new(coeffs)
}

/// Exact change of basis, Hermite -> monomials.
pub fn from_hermite(e: &HermiteExpansion) -> Polynomial {
    let Some(deg) = e.degree() else {
        return Polynomial::zero();
    };
    let table = hermite_table(deg);
    let mut acc = Polynomial::zero();
    for (l, c) in e.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &table[l].scale(c);
        }
    }
    acc
}

/// Float mirror of [`to_hermite`].
pub fn to_hermite_f64(p: &[Complex64]) -> Vec<Complex64> {
    if p.is_empty() {
        return Vec::new();
    }
    let deg = p.len() - 1;
    let table: Vec<Vec<Complex64>> =
        hermite_table(deg).iter().map(Polynomial::to_c64).collect();
    let mut rem = p.to_vec();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for d in (0..=deg).rev() {
        let c = rem.get(d).copied().unwrap_or_default();
        if c.re != 0.0 || c.im != 0.0 {
            rem = float::add(&rem, &float::scale(&table[d], -c));
            rem.truncate(d);
            coeffs[d] = c;
        }
    }
    float::trim(coeffs)
}

/// Float mirror of [`from_hermite`].
pub fn from_hermite_f64(e: &[Complex64]) -> Vec<Complex64> {
    if e.is_empty() {
        return Vec::new();
    }
    let table: Vec<Vec<Complex64>> =
        hermite_table(e.len() - 1).iter().map(Polynomial::to_c64).collect();
    let mut acc = Vec::new();
    for (l, c) in e.iter().enumerate() {
        acc = float::add(&acc, &float::scale(&table[l], *c));
    }
    acc
}

/// All weak compositions of `total` into `parts` nonnegative summands,
/// lexicographic order.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    fn rec(cur: &mut Vec<usize>, idx: usize, rem: usize, out: &mut Vec<Vec<usize>>) {
        if idx + 1 == cur.len() {
            cur[idx] = rem;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rem {
            cur[idx] = v;
            rec(cur, idx + 1, rem - v, out);
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut cur, 0, total, &mut out);
    out
}

/// Multinomial weights of the multiplication formula
/// `H_l(x_1+..+x_n) = Σ w(l_1..l_n) Π H_{l_i}(√n x_i)` with
/// `w = l! / (n^{l/2} Π l_i!)`.
///
/// Exact whenever `n^{l/2}` is rational, i.e. `l` even or `n` a perfect
/// square; otherwise the weights are irrational and an error is returned
/// (use [`verify_multiplication_formula_f64`] for those cases).
pub fn multiplication_weights(
    l: usize,
    n: usize,
) -> Result<BTreeMap<Vec<usize>, Rational>, HermiteError> {
    assert!(n >= 1, "need at least one variable");
    let n_pow = if l % 2 == 0 {
        Rational::from_integer(num_bigint::BigInt::from(n).pow((l / 2) as u32))
    } else {
        let s = algebra::sqrt_exact(&Rational::from_integer(n.into()))
            .ok_or(HermiteError::IrrationalWeights { l, n })?;
        Rational::from_integer(num_bigint::BigInt::from(n).pow((l / 2) as u32)) * s
    };
    let l_fact = Rational::from_integer(factorial(l));
    let mut out = BTreeMap::new();
    for comp in weak_compositions(l, n) {
        let denom: Rational = comp
            .iter()
            .map(|&li| Rational::from_integer(factorial(li)))
            .product();
        out.insert(comp, &l_fact / (&n_pow * denom));
    }
    Ok(out)
}

/// Sparse exact polynomial in `n` variables: exponent vector -> coefficient.
type MultiPoly = BTreeMap<Vec<usize>, Rational>;

fn multi_add_term(poly: &mut MultiPoly, exps: Vec<usize>, c: Rational) {
    *poly.entry(exps).or_insert_with(Rational::zero) += c;
}

/// Expansion of `H_l(x_1 + ... + x_n)` in monomials.
fn lhs_expansion(l: usize, n: usize) -> MultiPoly {
    let h = hermite_polynomial(l);
    let mut out = MultiPoly::new();
    for (k, hk) in h.coeffs().iter().enumerate() {
        if hk.is_zero() {
            continue;
        }
        let k_fact = factorial(k);
        for comp in weak_compositions(k, n) {
            let multinom: num_bigint::BigInt = {
                let denom: num_bigint::BigInt =
                    comp.iter().map(|&j| factorial(j)).product();
                &k_fact / denom
            };
            let c = hk.re.clone() * Rational::from_integer(multinom);
            multi_add_term(&mut out, comp, c);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Expansion of `Σ w(comp) Π H_{l_i}(s x_i)` in monomials, `s` rational.
fn rhs_expansion(l: usize, n: usize, s: &Rational) -> Result<MultiPoly, HermiteError> {
    let weights = multiplication_weights(l, n)?;
    let table = hermite_table(l);
    let scaled: Vec<Polynomial> = table
        .iter()
        .map(|h| h.scale_arg(&ComplexScalar::from_rational(s.clone())))
        .collect();
    let mut out = MultiPoly::new();
    for (comp, w) in &weights {
        // tensor product over coordinates, one univariate factor each
        let mut partial: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), w.clone())];
        for &li in comp {
            let factor = &scaled[li];
            let mut next = Vec::new();
            for (exps, c) in &partial {
                for (d, fc) in factor.coeffs().iter().enumerate() {
                    if fc.is_zero() {
                        continue;
                    }
                    let mut e = exps.clone();
                    e.push(d);
                    next.push((e, c * &fc.re));
                }
            }
            partial = next;
        }
        for (exps, c) in partial {
            multi_add_term(&mut out, exps, c);
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Exact check of the multiplication formula: expands both sides of
/// `H_l(x_1+..+x_n)/l! = n^{-l/2} Σ Π H_{l_i}(√n x_i)/l_i!` in monomials
/// of `(x_1,..,x_n)` and compares coefficients. Requires `√n` rational.
pub fn verify_multiplication_formula_exact(l: usize, n: usize) -> Result<bool, HermiteError> {
    let s = algebra::sqrt_exact(&Rational::from_integer(n.into()))
        .ok_or(HermiteError::IrrationalWeights { l, n })?;
    Ok(lhs_expansion(l, n) == rhs_expansion(l, n, &s)?)
}

/// Float check of the multiplication formula for arbitrary `n`: returns the
/// maximum absolute coefficient deviation between the two expansions.
pub fn verify_multiplication_formula_f64(l: usize, n: usize) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let h = hermite_polynomial(l);
    let mut lhs: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (k, hk) in h.coeffs().iter().enumerate() {
        if hk.is_zero() {
            continue;
        }
        let hk = hk.to_c64().re;
        let k_fact = factorial(k).to_f64().unwrap();
        for comp in weak_compositions(k, n) {
            let denom: f64 = comp.iter().map(|&j| factorial(j).to_f64().unwrap()).product();
            *lhs.entry(comp).or_insert(0.0) += hk * k_fact / denom;
        }
    }
    let table = hermite_table(l);
    let scaled: Vec<Vec<Complex64>> = table
        .iter()
        .map(|hp| float::scale_arg(&hp.to_c64(), Complex64::new(sqrt_n, 0.0)))
        .collect();
    let l_fact = factorial(l).to_f64().unwrap();
    let n_pow = sqrt_n.powi(l as i32);
    let mut rhs: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for comp in weak_compositions(l, n) {
        let w = l_fact
            / (n_pow
                * comp
                    .iter()
                    .map(|&li| factorial(li).to_f64().unwrap())
                    .product::<f64>());
        let mut partial: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), w)];
        for &li in &comp {
            let mut next = Vec::new();
            for (exps, c) in &partial {
                for (d, fc) in scaled[li].iter().enumerate() {
                    if fc.re == 0.0 {
                        continue;
                    }
                    let mut e = exps.clone();
                    e.push(d);
                    next.push((e, c * fc.re));
                }
            }
            partial = next;
        }
        for (exps, c) in partial {
            *rhs.entry(exps).or_insert(0.0) += c;
        }
    }
    let mut max_dev: f64 = 0.0;
    let keys: std::collections::BTreeSet<_> = lhs.keys().chain(rhs.keys()).cloned().collect();
    for k in keys {
        let a = lhs.get(&k).copied().unwrap_or(0.0);
        let b = rhs.get(&k).copied().unwrap_or(0.0);
        max_dev = max_dev.max((a - b).abs());
    }
    max_dev
}
