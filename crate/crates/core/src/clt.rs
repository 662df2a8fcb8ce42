//! Finite-`N` tensorized coefficients, their closed-form limits, and the
//! parameter system identifying the centered Gaussian operator.
//!
//! For an operator with K-matrix `K[l][m]` against a standardized measure,
//! the tensorized coefficient is
//!
//! ```text
//! c[l][m](N) = l! m! / N^{(l+m)/2}
//!            * Σ_{[P]} fall(N, S)/Π' P_ij! * K[0][0]^{N-S}
//!                      * Π' (K[i][j] / (i! j!))^{P_ij}
//! ```
//!
//! summed over nonnegative-integer matrices `[P_ij]` (cell `(0,0)` excluded,
//! `S = Σ' P_ij`) with row weight `Σ i P_ij = l` and column weight
//! `Σ j P_ij = m`; under the orthogonality hypothesis `K[0][0] = 1` the
//! middle factor drops out. The matrix set does not depend on `N`. As
//! `N -> ∞` only
//! the cells `(1,1)`, `(2,0)`, `(0,2)` survive, giving the closed-form limit
//! implemented by [`limit_coefficient`]. A composition-sum brute force
//! ([`finite_n_bruteforce`]) serves as the independent oracle for the
//! matrix-form evaluation.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    falling_factorial, rat_int, ComplexScalar, FactorialTable, Rational, Scalar,
};
use crate::operators::{check_hypotheses, KMatrix};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CltError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("K-matrix cutoff {cutoff} too small, need {needed}")]
    CutoffTooSmall { needed: usize, cutoff: usize },
}

// --- centered Gaussian operator parameters ---------------------------------

/// The triple `(tau, omega, lambda)` of a centered Gaussian operator
/// `M_tau T_omega S_lambda`, with `Re tau > -1`.
///
/// Canonical form: `lambda` has positive real part (or zero real part and
/// nonnegative imaginary part); the sign ambiguity `(omega, lambda) ->
/// (-omega, -lambda)` describes the same operator and is normalized away.
/// If `lambda = 0` then `omega` is forced to `0` (every `omega` gives the
/// same operator there).
///
/// `lambda_sq` and `lambda_omega` are stored alongside: they stay exact in
/// the common case where `lambda^2` is exact but `lambda` itself is
/// irrational, and they are all the limit-coefficient formulas need.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianParams {
    tau: Scalar,
    omega: Scalar,
    lambda: Scalar,
    lambda_sq: Scalar,
    lambda_omega: Scalar,
}

fn canonical_sign_ok_exact(z: &ComplexScalar) -> bool {
    z.re.is_positive() || (z.re.is_zero() && !z.im.is_negative())
}

fn canonical_sign_ok_f64(z: Complex64) -> bool {
    z.re > 0.0 || (z.re == 0.0 && z.im >= 0.0)
}

impl GaussianParams {
    /// Builds (and canonicalizes) a parameter triple. Fails unless
    /// `Re tau > -1`.
    pub fn new(tau: Scalar, omega: Scalar, lambda: Scalar) -> Result<Self, CltError> {
        let re_ok = match &tau {
            Scalar::Exact(t) => t.re > rat_int(-1),
            Scalar::Float(t) => t.re > -1.0,
        };
        if !re_ok {
            return Err(CltError::HypothesisViolation(format!(
                "Re tau = {} must exceed -1",
                tau.to_c64().re
            )));
        }
        let (lambda, omega) = if lambda.is_zero() {
            (Scalar::zero(), Scalar::zero())
        } else {
            let ok = match &lambda {
                Scalar::Exact(z) => canonical_sign_ok_exact(z),
                Scalar::Float(z) => canonical_sign_ok_f64(*z),
            };
            if ok {
                (lambda, omega)
            } else {
                (-lambda, -omega)
            }
        };
        let lambda_sq = &lambda * &lambda;
        let lambda_omega = &lambda * &omega;
        Ok(Self { tau, omega, lambda, lambda_sq, lambda_omega })
    }

    pub fn exact(
        tau: ComplexScalar,
        omega: ComplexScalar,
        lambda: ComplexScalar,
    ) -> Result<Self, CltError> {
        Self::new(Scalar::Exact(tau), Scalar::Exact(omega), Scalar::Exact(lambda))
    }

    pub fn f64(tau: Complex64, omega: Complex64, lambda: Complex64) -> Result<Self, CltError> {
        Self::new(Scalar::Float(tau), Scalar::Float(omega), Scalar::Float(lambda))
    }

    pub fn tau(&self) -> &Scalar {
        &self.tau
    }

    pub fn omega(&self) -> &Scalar {
        &self.omega
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn lambda_sq(&self) -> &Scalar {
        &self.lambda_sq
    }

    pub fn lambda_omega(&self) -> &Scalar {
        &self.lambda_omega
    }

    /// True when all three parameters are exact.
    pub fn is_exact(&self) -> bool {
        self.tau.is_exact() && self.omega.is_exact() && self.lambda.is_exact()
    }

    pub fn to_c64(&self) -> (Complex64, Complex64, Complex64) {
        (self.tau.to_c64(), self.omega.to_c64(), self.lambda.to_c64())
    }
}

/// Solves the identification system for the limit operator:
/// `tau = -K02/(1+K02)`, `lambda^2 = 1 + K20 + tau(1+tau) K11^2`,
/// `lambda omega = (1+tau) K11`.
///
/// `lambda` is the principal square root, exact when `lambda^2` has an exact
/// complex-rational root, float otherwise; `lambda_sq` and `lambda_omega`
/// stay exact either way.
pub fn solve_params(
    k02: &ComplexScalar,
    k20: &ComplexScalar,
    k11: &ComplexScalar,
) -> Result<GaussianParams, CltError> {
    if k02.re <= rat_int(-1) {
        return Err(CltError::HypothesisViolation(format!(
            "Re K[0][2] = {} must exceed -1",
            k02.re
        )));
    }
    let one = ComplexScalar::one();
    let one_plus_k02 = &one + k02;
    // Re(1+K02) > 0, so the division cannot fail.
    let tau = (-k02).try_div(&one_plus_k02).expect("1 + K02 != 0");
    let one_plus_tau = &one + &tau;
    let lambda_sq = &(&one + k20) + &(&(&tau * &one_plus_tau) * &(k11 * k11));
    let lambda_omega = &one_plus_tau * k11;
    if lambda_sq.is_zero() {
        return GaussianParams::new(Scalar::Exact(tau), Scalar::zero(), Scalar::zero());
    }
    let lambda = Scalar::Exact(lambda_sq.clone()).sqrt();
    let omega = Scalar::Exact(lambda_omega.clone())
        .try_div(&lambda)
        .expect("lambda != 0 here");
    let mut params = GaussianParams::new(Scalar::Exact(tau), omega, lambda)?;
    // keep the exact squares computed above (sign flips do not affect them)
    params.lambda_sq = Scalar::Exact(lambda_sq);
    params.lambda_omega = Scalar::Exact(lambda_omega);
    Ok(params)
}

/// Float mirror of [`solve_params`].
pub fn solve_params_f64(
    k02: Complex64,
    k20: Complex64,
    k11: Complex64,
) -> Result<GaussianParams, CltError> {
    let one = Complex64::new(1.0, 0.0);
    if k02.re <= -1.0 {
        return Err(CltError::HypothesisViolation(format!(
            "Re K[0][2] = {} must exceed -1",
            k02.re
        )));
    }
    let tau = -k02 / (one + k02);
    let lambda_sq = one + k20 + tau * (one + tau) * k11 * k11;
    if lambda_sq.norm() == 0.0 {
        return GaussianParams::new(
            Scalar::Float(tau),
            Scalar::Float(Complex64::new(0.0, 0.0)),
            Scalar::Float(Complex64::new(0.0, 0.0)),
        );
    }
    let lambda = lambda_sq.sqrt();
    let omega = (one + tau) * k11 / lambda;
    GaussianParams::new(Scalar::Float(tau), Scalar::Float(omega), Scalar::Float(lambda))
}

// --- closed-form limit coefficients ----------------------------------------

/// Closed-form limit coefficient from the K-matrix corner entries:
///
/// ```text
/// c[l][m] = l! m! Σ_{n even, 0 <= n <= l∧m}
///           K11^{l∧m-n} K20^{(l∨m-m+n)/2} K02^{(l∨m-l+n)/2}
///           / (2^{|l-m|/2+n} (l∧m-n)! (n/2)! ((|l-m|+n)/2)!)
/// ```
///
/// and `0` whenever `l+m` is odd.
pub fn limit_coefficient(
    k02: &ComplexScalar,
    k20: &ComplexScalar,
    k11: &ComplexScalar,
    l: usize,
    m: usize,
) -> ComplexScalar {
    if (l + m) % 2 == 1 {
        return ComplexScalar::zero();
    }
    let lo = l.min(m);
    let hi = l.max(m);
    let facts = FactorialTable::new(hi.max(1));
    let mut sum = ComplexScalar::zero();
    for n in (0..=lo).step_by(2) {
        let e20 = (hi - m + n) / 2;
        let e02 = (hi - l + n) / 2;
        let num = &(&k11.powu((lo - n) as u32) * &k20.powu(e20 as u32)) * &k02.powu(e02 as u32);
        if num.is_zero() {
            continue;
        }
        let denom = Rational::from_integer(
            num_bigint::BigInt::from(2u32).pow(((hi - lo) / 2 + n) as u32)
                * facts.get(lo - n)
                * facts.get(n / 2)
                * facts.get((hi - lo + n) / 2),
        );
        sum = &sum + &num.scale(&denom.recip());
    }
    sum.scale(&(facts.as_rational(l) * facts.as_rational(m)))
}

/// The same coefficient from the operator parameters, through the
/// generating-function form: with `t = -tau/(tau+1)`,
/// `-a = lambda^2 - 1 - (lambda omega)^2 tau/(tau+1)` and
/// `b = lambda omega/(tau+1)`,
///
/// ```text
/// c[l][m] = l! m! Σ_{n even} t^{(l∨m-l+n)/2} (-a)^{(l∨m-m+n)/2} b^{l∧m-n}
///           / (2^{|l-m|/2+n} (n/2)! ((|m-l|+n)/2)! (l∧m-n)!)
/// ```
///
/// Exact whenever `tau`, `lambda^2` and `lambda omega` are exact (which
/// [`solve_params`] guarantees even for irrational `lambda`).
pub fn limit_coefficient_from_params(gp: &GaussianParams, l: usize, m: usize) -> Scalar {
    if (l + m) % 2 == 1 {
        return Scalar::zero();
    }
    let one = Scalar::one();
    let tau_plus_one = gp.tau() + &one;
    let t = (-gp.tau()).try_div(&tau_plus_one).expect("Re tau > -1");
    let lo_sq = gp.lambda_omega() * gp.lambda_omega();
    // -a = lambda^2 - 1 - (lambda omega)^2 tau/(tau+1), and t = -tau/(tau+1)
    let minus_a = &(gp.lambda_sq() - &one) + &(&lo_sq * &t);
    let b = gp.lambda_omega().try_div(&tau_plus_one).expect("Re tau > -1");

    let lo = l.min(m);
    let hi = l.max(m);
    let facts = FactorialTable::new(hi.max(1));
    let mut sum = Scalar::zero();
    for n in (0..=lo).step_by(2) {
        let e_t = (hi - l + n) / 2;
        let e_a = (hi - m + n) / 2;
        let num = &(&t.powu(e_t as u32) * &minus_a.powu(e_a as u32)) * &b.powu((lo - n) as u32);
        if num.is_zero() {
            continue;
        }
        let denom = Rational::from_integer(
            num_bigint::BigInt::from(2u32).pow(((hi - lo) / 2 + n) as u32)
                * facts.get(n / 2)
                * facts.get((hi - lo + n) / 2)
                * facts.get(lo - n),
        );
        sum = &sum + &(&num * &Scalar::Exact(ComplexScalar::from_rational(denom.recip())));
    }
    &sum * &Scalar::Exact(ComplexScalar::from_rational(facts.as_rational(l) * facts.as_rational(m)))
}

// `-tau/(tau+1)` plays the role of `K02` above, `-a` of `K20` and `b` of
// `K11`; the two functions keep separate loops so they can cross-check
// each other.

// --- finite-N coefficients --------------------------------------------------

/// A finite-`N` coefficient value. For even `l+m` the normalization
/// `N^{(l+m)/2}` is an integer power and `scaled` is the exact value. For
/// odd `l+m` the true value is `scaled / sqrt(N)`, which is irrational
/// unless `scaled` is zero; [`FiniteNValue::exact`] reflects that.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteNValue {
    scaled: ComplexScalar,
    parity_odd: bool,
    n: u64,
}

impl FiniteNValue {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn parity_odd(&self) -> bool {
        self.parity_odd
    }

    /// The exact stored value: `c(N)` itself for even `l+m`, `c(N) sqrt(N)`
    /// for odd `l+m`.
    pub fn scaled(&self) -> &ComplexScalar {
        &self.scaled
    }

    /// The exact coefficient when it is representable: always for even
    /// parity, and for odd parity exactly when the sum vanished.
    pub fn exact(&self) -> Option<ComplexScalar> {
        if !self.parity_odd || self.scaled.is_zero() {
            Some(self.scaled.clone())
        } else {
            None
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.scaled.is_zero()
    }

    pub fn to_c64(&self) -> Complex64 {
        let v = self.scaled.to_c64();
        if self.parity_odd {
            v / (self.n as f64).sqrt()
        } else {
            v
        }
    }
}

/// A matrix `[P_ij]`, `0 <= i <= l`, `0 <= j <= m`, cell `(0,0)` excluded
/// (always zero), with `Σ i P_ij = l` and `Σ j P_ij = m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatrix {
    entries: Vec<Vec<u32>>,
}

impl PartitionMatrix {
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    /// `S = Σ' P_ij` (cell `(0,0)` is structurally zero).
    pub fn cell_sum(&self) -> u64 {
        self.entries.iter().flatten().map(|&v| v as u64).sum()
    }

    /// Nonzero cells as `(i, j, P_ij)`.
    pub fn nonzero_cells(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.entries.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().filter(|(_, &v)| v > 0).map(move |(j, &v)| (i, j, v))
        })
    }
}

/// Enumerates every partition matrix for `(l, m)` by recursive descent over
/// cells in row-major order with remaining-budget pruning. The result does
/// not depend on any `N`.
pub fn partition_matrices(l: usize, m: usize) -> Vec<PartitionMatrix> {
    let cells: Vec<(usize, usize)> = (0..=l)
        .flat_map(|i| (0..=m).map(move |j| (i, j)))
        .filter(|&(i, j)| (i, j) != (0, 0))
        .collect();
    // suffix capabilities: can the remaining cells still consume i / j budget?
    let mut has_i = vec![false; cells.len() + 1];
    let mut has_j = vec![false; cells.len() + 1];
    for t in (0..cells.len()).rev() {
        has_i[t] = has_i[t + 1] || cells[t].0 > 0;
        has_j[t] = has_j[t + 1] || cells[t].1 > 0;
    }
    let mut out = Vec::new();
    let mut values = vec![0u32; cells.len()];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        t: usize,
        rem_l: usize,
        rem_m: usize,
        cells: &[(usize, usize)],
        has_i: &[bool],
        has_j: &[bool],
        values: &mut [u32],
        out: &mut Vec<Vec<u32>>,
    ) {
        if t == cells.len() {
            if rem_l == 0 && rem_m == 0 {
                out.push(values.to_vec());
            }
            return;
        }
        if (rem_l > 0 && !has_i[t]) || (rem_m > 0 && !has_j[t]) {
            return;
        }
        let (i, j) = cells[t];
        let mut vmax = usize::MAX;
        if i > 0 {
            vmax = vmax.min(rem_l / i);
        }
        if j > 0 {
            vmax = vmax.min(rem_m / j);
        }
        for v in 0..=vmax {
            values[t] = v as u32;
            rec(t + 1, rem_l - v * i, rem_m - v * j, cells, has_i, has_j, values, out);
        }
        values[t] = 0;
    }
    rec(0, l, m, &cells, &has_i, &has_j, &mut values, &mut out);
    out.into_iter()
        .map(|values| {
            let mut entries = vec![vec![0u32; m + 1]; l + 1];
            for (t, &(i, j)) in cells.iter().enumerate() {
                entries[i][j] = values[t];
            }
            PartitionMatrix { entries }
        })
        .collect()
}

fn check_cutoff(km: &KMatrix, l: usize, m: usize) -> Result<(), CltError> {
    let needed = l.max(m);
    if km.cutoff() < needed {
        return Err(CltError::CutoffTooSmall { needed, cutoff: km.cutoff() });
    }
    Ok(())
}

/// One partition matrix's contribution:
/// `fall(N, S)/Π P_ij! * K[0][0]^{N-S} * Π (K[i][j]/(i! j!))^{P_ij}`.
///
/// The `K[0][0]` power comes from the `N - S` coordinates assigned to the
/// excluded cell; under the orthogonality hypothesis it is 1 and drops out.
fn matrix_term(
    km: &KMatrix,
    facts: &FactorialTable,
    n: u64,
    pm: &PartitionMatrix,
) -> ComplexScalar {
    let s = pm.cell_sum();
    let mut weight = Rational::from_integer(falling_factorial(n, s));
    if weight.is_zero() {
        return ComplexScalar::zero();
    }
    let mut product = powu64(km.entry(0, 0), n - s);
    if product.is_zero() {
        return ComplexScalar::zero();
    }
    for (i, j, p) in pm.nonzero_cells() {
        let entry = km.entry(i, j);
        if entry.is_zero() {
            return ComplexScalar::zero();
        }
        let base = entry.scale(&Rational::new(1.into(), facts.get(i) * facts.get(j)));
        product = &product * &base.powu(p);
        weight /= Rational::from_integer(facts.get(p as usize).clone());
    }
    product.scale(&weight)
}

/// `z^e` by repeated squaring with a 64-bit exponent (`0^0 = 1`).
fn powu64(z: &ComplexScalar, mut e: u64) -> ComplexScalar {
    if e == 0 {
        return ComplexScalar::one();
    }
    if z.is_one() {
        return ComplexScalar::one();
    }
    let mut base = z.clone();
    let mut acc = ComplexScalar::one();
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

fn assemble_finite_n(
    terms_sum: ComplexScalar,
    facts: &FactorialTable,
    l: usize,
    m: usize,
    n: u64,
) -> FiniteNValue {
    let scale = facts.as_rational(l) * facts.as_rational(m);
    let half_power = (l + m) / 2;
    let n_pow = Rational::from_integer(num_bigint::BigInt::from(n).pow(half_power as u32));
    FiniteNValue {
        scaled: terms_sum.scale(&(scale / n_pow)),
        parity_odd: (l + m) % 2 == 1,
        n,
    }
}

/// Exact finite-`N` tensorized coefficient via partition-matrix enumeration.
/// The enumeration cost is independent of `N`; `N` enters only through the
/// falling-factorial weights.
pub fn finite_n_coefficient(
    km: &KMatrix,
    l: usize,
    m: usize,
    n: u64,
) -> Result<FiniteNValue, CltError> {
    assert!(n >= 1, "N must be positive");
    check_cutoff(km, l, m)?;
    let facts = FactorialTable::new(l.max(m).max(l + m));
    let matrices = partition_matrices(l, m);
    let terms = par::map_collect(&matrices, |pm| matrix_term(km, &facts, n, pm));
    let sum = terms.into_iter().fold(ComplexScalar::zero(), |acc, t| &acc + &t);
    Ok(assemble_finite_n(sum, &facts, l, m, n))
}

/// Always-sequential variant of [`finite_n_coefficient`]; bitwise-identical
/// results.
pub fn finite_n_coefficient_seq(
    km: &KMatrix,
    l: usize,
    m: usize,
    n: u64,
) -> Result<FiniteNValue, CltError> {
    assert!(n >= 1, "N must be positive");
    check_cutoff(km, l, m)?;
    let facts = FactorialTable::new(l.max(m).max(l + m));
    let sum = partition_matrices(l, m)
        .iter()
        .map(|pm| matrix_term(km, &facts, n, pm))
        .fold(ComplexScalar::zero(), |acc, t| &acc + &t);
    Ok(assemble_finite_n(sum, &facts, l, m, n))
}

/// Independent oracle: the same coefficient evaluated from the defining
/// composition sum
///
/// ```text
/// c[l][m](N) = l! m! / N^{(l+m)/2}
///            * Σ_{l_1+..+l_N=l, m_1+..+m_N=m} Π K[l_i][m_i] / (l_i! m_i!)
/// ```
///
/// by joint recursion over coordinates. Exponential in `N`; intended for
/// small `N` only.
pub fn finite_n_bruteforce(
    km: &KMatrix,
    l: usize,
    m: usize,
    n: u64,
) -> Result<FiniteNValue, CltError> {
    assert!(n >= 1, "N must be positive");
    assert!(n <= 12, "brute-force oracle is exponential in N");
    check_cutoff(km, l, m)?;
    let facts = FactorialTable::new(l.max(m).max(l + m));
    // K[i][j] / (i! j!), with zero entries flagged for pruning
    let weights: Vec<Vec<Option<ComplexScalar>>> = (0..=l)
        .map(|i| {
            (0..=m)
                .map(|j| {
                    let e = km.entry(i, j);
                    (!e.is_zero())
                        .then(|| e.scale(&Rational::new(1.into(), facts.get(i) * facts.get(j))))
                })
                .collect()
        })
        .collect();
    fn rec(
        coord: u64,
        n: u64,
        rem_l: usize,
        rem_m: usize,
        prefix: &ComplexScalar,
        weights: &[Vec<Option<ComplexScalar>>],
        acc: &mut ComplexScalar,
    ) {
        if coord == n {
            if rem_l == 0 && rem_m == 0 {
                *acc = &*acc + prefix;
            }
            return;
        }
        for li in 0..=rem_l {
            for mi in 0..=rem_m {
                if let Some(w) = &weights[li][mi] {
                    let next = prefix * w;
                    rec(coord + 1, n, rem_l - li, rem_m - mi, &next, weights, acc);
                }
            }
        }
    }
    let mut sum = ComplexScalar::zero();
    rec(0, n, l, m, &ComplexScalar::one(), &weights, &mut sum);
    Ok(assemble_finite_n(sum, &facts, l, m, n))
}

// --- convergence tables -----------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub value: FiniteNValue,
    pub limit: ComplexScalar,
    pub abs_err: f64,
}

/// Finite-`N` values against the closed-form limit for each `N` in `ns`.
/// Requires the orthogonality hypotheses to hold on `km`.
pub fn convergence_table(
    km: &KMatrix,
    l: usize,
    m: usize,
    ns: &[u64],
) -> Result<Vec<ConvergenceRow>, CltError> {
    let report = check_hypotheses(km);
    if !report.pass() {
        return Err(CltError::HypothesisViolation(format!(
            "K[0][0] = {}, K[0][1] = {}, K[1][0] = {}, Re K[0][2] = {}",
            report.k00, report.k01, report.k10, report.k02.re
        )));
    }
    let limit = limit_coefficient(&report.k02, &report.k20, &report.k11, l, m);
    let rows = par::map_collect(ns, |&n| {
        finite_n_coefficient(km, l, m, n).map(|value| {
            // difference taken exactly when possible, so real-valued errors
            // convert to float with a single correctly-rounded step
            let abs_err = match value.exact() {
                Some(exact) => {
                    let diff = &exact - &limit;
                    if diff.im.is_zero() {
                        crate::algebra::rational_to_f64(&diff.re).abs()
                    } else {
                        diff.to_c64().norm()
                    }
                }
                None => (value.to_c64() - limit.to_c64()).norm(),
            };
            ConvergenceRow { n, value, limit: limit.clone(), abs_err }
        })
    });
    rows.into_iter().collect()
}

// --- coefficient tables ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Limit,
    FiniteN { n: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub value: Scalar,
    pub provenance: Provenance,
}

/// Coefficient table over `l, m <= cutoff` with per-entry provenance.
/// Limit-kind entries vanish exactly for odd `l+m`.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTable {
    pub cutoff: usize,
    pub entries: Vec<Vec<TableEntry>>,
}

impl CoefficientTable {
    pub fn entry(&self, l: usize, m: usize) -> &TableEntry {
        &self.entries[l][m]
    }
}

/// Table of closed-form limits from the K-matrix corner entries.
pub fn limit_table(km: &KMatrix, cutoff: usize) -> Result<CoefficientTable, CltError> {
    if km.cutoff() < 2 {
        return Err(CltError::CutoffTooSmall { needed: 2, cutoff: km.cutoff() });
    }
    let k02 = km.entry(0, 2).clone();
    let k20 = km.entry(2, 0).clone();
    let k11 = km.entry(1, 1).clone();
    let rows = par::map_range(cutoff + 1, |l| {
        (0..=cutoff)
            .map(|m| TableEntry {
                value: Scalar::Exact(limit_coefficient(&k02, &k20, &k11, l, m)),
                provenance: Provenance::Limit,
            })
            .collect::<Vec<_>>()
    });
    Ok(CoefficientTable { cutoff, entries: rows })
}

/// Table of finite-`N` coefficients. Odd-parity entries are stored exactly
/// when the partition sum vanishes and as floats otherwise.
pub fn finite_n_table(km: &KMatrix, cutoff: usize, n: u64) -> Result<CoefficientTable, CltError> {
    let rows: Vec<Result<Vec<TableEntry>, CltError>> = par::map_range(cutoff + 1, |l| {
        (0..=cutoff)
            .map(|m| {
                let v = finite_n_coefficient(km, l, m, n)?;
                let value = match v.exact() {
                    Some(exact) => Scalar::Exact(exact),
                    None => Scalar::Float(v.to_c64()),
                };
                Ok(TableEntry { value, provenance: Provenance::FiniteN { n } })
            })
            .collect()
    });
    Ok(CoefficientTable { cutoff, entries: rows.into_iter().collect::<Result<_, _>>()? })
}
