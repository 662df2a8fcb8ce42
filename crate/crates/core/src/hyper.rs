//! Hypercontractivity diagnostics: Epperson's condition for the Hermite
//! semigroup, contraction ratio scans on atomic measures, tensor-power
//! contraction checks, the support-grid oracle for tensorized coefficients,
//! and an end-to-end transference demo.
//!
//! The scans are numeric certificates of non-violation at desk scale, not
//! proofs: grids plus golden-section refinement around the grid argmax.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::float::C64Parts;
use crate::algebra::rational_to_f64;
use crate::clt::{solve_params_f64, CltError};
use crate::hermite::{hermite_polynomial, weak_compositions};
use crate::measures::{two_point_measure, Measure, MeasureError};
use crate::operators::{
    check_hypotheses_f64, k_matrix_f64, semigroup_operator_f64, FloatOperatorSpec,
    HypothesisReportF64, OperatorError,
};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperError {
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("operation requires an atomic measure")]
    NotAtomic,
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Clt(#[from] CltError),
}

/// A pair of Lebesgue exponents `0 < p, q < ∞`. Contraction checks
/// additionally require `1 <= p <= q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    pub fn new(p: f64, q: f64) -> Result<Self, HyperError> {
        if !(p.is_finite() && q.is_finite() && p > 0.0 && q > 0.0) {
            return Err(HyperError::InvalidExponents(format!(
                "need finite p, q > 0, got p={p}, q={q}"
            )));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    fn require_contraction_range(&self) -> Result<(), HyperError> {
        if !(1.0 <= self.p && self.p <= self.q) {
            return Err(HyperError::InvalidExponents(format!(
                "contraction checks need 1 <= p <= q, got p={}, q={}",
                self.p, self.q
            )));
        }
        Ok(())
    }

    /// The dual exponent `p' = p/(p-1)` (for `p > 1`).
    pub fn conjugate(p: f64) -> f64 {
        p / (p - 1.0)
    }
}

// --- Epperson's condition ----------------------------------------------------

/// Slack and verdict of the semigroup contraction condition
/// `|p - 2 - omega^2 (q-2)| <= p - |omega|^2 q`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EppersonResult {
    pub slack: f64,
    pub ok: bool,
}

/// Evaluates the condition for `T_omega: L^p(dγ) -> L^q(dγ)`; `slack` is
/// right-hand side minus left-hand side, and `ok` allows `-1e-12` of float
/// leeway for boundary cases.
pub fn epperson_ok(pq: &ExponentPair, omega: Complex64) -> EppersonResult {
    let (p, q) = (pq.p, pq.q);
    let lhs = (Complex64::new(p - 2.0, 0.0) - omega * omega * (q - 2.0)).norm();
    let rhs = p - omega.norm_sqr() * q;
    let slack = rhs - lhs;
    EppersonResult { slack, ok: slack >= -1e-12 }
}

// --- contraction ratio scans --------------------------------------------------

/// Rectangle of complex `t` values swept by the ratio scans.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    /// Steps per axis; the grid has `steps * steps` points.
    pub steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { re_range: (-3.0, 3.0), im_range: (-3.0, 3.0), steps: 100 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanResult {
    pub max_ratio: f64,
    /// The `t` achieving the maximum over `f = 1 + t x`; `None` when the
    /// pure `f = x` case wins.
    pub argmax_t: Option<C64Parts>,
    pub grid_points: usize,
}

struct AtomData {
    weights: Vec<f64>,
    points: Vec<f64>,
}

fn atom_data(mu: &Measure) -> Result<AtomData, HyperError> {
    let atoms = mu.atoms().ok_or(HyperError::NotAtomic)?;
    Ok(AtomData {
        weights: atoms.iter().map(|(_, w)| rational_to_f64(w)).collect(),
        points: atoms.iter().map(|(x, _)| rational_to_f64(x)).collect(),
    })
}

fn lp_norm_values(weights: &[f64], values: &[Complex64], p: f64) -> f64 {
    weights
        .iter()
        .zip(values)
        .map(|(w, v)| w * v.norm().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `‖K f‖_{L^q(μ)} / ‖f‖_{L^p(μ)}` for `f = c0 + c1 x`.
fn affine_ratio(
    op: &FloatOperatorSpec,
    atoms: &AtomData,
    pq: &ExponentPair,
    c0: Complex64,
    c1: Complex64,
) -> f64 {
    let f = [c0, c1];
    let kf = op.apply(&f).expect("operator cutoff covers degree 1");
    let f_vals: Vec<Complex64> =
        atoms.points.iter().map(|&x| c0 + c1 * x).collect();
    let kf_vals: Vec<Complex64> = atoms
        .points
        .iter()
        .map(|&x| crate::algebra::float::eval(&kf, Complex64::new(x, 0.0)))
        .collect();
    let den = lp_norm_values(&atoms.weights, &f_vals, pq.p);
    if den == 0.0 {
        return 0.0;
    }
    lp_norm_values(&atoms.weights, &kf_vals, pq.q) / den
}

fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    const GR: f64 = 0.618_033_988_749_894_9;
    let mut c = b - GR * (b - a);
    let mut d = a + GR * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GR * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GR * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

fn ratio_scan_impl(
    mu: &Measure,
    op: &FloatOperatorSpec,
    pq: &ExponentPair,
    grid: &GridSpec,
    parallel: bool,
) -> Result<ScanResult, HyperError> {
    if op.cutoff() < 1 {
        return Err(OperatorError::CutoffTooSmall { needed: 1, cutoff: op.cutoff() }.into());
    }
    let atoms = atom_data(mu)?;
    let steps = grid.steps.max(2);
    let (r0, r1) = grid.re_range;
    let (i0, i1) = grid.im_range;
    let dr = (r1 - r0) / (steps - 1) as f64;
    let di = (i1 - i0) / (steps - 1) as f64;
    let one = Complex64::new(1.0, 0.0);
    let row = |row_idx: usize| -> (f64, Complex64) {
        let im = i0 + di * row_idx as f64;
        let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
        for col in 0..steps {
            let t = Complex64::new(r0 + dr * col as f64, im);
            let r = affine_ratio(op, &atoms, pq, one, t);
            if r > best.0 {
                best = (r, t);
            }
        }
        best
    };
    let row_best = if parallel {
        par::map_range(steps, row)
    } else {
        par::map_range_seq(steps, row)
    };
    let (mut best_ratio, mut best_t) = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
    for (r, t) in row_best {
        if r > best_ratio {
            best_ratio = r;
            best_t = t;
        }
    }
    // golden-section refinement around the grid argmax, alternating axes
    let mut t = best_t;
    for _ in 0..3 {
        let im = t.im;
        let re = golden_max(
            |re| affine_ratio(op, &atoms, pq, one, Complex64::new(re, im)),
            t.re - dr,
            t.re + dr,
            40,
        );
        let im = golden_max(
            |im| affine_ratio(op, &atoms, pq, one, Complex64::new(re, im)),
            t.im - di,
            t.im + di,
            40,
        );
        t = Complex64::new(re, im);
        let r = affine_ratio(op, &atoms, pq, one, t);
        if r > best_ratio {
            best_ratio = r;
            best_t = t;
        }
    }
    // the projective family 1 + t x misses only the pure f = x case
    let pure_x = affine_ratio(op, &atoms, pq, Complex64::new(0.0, 0.0), one);
    if pure_x > best_ratio {
        Ok(ScanResult { max_ratio: pure_x, argmax_t: None, grid_points: steps * steps })
    } else {
        Ok(ScanResult {
            max_ratio: best_ratio,
            argmax_t: Some(best_t.into()),
            grid_points: steps * steps,
        })
    }
}

/// Sweeps `f = 1 + t x` (plus the pure `f = x` case) over a complex grid
/// and returns the largest `‖K f‖_{L^q(μ)} / ‖f‖_{L^p(μ)}`.
pub fn ratio_scan(
    mu: &Measure,
    op: &FloatOperatorSpec,
    pq: &ExponentPair,
    grid: &GridSpec,
) -> Result<ScanResult, HyperError> {
    ratio_scan_impl(mu, op, pq, grid, true)
}

/// Always-sequential variant of [`ratio_scan`]; identical results.
pub fn ratio_scan_seq(
    mu: &Measure,
    op: &FloatOperatorSpec,
    pq: &ExponentPair,
    grid: &GridSpec,
) -> Result<ScanResult, HyperError> {
    ratio_scan_impl(mu, op, pq, grid, false)
}

/// [`ratio_scan`] specialized to the two-point measure and its semigroup
/// `K_omega`.
pub fn two_point_ratio_scan(
    pq: &ExponentPair,
    omega: Complex64,
    grid: &GridSpec,
) -> Result<ScanResult, HyperError> {
    let tp = two_point_measure();
    let op = semigroup_operator_f64(&tp, omega, 1)?;
    ratio_scan(&tp, &op, pq, grid)
}

/// Sequential variant of [`two_point_ratio_scan`].
pub fn two_point_ratio_scan_seq(
    pq: &ExponentPair,
    omega: Complex64,
    grid: &GridSpec,
) -> Result<ScanResult, HyperError> {
    let tp = two_point_measure();
    let op = semigroup_operator_f64(&tp, omega, 1)?;
    ratio_scan_seq(&tp, &op, pq, grid)
}

// --- tensor-power machinery ---------------------------------------------------

/// Odometer over `{0, .., base-1}^n`, enumerating all grid-point index
/// vectors.
fn index_grid(base: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(base.pow(n as u32));
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            cur[k] += 1;
            if cur[k] < base {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// Per-atom table of `K(x^d)` values at the (unscaled) support points, and
/// the powers used to evaluate tensorized operators on the grid
/// `x = y/sqrt(N)`, `y` in the support.
struct TensorTables {
    /// `k_vals[a][d] = K(x^d)(y_a) / N^{d/2}`
    k_vals: Vec<Vec<Complex64>>,
    /// `pows[a][d] = (y_a / sqrt(N))^d`
    pows: Vec<Vec<Complex64>>,
    weights: Vec<f64>,
    points: Vec<f64>,
}

fn tensor_tables(
    op: &FloatOperatorSpec,
    mu: &Measure,
    max_degree: usize,
    n: u64,
) -> Result<TensorTables, HyperError> {
    if op.cutoff() < max_degree {
        return Err(OperatorError::CutoffTooSmall { needed: max_degree, cutoff: op.cutoff() }
            .into());
    }
    let atoms = atom_data(mu)?;
    let sqrt_n = (n as f64).sqrt();
    let k_vals = atoms
        .points
        .iter()
        .map(|&y| {
            (0..=max_degree)
                .map(|d| op.eval_image(d, Complex64::new(y, 0.0)) / sqrt_n.powi(d as i32))
                .collect()
        })
        .collect();
    let pows = atoms
        .points
        .iter()
        .map(|&y| {
            (0..=max_degree)
                .map(|d| Complex64::new(y / sqrt_n, 0.0).powi(d as i32))
                .collect()
        })
        .collect();
    Ok(TensorTables { k_vals, pows, weights: atoms.weights, points: atoms.points })
}

/// Configuration for [`tensor_contraction_check`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TensorCheckConfig {
    /// Tensor power (number of coordinates). Both grids have
    /// `atoms^n` points, so keep this small.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Per-variable degree of the random polynomials.
    pub degree_per_var: usize,
}

impl TensorCheckConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self { n, trials, seed, degree_per_var: 2 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TensorCheckResult {
    pub max_ratio: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn tensor_trial_ratio(
    alpha_tab: &TensorTables,
    beta_tab: &TensorTables,
    alpha_grid: &[Vec<usize>],
    beta_grid: &[Vec<usize>],
    multi_indices: &[Vec<usize>],
    pq: &ExponentPair,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let coeffs: Vec<Complex64> = multi_indices
        .iter()
        .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    let eval = |tables: &[Vec<Complex64>], point: &[usize]| -> Complex64 {
        multi_indices
            .iter()
            .zip(&coeffs)
            .map(|(j, c)| {
                let mut prod = *c;
                for (coord, &ji) in j.iter().enumerate() {
                    prod *= tables[point[coord]][ji];
                }
                prod
            })
            .sum()
    };
    let grid_norm = |tab: &TensorTables,
                     grid: &[Vec<usize>],
                     tables: &[Vec<Complex64>],
                     exponent: f64| {
        let mut acc = 0.0;
        for point in grid {
            let w: f64 = point.iter().map(|&a| tab.weights[a]).product();
            acc += w * eval(tables, point).norm().powf(exponent);
        }
        acc.powf(1.0 / exponent)
    };
    let num = grid_norm(alpha_tab, alpha_grid, &alpha_tab.k_vals, pq.q);
    let den = grid_norm(beta_tab, beta_grid, &beta_tab.pows, pq.p);
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn tensor_contraction_impl(
    op: &FloatOperatorSpec,
    alpha: &Measure,
    beta: &Measure,
    pq: &ExponentPair,
    cfg: &TensorCheckConfig,
    parallel: bool,
) -> Result<TensorCheckResult, HyperError> {
    pq.require_contraction_range()?;
    let n = cfg.n.max(1);
    let alpha_tab = tensor_tables(op, alpha, cfg.degree_per_var, n as u64)?;
    let beta_tab = tensor_tables(op, beta, cfg.degree_per_var, n as u64)?;
    let alpha_grid = index_grid(alpha_tab.points.len(), n);
    let beta_grid = index_grid(beta_tab.points.len(), n);
    let multi_indices = index_grid(cfg.degree_per_var + 1, n);
    let trial = |t: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(t as u64));
        tensor_trial_ratio(
            &alpha_tab,
            &beta_tab,
            &alpha_grid,
            &beta_grid,
            &multi_indices,
            pq,
            &mut rng,
        )
    };
    let ratios =
        if parallel { par::map_range(cfg.trials, trial) } else { par::map_range_seq(cfg.trials, trial) };
    let max_ratio = ratios.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(TensorCheckResult { max_ratio, n, trials: cfg.trials, seed: cfg.seed })
}

/// Evaluates the tensorized operator `K_N` on random multivariate
/// polynomials over the product support grid and returns the largest
/// `‖K_N f‖_{L^q(α_N(√N x))} / ‖f‖_{L^p(β_N(√N x))}`.
///
/// Trials are reproducible from the seed and independent of thread count.
pub fn tensor_contraction_check(
    op: &FloatOperatorSpec,
    alpha: &Measure,
    beta: &Measure,
    pq: &ExponentPair,
    cfg: &TensorCheckConfig,
) -> Result<TensorCheckResult, HyperError> {
    tensor_contraction_impl(op, alpha, beta, pq, cfg, true)
}

/// Always-sequential variant of [`tensor_contraction_check`].
pub fn tensor_contraction_check_seq(
    op: &FloatOperatorSpec,
    alpha: &Measure,
    beta: &Measure,
    pq: &ExponentPair,
    cfg: &TensorCheckConfig,
) -> Result<TensorCheckResult, HyperError> {
    tensor_contraction_impl(op, alpha, beta, pq, cfg, false)
}

// --- support-grid oracle -------------------------------------------------------

fn tensor_grid_impl(
    op: &FloatOperatorSpec,
    mu: &Measure,
    l: usize,
    m: usize,
    n: u64,
    parallel: bool,
) -> Result<Complex64, HyperError> {
    let tab = tensor_tables(op, mu, l, n)?;
    let n_usize = n as usize;
    let sqrt_n = (n as f64).sqrt();
    // expand H_l(x_1 + .. + x_N) into monomial terms, folding the 1/N^{k/2}
    // scaling of the tensorized operator into each coefficient
    let h_l = hermite_polynomial(l);
    let mut terms: Vec<(Vec<usize>, f64)> = Vec::new();
    for (k, hk) in h_l.coeffs().iter().enumerate() {
        if hk.is_zero() {
            continue;
        }
        let hk = hk.to_c64().re;
        let k_fact = crate::algebra::factorial(k);
        for comp in weak_compositions(k, n_usize) {
            let denom: num_bigint::BigInt =
                comp.iter().map(|&j| crate::algebra::factorial(j)).product();
            let multinom = rational_to_f64(&crate::algebra::Rational::new(k_fact.clone(), denom));
            terms.push((comp, hk * multinom / sqrt_n.powi(k as i32)));
        }
    }
    let h_m = hermite_polynomial(m).to_c64();
    let grid = index_grid(tab.points.len(), n_usize);
    // raw K(x^d)(y_a); the 1/N^{d/2} scaling lives in the terms
    let k_raw: Vec<Vec<Complex64>> = tab
        .points
        .iter()
        .map(|&y| (0..=l).map(|d| op.eval_image(d, Complex64::new(y, 0.0))).collect())
        .collect();
    let point_value = |point: &Vec<usize>| -> Complex64 {
        let w: f64 = point.iter().map(|&a| tab.weights[a]).product();
        let mut kn = Complex64::new(0.0, 0.0);
        for (j, c) in &terms {
            let mut prod = Complex64::new(*c, 0.0);
            // every coordinate contributes its image value, including the
            // zero-exponent ones: K(x^0) need not be the constant 1
            for (coord, &ji) in j.iter().enumerate() {
                prod *= k_raw[point[coord]][ji];
            }
            kn += prod;
        }
        let y_sum: f64 = point.iter().map(|&a| tab.points[a]).sum();
        let g = crate::algebra::float::eval(&h_m, Complex64::new(y_sum / sqrt_n, 0.0));
        w * kn * g
    };
    let point_values = if parallel {
        par::map_collect(&grid, point_value)
    } else {
        grid.iter().map(point_value).collect::<Vec<_>>()
    };
    Ok(point_values.into_iter().sum())
}

/// Direct evaluation of `∫ K_N([H_l]_+) [H_m]_+ dα_N(√N x)` by summation
/// over the full support grid: the independent full-pipeline oracle for
/// [`crate::clt::finite_n_coefficient`] on atomic measures.
pub fn tensor_grid_coefficient(
    op: &FloatOperatorSpec,
    mu: &Measure,
    l: usize,
    m: usize,
    n: u64,
) -> Result<Complex64, HyperError> {
    tensor_grid_impl(op, mu, l, m, n, true)
}

/// Always-sequential variant of [`tensor_grid_coefficient`].
pub fn tensor_grid_coefficient_seq(
    op: &FloatOperatorSpec,
    mu: &Measure,
    l: usize,
    m: usize,
    n: u64,
) -> Result<Complex64, HyperError> {
    tensor_grid_impl(op, mu, l, m, n, false)
}

// --- transference demo -----------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct TransferenceReport {
    pub omega: C64Parts,
    pub p: f64,
    pub q: f64,
    pub hypotheses: HypothesisReportF64,
    pub tau: C64Parts,
    pub lambda: C64Parts,
    pub recovered_omega: C64Parts,
    /// `tau ~ 0`, `lambda ~ 1`, `omega` recovered: the semigroup limit is
    /// the Hermite semigroup itself.
    pub semigroup_form_recovered: bool,
    pub epperson: EppersonResult,
    pub scan: Option<ScanResult>,
    /// Scan stayed below `1 + 1e-9` (only for atomic measures).
    pub empirical_contraction: Option<bool>,
    /// No contradiction with the transference direction: an empirically
    /// contractive 1-D operator must satisfy Epperson's condition.
    pub consistent: bool,
}

/// End-to-end pipeline on a standardized measure: build the semigroup
/// `K_omega`, compute its K-matrix, check the hypotheses, solve for the
/// limit parameters (expected: the Hermite semigroup `T_omega`), evaluate
/// Epperson's condition, and — for atomic measures — scan the 1-D
/// contraction ratio empirically.
pub fn transference_demo(
    mu: &Measure,
    omega: Complex64,
    pq: &ExponentPair,
) -> Result<TransferenceReport, HyperError> {
    const TOL: f64 = 1e-10;
    let op = semigroup_operator_f64(mu, omega, 4)?;
    let entries = k_matrix_f64(&op, mu, 4)?;
    let hypotheses = check_hypotheses_f64(&entries, TOL);
    let params = solve_params_f64(entries[0][2], entries[2][0], entries[1][1])?;
    let (tau, rec_omega, lambda) = params.to_c64();
    // the canonical sign may flip (omega, lambda) together; compare both
    let omega_matches = (rec_omega - omega).norm() <= TOL
        && (lambda - Complex64::new(1.0, 0.0)).norm() <= TOL
        || (rec_omega + omega).norm() <= TOL
            && (lambda + Complex64::new(1.0, 0.0)).norm() <= TOL;
    let semigroup_form_recovered = hypotheses.pass() && tau.norm() <= TOL && omega_matches;
    let epperson = epperson_ok(pq, omega);
    let (scan, empirical_contraction) = if mu.is_atomic() {
        let scan_op = semigroup_operator_f64(mu, omega, 1)?;
        let result = ratio_scan(mu, &scan_op, pq, &GridSpec::default())?;
        let contraction = result.max_ratio <= 1.0 + 1e-9;
        (Some(result), Some(contraction))
    } else {
        (None, None)
    };
    let consistent = match empirical_contraction {
        Some(true) => epperson.ok,
        _ => true,
    };
    Ok(TransferenceReport {
        omega: omega.into(),
        p: pq.p,
        q: pq.q,
        hypotheses,
        tau: tau.into(),
        lambda: lambda.into(),
        recovered_omega: rec_omega.into(),
        semigroup_form_recovered,
        epperson,
        scan,
        empirical_contraction,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn pqs(p: f64, q: f64) -> ExponentPair {
        ExponentPair::new(p, q).unwrap()
    }

    fn beckner_omega(p: f64) -> Complex64 {
        Complex64::new(0.0, (p - 1.0).sqrt())
    }

    #[test]
    fn epperson_examples() {
        let r = epperson_ok(&pqs(2.0, 2.0), Complex64::new(0.9, 0.0));
        assert!(r.ok);
        assert!((r.slack - 0.38).abs() < 1e-12);

        // boundary: p, q = p', omega = i sqrt(p-1)
        let p = 1.5;
        let r = epperson_ok(&pqs(p, ExponentPair::conjugate(p)), beckner_omega(p));
        assert!(r.slack.abs() <= 1e-12 && r.ok);

        // failure: p=1, q=2, omega=1
        let r = epperson_ok(&pqs(1.0, 2.0), Complex64::new(1.0, 0.0));
        assert!(!r.ok && r.slack < -1.9);
    }

    #[test]
    fn epperson_diagonal_monotonicity() {
        // p = q = 2, real omega: contraction iff |omega| <= 1
        for k in 0..=30 {
            let w = 0.05 * k as f64;
            let r = epperson_ok(&pqs(2.0, 2.0), Complex64::new(w, 0.0));
            assert_eq!(r.ok, w <= 1.0 + 1e-12, "omega={w}");
        }
    }

    #[test]
    fn two_point_scan_examples() {
        // p = q = 2, omega = i: |1 + i t|^2 = 1 + t^2 = |1 - i t|^2 for real t
        let r = two_point_ratio_scan(
            &pqs(2.0, 2.0),
            Complex64::new(0.0, 1.0),
            &GridSpec { im_range: (0.0, 0.0), steps: 50, ..GridSpec::default() },
        )
        .unwrap();
        assert!((r.max_ratio - 1.0).abs() <= 1e-12);

        // expansion: omega = 2, p = q = 2 exceeds 1 at f = x
        let r = two_point_ratio_scan(&pqs(2.0, 2.0), Complex64::new(2.0, 0.0), &GridSpec::default())
            .unwrap();
        assert!(r.max_ratio >= 2.0 - 1e-12);
    }

    #[test]
    fn two_point_inequality_boundary_family() {
        for p in [1.25, 1.5, 2.0] {
            let pq = pqs(p, ExponentPair::conjugate(p));
            let r = two_point_ratio_scan(&pq, beckner_omega(p), &GridSpec::default()).unwrap();
            assert!(
                r.max_ratio <= 1.0 + 1e-9,
                "p={p}: ratio {} exceeds 1",
                r.max_ratio
            );
            // sharp: ratio 1 is attained (at t = 0)
            assert!(r.max_ratio >= 1.0 - 1e-12, "p={p}");
        }
    }

    #[test]
    fn scan_never_violates_epperson_verdict_on_suite() {
        let suite = [
            (1.25, ExponentPair::conjugate(1.25), beckner_omega(1.25)),
            (1.5, ExponentPair::conjugate(1.5), beckner_omega(1.5)),
            (2.0, 2.0, beckner_omega(2.0)),
            (2.0, 2.0, Complex64::new(0.7, 0.0)),
            (2.0, 2.0, Complex64::new(0.0, 0.3)),
            (1.5, 3.0, Complex64::new(0.3, 0.2)),
            (3.0, 3.0, Complex64::new(0.5, 0.0)),
        ];
        for (p, q, omega) in suite {
            let pq = pqs(p, q);
            let verdict = epperson_ok(&pq, omega);
            if verdict.ok && verdict.slack >= 0.0 {
                let r = two_point_ratio_scan(&pq, omega, &GridSpec::default()).unwrap();
                assert!(
                    r.max_ratio <= 1.0 + 1e-9,
                    "(p={p}, q={q}, omega={omega}): ratio {} with slack {}",
                    r.max_ratio,
                    verdict.slack
                );
            }
        }
    }

    #[test]
    fn parallel_and_sequential_scans_agree() {
        let pq = pqs(1.5, 3.0);
        let omega = beckner_omega(1.5);
        let grid = GridSpec { steps: 40, ..GridSpec::default() };
        let a = two_point_ratio_scan(&pq, omega, &grid).unwrap();
        let b = two_point_ratio_scan_seq(&pq, omega, &grid).unwrap();
        assert_eq!(a.max_ratio.to_bits(), b.max_ratio.to_bits());
        assert_eq!(a.argmax_t.map(|t| (t.re.to_bits(), t.im.to_bits())),
                   b.argmax_t.map(|t| (t.re.to_bits(), t.im.to_bits())));
    }

    #[test]
    fn tensor_check_identity_operator() {
        use crate::operators::OperatorSpec;
        let tp = two_point_measure();
        let id = OperatorSpec::identity(2).to_f64();
        let pq = pqs(2.0, 2.0);
        let cfg = TensorCheckConfig::new(3, 100, 11);
        let r = tensor_contraction_check(&id, &tp, &tp, &pq, &cfg).unwrap();
        assert!(r.max_ratio <= 1.0 + 1e-12, "identity ratio {}", r.max_ratio);
        assert!(r.max_ratio >= 1.0 - 1e-9, "identity should be attained");
    }

    #[test]
    fn tensor_check_beckner_case() {
        let tp = two_point_measure();
        let p = 1.5;
        let pq = pqs(p, ExponentPair::conjugate(p));
        let omega = beckner_omega(p);
        let op = semigroup_operator_f64(&tp, omega, 2).unwrap();
        let cfg = TensorCheckConfig::new(3, 200, 7);
        let r = tensor_contraction_check(&op, &tp, &tp, &pq, &cfg).unwrap();
        assert!(r.max_ratio <= 1.0 + 1e-9, "ratio {}", r.max_ratio);
    }

    #[test]
    fn tensor_check_respects_one_dimensional_bound() {
        let tp = two_point_measure();
        for (p, q, omega) in [
            (1.5, 3.0, beckner_omega(1.5)),
            (2.0, 2.0, Complex64::new(0.6, 0.0)),
        ] {
            let pq = pqs(p, q);
            let scan = two_point_ratio_scan(&pq, omega, &GridSpec::default()).unwrap();
            let op = semigroup_operator_f64(&tp, omega, 2).unwrap();
            for n in [2usize, 3] {
                let cfg = TensorCheckConfig::new(n, 200, 5);
                let r = tensor_contraction_check(&op, &tp, &tp, &pq, &cfg).unwrap();
                assert!(
                    r.max_ratio <= scan.max_ratio + 1e-9,
                    "N={n}: {} vs 1-D {}",
                    r.max_ratio,
                    scan.max_ratio
                );
            }
        }
    }

    #[test]
    fn tensor_check_n1_matches_scan_family() {
        // at N=1 the trials draw f = c0 + c1 x + c2 x^2; on the two-point
        // support x^2 = 1, so f is affine there and the scan's family covers it
        let tp = two_point_measure();
        let p = 1.5;
        let pq = pqs(p, ExponentPair::conjugate(p));
        let omega = beckner_omega(p);
        let op = semigroup_operator_f64(&tp, omega, 2).unwrap();
        let scan = two_point_ratio_scan(&pq, omega, &GridSpec::default()).unwrap();
        let cfg = TensorCheckConfig::new(1, 300, 3);
        let r = tensor_contraction_check(&op, &tp, &tp, &pq, &cfg).unwrap();
        assert!(r.max_ratio <= scan.max_ratio + 1e-9);
    }

    #[test]
    fn parallel_and_sequential_tensor_checks_agree() {
        let tp = two_point_measure();
        let pq = pqs(1.5, 3.0);
        let op = semigroup_operator_f64(&tp, beckner_omega(1.5), 2).unwrap();
        let cfg = TensorCheckConfig::new(2, 64, 99);
        let a = tensor_contraction_check(&op, &tp, &tp, &pq, &cfg).unwrap();
        let b = tensor_contraction_check_seq(&op, &tp, &tp, &pq, &cfg).unwrap();
        assert_eq!(a.max_ratio.to_bits(), b.max_ratio.to_bits());
    }

    #[test]
    fn grid_oracle_matches_finite_n_engine() {
        use crate::algebra::ComplexScalar;
        use crate::clt::finite_n_coefficient;
        use crate::operators::{k_matrix, semigroup_operator};
        let tp = two_point_measure();
        let om_exact = ComplexScalar::new(rat(0, 1), rat(1, 2));
        let km = k_matrix(&semigroup_operator(&tp, &om_exact, 3).unwrap(), &tp, 3).unwrap();
        let op = semigroup_operator_f64(&tp, om_exact.to_c64(), 3).unwrap();
        for n in 1..=6u64 {
            for l in 0..=3 {
                for m in 0..=3 {
                    let grid = tensor_grid_coefficient(&op, &tp, l, m, n).unwrap();
                    let engine = finite_n_coefficient(&km, l, m, n).unwrap().to_c64();
                    assert!(
                        (grid - engine).norm() <= 1e-12,
                        "l={l}, m={m}, N={n}: {grid} vs {engine}"
                    );
                }
            }
        }
    }

    #[test]
    fn grid_oracle_matches_engine_on_dense_operator() {
        // a non-semigroup operator with K[0][0] != 1 on a three-atom measure
        use crate::algebra::{rat_int, Polynomial};
        use crate::clt::finite_n_coefficient;
        use crate::operators::{k_matrix, OperatorSpec};
        let mu = Measure::from_atoms(vec![
            (rat_int(-1), rat(1, 3)),
            (rat_int(0), rat(1, 2)),
            (rat_int(2), rat(1, 6)),
        ])
        .unwrap();
        let op = OperatorSpec::new(vec![
            Polynomial::from_ints(&[1, 1]),        // K(1) = 1 + x
            Polynomial::from_ints(&[0, 0, 1]),     // K(x) = x^2
            Polynomial::from_ints(&[-1, 1]),       // K(x^2) = x - 1
            Polynomial::from_ints(&[0, -1, 0, 2]), // K(x^3) = 2x^3 - x
        ]);
        let km = k_matrix(&op, &mu, 3).unwrap();
        let opf = op.to_f64();
        for n in 1..=4u64 {
            for l in 0..=3 {
                for m in 0..=3 {
                    let grid = tensor_grid_coefficient(&opf, &mu, l, m, n).unwrap();
                    let engine = finite_n_coefficient(&km, l, m, n).unwrap().to_c64();
                    assert!(
                        (grid - engine).norm() <= 1e-12 * (1.0 + engine.norm()),
                        "l={l}, m={m}, N={n}: {grid} vs {engine}"
                    );
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_grid_oracle_agree() {
        let tp = two_point_measure();
        let op = semigroup_operator_f64(&tp, Complex64::new(0.0, 0.5), 3).unwrap();
        let a = tensor_grid_coefficient(&op, &tp, 3, 3, 6).unwrap();
        let b = tensor_grid_coefficient_seq(&op, &tp, 3, 3, 6).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn transference_demo_beckner() {
        let p = 1.5;
        let pq = pqs(p, ExponentPair::conjugate(p));
        let report =
            transference_demo(&two_point_measure(), beckner_omega(p), &pq).unwrap();
        assert!(report.hypotheses.pass());
        assert!(report.semigroup_form_recovered);
        assert!(report.epperson.slack.abs() <= 1e-12);
        assert!(report.epperson.ok);
        assert_eq!(report.empirical_contraction, Some(true));
        assert!(report.consistent);
    }

    #[test]
    fn transference_demo_skewed_l2() {
        let sk = Measure::from_atoms(vec![(rat(-2, 1), rat(1, 5)), (rat(1, 2), rat(4, 5))])
            .unwrap();
        let report = transference_demo(
            &sk,
            Complex64::new(1.0 / 3.0, 0.0),
            &pqs(2.0, 2.0),
        )
        .unwrap();
        assert!(report.semigroup_form_recovered);
        assert!(report.epperson.ok);
        assert!(report.consistent);
    }

    #[test]
    fn transference_demo_failure_case_is_consistent() {
        let report = transference_demo(
            &two_point_measure(),
            Complex64::new(2.0, 0.0),
            &pqs(2.0, 2.0),
        )
        .unwrap();
        assert!(!report.epperson.ok);
        assert!(report.scan.unwrap().max_ratio >= 2.0 - 1e-12);
        assert_eq!(report.empirical_contraction, Some(false));
        assert!(report.consistent);
    }
}
