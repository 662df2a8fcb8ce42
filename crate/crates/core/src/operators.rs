//! Linear operators on one-variable polynomials, their K-matrices against a
//! measure, and the orthogonality hypotheses on those matrices.
//!
//! An operator is specified by its images on monomials and extends linearly.
//! Its K-matrix against a measure `μ` is `K[l][m] = ∫ K(H_l) H_m dμ`, the
//! table everything downstream consumes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{float, ComplexScalar, Polynomial, Rational};
use num_traits::Zero;
use crate::hermite::hermite_table;
use crate::measures::{Measure, MeasureError};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("operator defined up to degree {cutoff}, degree {needed} required")]
    CutoffTooSmall { needed: usize, cutoff: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// An operator given by its monomial images: `images[j] = K(x^j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    images: Vec<Polynomial>,
}

impl OperatorSpec {
    pub fn new(images: Vec<Polynomial>) -> Self {
        assert!(!images.is_empty(), "operator needs at least the image of 1");
        Self { images }
    }

    /// The identity on polynomials of degree <= `cutoff`.
    pub fn identity(cutoff: usize) -> Self {
        Self::new(
            (0..=cutoff).map(|j| Polynomial::monomial(j, ComplexScalar::one())).collect(),
        )
    }

    /// Largest monomial degree with a defined image.
    pub fn cutoff(&self) -> usize {
        self.images.len() - 1
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Linear extension: `K(Σ c_j x^j) = Σ c_j images[j]`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial, OperatorError> {
        match p.degree() {
            None => Ok(Polynomial::zero()),
            Some(d) if d > self.cutoff() => {
                Err(OperatorError::CutoffTooSmall { needed: d, cutoff: self.cutoff() })
            }
            Some(_) => {
                let mut acc = Polynomial::zero();
                for (j, c) in p.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        acc = &acc + &self.images[j].scale(c);
                    }
                }
                Ok(acc)
            }
        }
    }

    /// `K(H_l)`.
    pub fn apply_hermite(&self, l: usize) -> Result<Polynomial, OperatorError> {
        self.apply(&crate::hermite::hermite_polynomial(l))
    }

    /// Operator composition `self ∘ inner` on the degrees where both are
    /// defined.
    pub fn compose(&self, inner: &OperatorSpec) -> Result<OperatorSpec, OperatorError> {
        let images = inner
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OperatorSpec::new(images))
    }

    pub fn to_f64(&self) -> FloatOperatorSpec {
        FloatOperatorSpec { images: self.images.iter().map(Polynomial::to_c64).collect() }
    }
}

/// Float mirror of [`OperatorSpec`].
#[derive(Debug, Clone)]
pub struct FloatOperatorSpec {
    images: Vec<Vec<Complex64>>,
}

impl FloatOperatorSpec {
    pub fn new(images: Vec<Vec<Complex64>>) -> Self {
        assert!(!images.is_empty());
        Self { images }
    }

    pub fn cutoff(&self) -> usize {
        self.images.len() - 1
    }

    pub fn images(&self) -> &[Vec<Complex64>] {
        &self.images
    }

    pub fn apply(&self, p: &[Complex64]) -> Result<Vec<Complex64>, OperatorError> {
        if p.len() > self.images.len() {
            return Err(OperatorError::CutoffTooSmall {
                needed: p.len() - 1,
                cutoff: self.cutoff(),
            });
        }
        let mut acc = Vec::new();
        for (j, c) in p.iter().enumerate() {
            if c.re != 0.0 || c.im != 0.0 {
                acc = float::add(&acc, &float::scale(&self.images[j], *c));
            }
        }
        Ok(acc)
    }

    /// `K(x^j)` evaluated at a point.
    pub fn eval_image(&self, j: usize, x: Complex64) -> Complex64 {
        float::eval(&self.images[j], x)
    }
}

/// Monic orthogonal polynomials of `μ` with their squared norms, up to
/// degree `cutoff` or the measure's finite rank, whichever is hit first.
fn spectral_basis(
    mu: &Measure,
    cutoff: usize,
) -> Result<Vec<(Polynomial, Rational)>, OperatorError> {
    let mut basis = Vec::new();
    for l in 0..=cutoff {
        match mu.orthogonal_polynomial(l) {
            Ok(p) => {
                let norm = mu.integrate_poly(&(&p * &p))?;
                debug_assert!(norm.is_real());
                basis.push((p, norm.re));
            }
            Err(MeasureError::DegenerateHankel { .. }) => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(basis)
}

/// Projection coefficients `a[j][l] = ∫ x^j P_l dμ / ∫ P_l^2 dμ` for
/// `l <= min(j, rank-1)`; zero for `l > j` by orthogonality.
fn projection_coefficients(
    mu: &Measure,
    basis: &[(Polynomial, Rational)],
    cutoff: usize,
) -> Result<Vec<Vec<Rational>>, OperatorError> {
    let mut rows = Vec::with_capacity(cutoff + 1);
    for j in 0..=cutoff {
        let xj = Polynomial::monomial(j, ComplexScalar::one());
        let mut row = Vec::new();
        for (p, norm) in basis.iter().take(j + 1) {
            let ip = mu.integrate_poly(&(&xj * p))?;
            debug_assert!(ip.is_real());
            row.push(ip.re / norm);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// The diagonal semigroup of `μ`: `P_l -> ω^l P_l` on the measure's monic
/// orthogonal polynomials, in spectral-projection form
/// `K(f) = Σ_l ω^l (∫ f P_l dμ / ∫ P_l^2 dμ) P_l`.
///
/// For a full-rank measure this is the basis-expansion semigroup; for an
/// atomic measure with `k` atoms the sum stops at `l = k - 1` and the
/// operator is defined for every polynomial degree.
pub fn semigroup_operator(
    mu: &Measure,
    omega: &ComplexScalar,
    cutoff: usize,
) -> Result<OperatorSpec, OperatorError> {
    let basis = spectral_basis(mu, cutoff)?;
    let coeffs = projection_coefficients(mu, &basis, cutoff)?;
    let mut omega_pow = vec![ComplexScalar::one()];
    for _ in 1..basis.len() {
        omega_pow.push(omega_pow.last().unwrap() * omega);
    }
    let images = coeffs
        .iter()
        .map(|row| {
            let mut img = Polynomial::zero();
            for (l, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    img = &img + &basis[l].0.scale(&omega_pow[l].scale(a));
                }
            }
            img
        })
        .collect();
    Ok(OperatorSpec::new(images))
}

/// Float mirror of [`semigroup_operator`] for irrational `ω`.
pub fn semigroup_operator_f64(
    mu: &Measure,
    omega: Complex64,
    cutoff: usize,
) -> Result<FloatOperatorSpec, OperatorError> {
    let basis = spectral_basis(mu, cutoff)?;
    let coeffs = projection_coefficients(mu, &basis, cutoff)?;
    let basis_f64: Vec<Vec<Complex64>> = basis.iter().map(|(p, _)| p.to_c64()).collect();
    let images = coeffs
        .iter()
        .map(|row| {
            let mut img = Vec::new();
            let mut pow = Complex64::new(1.0, 0.0);
            for (l, a) in row.iter().enumerate() {
                if l > 0 {
                    pow *= omega;
                }
                img = float::add(
                    &img,
                    &float::scale(&basis_f64[l], pow * crate::algebra::rational_to_f64(a)),
                );
            }
            img
        })
        .collect();
    Ok(FloatOperatorSpec::new(images))
}

/// Table of `K[l][m] = ∫ K(H_l) H_m dμ` for `l, m <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct KMatrix {
    entries: Vec<Vec<ComplexScalar>>,
    measure: Measure,
    cutoff: usize,
}

impl KMatrix {
    pub fn entry(&self, l: usize, m: usize) -> &ComplexScalar {
        &self.entries[l][m]
    }

    pub fn entries(&self) -> &[Vec<ComplexScalar>] {
        &self.entries
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn to_f64(&self) -> Vec<Vec<Complex64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(ComplexScalar::to_c64).collect())
            .collect()
    }
}

fn k_matrix_row(
    op: &OperatorSpec,
    mu: &Measure,
    hermites: &[Polynomial],
    l: usize,
    cutoff: usize,
) -> Result<Vec<ComplexScalar>, OperatorError> {
    let image = op.apply(&hermites[l])?;
    (0..=cutoff)
        .map(|m| Ok(mu.integrate_poly(&(&image * &hermites[m]))?))
        .collect()
}

/// Exact K-matrix of `op` against `mu`; rows are computed in parallel when
/// the `parallel` feature is enabled.
pub fn k_matrix(op: &OperatorSpec, mu: &Measure, cutoff: usize) -> Result<KMatrix, OperatorError> {
    if op.cutoff() < cutoff {
        return Err(OperatorError::CutoffTooSmall { needed: cutoff, cutoff: op.cutoff() });
    }
    let hermites = hermite_table(cutoff);
    let rows = par::map_range(cutoff + 1, |l| k_matrix_row(op, mu, &hermites, l, cutoff));
    let entries = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(KMatrix { entries, measure: mu.clone(), cutoff })
}

/// Always-sequential variant of [`k_matrix`]; produces identical results.
pub fn k_matrix_seq(
    op: &OperatorSpec,
    mu: &Measure,
    cutoff: usize,
) -> Result<KMatrix, OperatorError> {
    if op.cutoff() < cutoff {
        return Err(OperatorError::CutoffTooSmall { needed: cutoff, cutoff: op.cutoff() });
    }
    let hermites = hermite_table(cutoff);
    let rows = par::map_range_seq(cutoff + 1, |l| k_matrix_row(op, mu, &hermites, l, cutoff));
    let entries = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(KMatrix { entries, measure: mu.clone(), cutoff })
}

/// Float mirror of [`k_matrix`].
pub fn k_matrix_f64(
    op: &FloatOperatorSpec,
    mu: &Measure,
    cutoff: usize,
) -> Result<Vec<Vec<Complex64>>, OperatorError> {
    if op.cutoff() < cutoff {
        return Err(OperatorError::CutoffTooSmall { needed: cutoff, cutoff: op.cutoff() });
    }
    let hermites: Vec<Vec<Complex64>> =
        hermite_table(cutoff).iter().map(Polynomial::to_c64).collect();
    (0..=cutoff)
        .map(|l| {
            let image = op.apply(&hermites[l])?;
            (0..=cutoff)
                .map(|m| Ok(mu.integrate_poly_f64(&float::mul(&image, &hermites[m]))?))
                .collect()
        })
        .collect()
}

/// Values and verdicts for the orthogonality hypotheses on a K-matrix:
/// (1) `K[0][0] = 1` and `K[0][1] = K[1][0] = 0`, (2) `Re K[0][2] > -1`.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub k00: ComplexScalar,
    pub k01: ComplexScalar,
    pub k10: ComplexScalar,
    pub k02: ComplexScalar,
    pub k20: ComplexScalar,
    pub k11: ComplexScalar,
    /// `K[0][0] = 1` and `K[0][1] = K[1][0] = 0`.
    pub orthogonality_ok: bool,
    /// `Re K[0][2] > -1`.
    pub re_k02_ok: bool,
}

impl HypothesisReport {
    pub fn pass(&self) -> bool {
        self.orthogonality_ok && self.re_k02_ok
    }
}

/// Checks the orthogonality hypotheses. Requires `cutoff >= 2`.
pub fn check_hypotheses(km: &KMatrix) -> HypothesisReport {
    assert!(km.cutoff() >= 2, "hypothesis check needs K entries up to degree 2");
    let k00 = km.entry(0, 0).clone();
    let k01 = km.entry(0, 1).clone();
    let k10 = km.entry(1, 0).clone();
    let k02 = km.entry(0, 2).clone();
    let orthogonality_ok = k00.is_one() && k01.is_zero() && k10.is_zero();
    let re_k02_ok = k02.re > crate::algebra::rat_int(-1);
    HypothesisReport {
        k00,
        k01,
        k10,
        k02,
        k20: km.entry(2, 0).clone(),
        k11: km.entry(1, 1).clone(),
        orthogonality_ok,
        re_k02_ok,
    }
}

/// Float mirror of [`check_hypotheses`] with an equality tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReportF64 {
    pub k00: float::C64Parts,
    pub k01: float::C64Parts,
    pub k10: float::C64Parts,
    pub k02: float::C64Parts,
    pub k20: float::C64Parts,
    pub k11: float::C64Parts,
    pub orthogonality_ok: bool,
    pub re_k02_ok: bool,
}

impl HypothesisReportF64 {
    pub fn pass(&self) -> bool {
        self.orthogonality_ok && self.re_k02_ok
    }
}

pub fn check_hypotheses_f64(entries: &[Vec<Complex64>], tol: f64) -> HypothesisReportF64 {
    assert!(entries.len() >= 3, "hypothesis check needs K entries up to degree 2");
    let pair = float::C64Parts::from;
    let k00 = entries[0][0];
    let k01 = entries[0][1];
    let k10 = entries[1][0];
    let k02 = entries[0][2];
    HypothesisReportF64 {
        k00: pair(k00),
        k01: pair(k01),
        k10: pair(k10),
        k02: pair(k02),
        k20: pair(entries[2][0]),
        k11: pair(entries[1][1]),
        orthogonality_ok: (k00 - Complex64::new(1.0, 0.0)).norm() <= tol
            && k01.norm() <= tol
            && k10.norm() <= tol,
        re_k02_ok: k02.re > -1.0,
    }
}

// --- file format ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum OperatorFile {
    Semigroup { omega: ComplexScalar },
    MonomialImages { images: Vec<Polynomial> },
}

/// Operator description as stored on disk: either a semigroup parameter
/// (materialized against a measure at a chosen cutoff) or explicit monomial
/// images.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorInput {
    Semigroup { omega: ComplexScalar },
    MonomialImages { images: Vec<Polynomial> },
}

impl OperatorInput {
    /// Builds the concrete operator for a measure at the given cutoff.
    pub fn materialize(&self, mu: &Measure, cutoff: usize) -> Result<OperatorSpec, OperatorError> {
        match self {
            OperatorInput::Semigroup { omega } => semigroup_operator(mu, omega, cutoff),
            OperatorInput::MonomialImages { images } => Ok(OperatorSpec::new(images.clone())),
        }
    }
}

impl Serialize for OperatorInput {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let file = match self {
            OperatorInput::Semigroup { omega } => OperatorFile::Semigroup { omega: omega.clone() },
            OperatorInput::MonomialImages { images } => {
                OperatorFile::MonomialImages { images: images.clone() }
            }
        };
        file.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorInput {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match OperatorFile::deserialize(d)? {
            OperatorFile::Semigroup { omega } => OperatorInput::Semigroup { omega },
            OperatorFile::MonomialImages { images } => OperatorInput::MonomialImages { images },
        })
    }
}

#[derive(Serialize, Deserialize)]
struct KMatrixFile {
    cutoff: usize,
    measure: Measure,
    entries: Vec<Vec<ComplexScalar>>,
}

impl Serialize for KMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        KMatrixFile {
            cutoff: self.cutoff,
            measure: self.measure.clone(),
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let f = KMatrixFile::deserialize(d)?;
        if f.entries.len() != f.cutoff + 1
            || f.entries.iter().any(|row| row.len() != f.cutoff + 1)
        {
            return Err(D::Error::custom(format!(
                "K-matrix entries must form a {0}x{0} table",
                f.cutoff + 1
            )));
        }
        Ok(KMatrix { entries: f.entries, measure: f.measure, cutoff: f.cutoff })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::hermite::hermite_polynomial;
    use crate::measures::two_point_measure;

    fn skewed_two_atom() -> Measure {
        Measure::from_atoms(vec![(rat(-2, 1), rat(1, 5)), (rat(1, 2), rat(4, 5))]).unwrap()
    }

    fn omega_i_half() -> ComplexScalar {
        ComplexScalar::new(rat_int(0), rat(1, 2))
    }

    #[test]
    fn two_point_semigroup_is_the_two_point_smoothing_operator() {
        // K(f) = ∫f dν + ω x ∫xf dν on the two-point space
        let tp = two_point_measure();
        let om = omega_i_half();
        let k = semigroup_operator(&tp, &om, 4).unwrap();
        assert_eq!(k.images()[0], Polynomial::one());
        assert_eq!(k.images()[1], Polynomial::x().scale(&om));
        assert_eq!(k.images()[2], Polynomial::one());
        assert_eq!(k.images()[3], Polynomial::x().scale(&om));
    }

    #[test]
    fn gaussian_semigroup_is_diagonal_on_hermite() {
        let g = Measure::gaussian();
        let om = omega_i_half();
        let k = semigroup_operator(&g, &om, 6).unwrap();
        for l in 0..=6 {
            let img = k.apply(&hermite_polynomial(l)).unwrap();
            assert_eq!(img, hermite_polynomial(l).scale(&om.powu(l as u32)), "l={l}");
        }
    }

    #[test]
    fn semigroup_at_one_is_identity() {
        for mu in [Measure::gaussian(), skewed_two_atom()] {
            let k = semigroup_operator(&mu, &ComplexScalar::one(), 5).unwrap();
            let max = mu.finite_rank().map_or(5, |r| r - 1);
            for j in 0..=max {
                let xj = Polynomial::monomial(j, ComplexScalar::one());
                assert_eq!(k.apply(&xj).unwrap(), xj);
            }
        }
    }

    #[test]
    fn k_matrix_of_two_point_semigroup() {
        let tp = two_point_measure();
        let om = omega_i_half();
        let km = k_matrix(&semigroup_operator(&tp, &om, 4).unwrap(), &tp, 4).unwrap();
        assert!(km.entry(0, 0).is_one());
        assert_eq!(km.entry(1, 1), &om);
        for (l, m) in [(0, 1), (1, 0), (0, 2), (2, 0)] {
            assert!(km.entry(l, m).is_zero(), "K[{l}][{m}]");
        }
        // row 2 vanishes identically: H_2 = x^2 - 1 is 0 on the support
        for m in 0..=4 {
            assert!(km.entry(2, m).is_zero());
        }
    }

    #[test]
    fn k_matrix_of_gaussian_semigroup_is_diagonal() {
        let g = Measure::gaussian();
        let om = omega_i_half();
        let km = k_matrix(&semigroup_operator(&g, &om, 5).unwrap(), &g, 5).unwrap();
        for l in 0..=5 {
            for m in 0..=5 {
                let expected = if l == m {
                    om.powu(l as u32)
                        .scale(&Rational::from_integer(crate::algebra::factorial(l)))
                } else {
                    ComplexScalar::zero()
                };
                assert_eq!(km.entry(l, m), &expected, "({l},{m})");
            }
        }
    }

    #[test]
    fn k_matrix_of_skewed_semigroup() {
        let sk = skewed_two_atom();
        let om = ComplexScalar::from_ratio(1, 3);
        let km = k_matrix(&semigroup_operator(&sk, &om, 4).unwrap(), &sk, 4).unwrap();
        assert!(km.entry(0, 0).is_one());
        assert_eq!(km.entry(1, 1), &om);
        for (l, m) in [(0, 1), (1, 0), (0, 2), (2, 0)] {
            assert!(km.entry(l, m).is_zero(), "K[{l}][{m}]");
        }
        // the measure is not symmetric: odd-total entries appear
        assert_eq!(km.entry(1, 2), &om.scale(&rat(-3, 2)));
    }

    #[test]
    fn hypothesis_check_examples() {
        let tp = two_point_measure();
        let km = k_matrix(&semigroup_operator(&tp, &omega_i_half(), 2).unwrap(), &tp, 2).unwrap();
        let rep = check_hypotheses(&km);
        assert!(rep.pass());
        assert!(rep.k02.is_zero());

        // K(1) = 2 violates condition (1)
        let mut images = OperatorSpec::identity(2).images().to_vec();
        images[0] = Polynomial::from_ints(&[2]);
        let km = k_matrix(&OperatorSpec::new(images), &Measure::gaussian(), 2).unwrap();
        let rep = check_hypotheses(&km);
        assert!(!rep.orthogonality_ok && !rep.pass());

        // K(1) = 1 - (x^2-1)/2 gives K[0][2] = -1: boundary fails condition (2)
        let mut images = OperatorSpec::identity(2).images().to_vec();
        images[0] = &Polynomial::one()
            - &hermite_polynomial(2).scale(&ComplexScalar::from_ratio(1, 2));
        let km = k_matrix(&OperatorSpec::new(images), &Measure::gaussian(), 2).unwrap();
        let rep = check_hypotheses(&km);
        assert_eq!(rep.k02, ComplexScalar::from_int(-1));
        assert!(rep.orthogonality_ok && !rep.re_k02_ok && !rep.pass());
    }

    #[test]
    fn semigroup_law_on_k_matrices() {
        // K_ω ∘ K_ω' = K_ωω', compared through the K-matrices
        let om1 = omega_i_half();
        let om2 = ComplexScalar::from_ratio(1, 3);
        let prod = &om1 * &om2;
        for mu in [two_point_measure(), skewed_two_atom(), Measure::gaussian()] {
            let k1 = semigroup_operator(&mu, &om1, 4).unwrap();
            let k2 = semigroup_operator(&mu, &om2, 4).unwrap();
            let k12 = k1.compose(&k2).unwrap();
            let direct = semigroup_operator(&mu, &prod, 4).unwrap();
            assert_eq!(
                k_matrix(&k12, &mu, 4).unwrap().entries(),
                k_matrix(&direct, &mu, 4).unwrap().entries()
            );
        }
    }

    #[test]
    fn corollary_hypotheses_hold_for_semigroups() {
        let three_atom = Measure::from_atoms(vec![
            (rat_int(-1), rat(1, 3)),
            (rat_int(0), rat(1, 2)),
            (rat_int(2), rat(1, 6)),
        ])
        .unwrap();
        let omegas = [
            ComplexScalar::from_ratio(2, 7),
            ComplexScalar::new(rat(1, 4), rat(-1, 5)),
            omega_i_half(),
        ];
        for mu in [Measure::gaussian(), three_atom, two_point_measure(), skewed_two_atom()] {
            for om in &omegas {
                let km = k_matrix(&semigroup_operator(&mu, om, 3).unwrap(), &mu, 3).unwrap();
                let rep = check_hypotheses(&km);
                assert!(rep.pass());
                assert!(rep.k02.is_zero() && rep.k20.is_zero());
                assert_eq!(&rep.k11, om);
            }
        }
    }

    #[test]
    fn k_matrix_is_linear_in_the_operator() {
        let g = Measure::gaussian();
        let a = semigroup_operator(&g, &omega_i_half(), 3).unwrap();
        let b = OperatorSpec::identity(3);
        let c = ComplexScalar::from_ratio(2, 5);
        let combo = OperatorSpec::new(
            (0..=3)
                .map(|j| &a.images()[j].scale(&c) + &b.images()[j])
                .collect(),
        );
        let ka = k_matrix(&a, &g, 3).unwrap();
        let kb = k_matrix(&b, &g, 3).unwrap();
        let kc = k_matrix(&combo, &g, 3).unwrap();
        for l in 0..=3 {
            for m in 0..=3 {
                assert_eq!(kc.entry(l, m), &(&(ka.entry(l, m) * &c) + kb.entry(l, m)));
            }
        }
    }

    #[test]
    fn parallel_and_sequential_k_matrix_agree() {
        let g = Measure::gaussian();
        let k = semigroup_operator(&g, &omega_i_half(), 6).unwrap();
        assert_eq!(k_matrix(&k, &g, 6).unwrap(), k_matrix_seq(&k, &g, 6).unwrap());
    }

    #[test]
    fn float_mirror_tracks_exact_k_matrix() {
        let tp = two_point_measure();
        let om = omega_i_half();
        let exact = k_matrix(&semigroup_operator(&tp, &om, 4).unwrap(), &tp, 4).unwrap();
        let float =
            k_matrix_f64(&semigroup_operator_f64(&tp, om.to_c64(), 4).unwrap(), &tp, 4).unwrap();
        for l in 0..=4 {
            for m in 0..=4 {
                assert!((float[l][m] - exact.entry(l, m).to_c64()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn moments_measure_reports_exhausted_range() {
        // semigroup on a moments-kind measure needs moments beyond what a
        // short sequence stores; the error is surfaced, not papered over
        let short = Measure::from_moments(vec![
            crate::algebra::rat_int(1),
            crate::algebra::rat_int(0),
            crate::algebra::rat_int(1),
        ])
        .unwrap();
        let err = semigroup_operator(&short, &ComplexScalar::one(), 4).unwrap_err();
        assert!(matches!(
            err,
            OperatorError::Measure(MeasureError::MomentUnavailable { .. })
        ));
        // with enough Gaussian moments the semigroup matches the exact
        // Gaussian-kind construction
        let moments: Vec<Rational> =
            (0..=8).map(|k| Measure::gaussian().moment(k).unwrap()).collect();
        let gm = Measure::from_moments(moments).unwrap();
        let a = semigroup_operator(&gm, &omega_i_half(), 4).unwrap();
        let b = semigroup_operator(&Measure::gaussian(), &omega_i_half(), 4).unwrap();
        assert_eq!(a.images(), b.images());
    }

    #[test]
    fn operator_json_shapes() {
        let s = r#"{"type":"semigroup","omega":{"re":"0","im":"1/2"}}"#;
        let op: OperatorInput = serde_json::from_str(s).unwrap();
        assert_eq!(op, OperatorInput::Semigroup { omega: omega_i_half() });
        let s = r#"{"type":"monomial_images","images":[["1"],["0","1/2"]]}"#;
        let op: OperatorInput = serde_json::from_str(s).unwrap();
        let OperatorInput::MonomialImages { images } = op else { panic!() };
        assert_eq!(images[1], Polynomial::x().scale(&ComplexScalar::from_ratio(1, 2)));
        // K-matrix JSON roundtrip
        let tp = two_point_measure();
        let km = k_matrix(&semigroup_operator(&tp, &omega_i_half(), 3).unwrap(), &tp, 3).unwrap();
        let json = serde_json::to_string(&km).unwrap();
        let back: KMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, km);
    }
}
