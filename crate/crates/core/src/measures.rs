//! Standardized probability measures represented by exact moment sequences.
//!
//! A measure here is one of three kinds: an atomic measure given by its
//! support points and weights, the standard Gaussian, or a raw moment
//! sequence. All kinds expose exact moments; every integral the rest of the
//! crate needs is the pairing of a polynomial against those moments.
//! "Standardized" means zero mean, unit variance: `m_0 = 1`, `m_1 = 0`,
//! `m_2 = 1`.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{double_factorial, rational_to_f64, ComplexScalar, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("measure is not standardized: {0}")]
    NonStandardized(String),
    #[error("atom weights must be positive and sum to 1 ({0})")]
    BadWeights(String),
    #[error("atoms must be pairwise distinct")]
    DuplicateAtoms,
    #[error("operation requires an atomic measure")]
    NotAtomic,
    #[error("no monic orthogonal polynomial of degree {degree}: Hankel system degenerate")]
    DegenerateHankel { degree: usize },
    #[error("moment of order {k} unavailable (sequence stores orders 0..={available})")]
    MomentUnavailable { k: usize, available: usize },
    #[error("Hankel minor of order {order} is negative; not a moment sequence")]
    NonPsdHankel { order: usize },
}

/// Exact moment sequence `moments[k] = ∫ x^k dμ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    moments: Vec<Rational>,
}

impl MomentSequence {
    /// Validates the standardized conditions and nonnegativity of every
    /// leading principal Hankel minor that the stored range determines.
    pub fn new(moments: Vec<Rational>) -> Result<Self, MeasureError> {
        if moments.len() < 3 {
            return Err(MeasureError::NonStandardized(
                "need at least moments of orders 0, 1, 2".into(),
            ));
        }
        if !moments[0].is_one() {
            return Err(MeasureError::NonStandardized(format!(
                "total mass is {}, expected 1",
                moments[0]
            )));
        }
        if !moments[1].is_zero() {
            return Err(MeasureError::NonStandardized(format!(
                "mean is {}, expected 0",
                moments[1]
            )));
        }
        if !moments[2].is_one() {
            return Err(MeasureError::NonStandardized(format!(
                "variance is {}, expected 1",
                moments[2]
            )));
        }
        let max_order = (moments.len() - 1) / 2;
        for r in 0..=max_order {
            let det = hankel_det(&moments, r);
            if det.is_negative() {
                return Err(MeasureError::NonPsdHankel { order: r });
            }
        }
        Ok(Self { moments })
    }

    pub fn moments(&self) -> &[Rational] {
        &self.moments
    }
}

/// Determinant of the `(r+1) x (r+1)` Hankel matrix `[m_{i+j}]`.
fn hankel_det(moments: &[Rational], r: usize) -> Rational {
    let mat: Vec<Vec<Rational>> =
        (0..=r).map(|i| (0..=r).map(|j| moments[i + j].clone()).collect()).collect();
    det(mat)
}

/// Exact determinant by Gaussian elimination with nonzero-pivot search.
fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut sign = Rational::one();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = m[col][col].clone();
        acc *= &pivot;
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] / &pivot;
            for k in col..n {
                let sub = &factor * &m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    sign * acc
}

/// Atomic measure: distinct support points with positive weights summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicMeasure {
    atoms: Vec<(Rational, Rational)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(Rational, Rational)>) -> Result<Self, MeasureError> {
        if atoms.is_empty() {
            return Err(MeasureError::BadWeights("no atoms".into()));
        }
        let mut total = Rational::zero();
        for (_, w) in &atoms {
            if !w.is_positive() {
                return Err(MeasureError::BadWeights(format!("weight {w} is not positive")));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(MeasureError::BadWeights(format!("weights sum to {total}")));
        }
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                if atoms[i].0 == atoms[j].0 {
                    return Err(MeasureError::DuplicateAtoms);
                }
            }
        }
        let m = Self { atoms };
        let mean = m.moment(1);
        if !mean.is_zero() {
            return Err(MeasureError::NonStandardized(format!("mean is {mean}, expected 0")));
        }
        let var = m.moment(2);
        if !var.is_one() {
            return Err(MeasureError::NonStandardized(format!(
                "variance is {var}, expected 1"
            )));
        }
        Ok(m)
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn moment(&self, k: usize) -> Rational {
        let mut acc = Rational::zero();
        for (x, w) in &self.atoms {
            let mut p = Rational::one();
            for _ in 0..k {
                p *= x;
            }
            acc += w * p;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Atomic(AtomicMeasure),
    Gaussian,
    Moments(MomentSequence),
}

/// A standardized probability measure, known through its exact moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    kind: Kind,
}

impl Measure {
    /// The standard normal distribution: `m_{2k} = (2k-1)!!`, odd moments 0.
    pub fn gaussian() -> Self {
        Self { kind: Kind::Gaussian }
    }

    /// Builds and validates an atomic measure.
    pub fn from_atoms(atoms: Vec<(Rational, Rational)>) -> Result<Self, MeasureError> {
        Ok(Self { kind: Kind::Atomic(AtomicMeasure::new(atoms)?) })
    }

    /// Builds a measure from a raw moment sequence, validated up to the
    /// stored range.
    pub fn from_moments(moments: Vec<Rational>) -> Result<Self, MeasureError> {
        Ok(Self { kind: Kind::Moments(MomentSequence::new(moments)?) })
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.kind, Kind::Atomic(_))
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, Kind::Gaussian)
    }

    pub fn atoms(&self) -> Option<&[(Rational, Rational)]> {
        match &self.kind {
            Kind::Atomic(a) => Some(a.atoms()),
            _ => None,
        }
    }

    /// Number of atoms for atomic measures; `None` for the other kinds
    /// (treated as infinite rank).
    pub fn finite_rank(&self) -> Option<usize> {
        self.atoms().map(<[_]>::len)
    }

    /// Exact `k`-th moment.
    pub fn moment(&self, k: usize) -> Result<Rational, MeasureError> {
        match &self.kind {
            Kind::Atomic(a) => Ok(a.moment(k)),
            Kind::Gaussian => Ok(if k % 2 == 1 {
                Rational::zero()
            } else {
                Rational::from_integer(double_factorial(k as i64 - 1))
            }),
            Kind::Moments(m) => m
                .moments
                .get(k)
                .cloned()
                .ok_or(MeasureError::MomentUnavailable { k, available: m.moments.len() - 1 }),
        }
    }

    /// `∫ p dμ = Σ_k coeff_k m_k`, exact.
    pub fn integrate_poly(&self, p: &Polynomial) -> Result<ComplexScalar, MeasureError> {
        let mut acc = ComplexScalar::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &c.scale(&self.moment(k)?);
            }
        }
        Ok(acc)
    }

    /// Float mirror of [`Measure::integrate_poly`].
    pub fn integrate_poly_f64(&self, p: &[Complex64]) -> Result<Complex64, MeasureError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in p.iter().enumerate() {
            if c.re != 0.0 || c.im != 0.0 {
                acc += c * rational_to_f64(&self.moment(k)?);
            }
        }
        Ok(acc)
    }

    /// The monic orthogonal polynomial of degree `l`, solving the moment
    /// Gram system exactly. Fails with [`MeasureError::DegenerateHankel`]
    /// when the system is singular or the solution has zero norm (finite
    /// support exhausted).
    pub fn orthogonal_polynomial(&self, l: usize) -> Result<Polynomial, MeasureError> {
        if self.is_gaussian() {
            return Ok(crate::hermite::hermite_polynomial(l));
        }
        if l == 0 {
            // P_0 = 1 always; its norm is the total mass 1.
            return Ok(Polynomial::one());
        }
        // moments up to 2l are needed (system + norm check)
        let m: Vec<Rational> = (0..=2 * l).map(|k| self.moment(k)).collect::<Result<_, _>>()?;
        let mut mat: Vec<Vec<Rational>> =
            (0..l).map(|i| (0..l).map(|j| m[i + j].clone()).collect()).collect();
        let mut rhs: Vec<Rational> = (0..l).map(|i| -m[i + l].clone()).collect();
        solve_in_place(&mut mat, &mut rhs)
            .ok_or(MeasureError::DegenerateHankel { degree: l })?;
        let mut coeffs = rhs;
        coeffs.push(Rational::one());
        let p = Polynomial::from_rationals(coeffs);
        let norm = self.integrate_poly(&(&p * &p))?;
        if norm.is_zero() {
            return Err(MeasureError::DegenerateHankel { degree: l });
        }
        Ok(p)
    }

    /// `(Σ_i w_i |f(x_i)|^p)^{1/p}` for atomic measures.
    pub fn lp_norm(&self, f: &Polynomial, p: f64) -> Result<f64, MeasureError> {
        assert!(p > 0.0, "lp_norm requires p > 0");
        let atoms = self.atoms().ok_or(MeasureError::NotAtomic)?;
        let coeffs = f.to_c64();
        let mut acc = 0.0;
        for (x, w) in atoms {
            let v = crate::algebra::float::eval(&coeffs, Complex64::new(rational_to_f64(x), 0.0));
            acc += rational_to_f64(w) * v.norm().powf(p);
        }
        Ok(acc.powf(1.0 / p))
    }
}

/// Solves `mat * x = rhs` in place over the rationals; `None` if singular.
fn solve_in_place(mat: &mut [Vec<Rational>], rhs: &mut [Rational]) -> Option<()> {
    let n = mat.len();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !mat[r][col].is_zero())?;
        if pivot_row != col {
            mat.swap(pivot_row, col);
            rhs.swap(pivot_row, col);
        }
        let pivot = mat[col][col].clone();
        for row in 0..n {
            if row == col || mat[row][col].is_zero() {
                continue;
            }
            let factor = &mat[row][col] / &pivot;
            for k in col..n {
                let sub = &factor * &mat[col][k];
                mat[row][k] -= sub;
            }
            let sub = &factor * &rhs[col];
            rhs[row] -= sub;
        }
    }
    for (i, r) in rhs.iter_mut().enumerate() {
        *r = &*r / &mat[i][i];
    }
    Some(())
}

/// The uniform two-point measure on `{-1, 1}`.
pub fn two_point_measure() -> Measure {
    Measure::from_atoms(vec![
        (-Rational::one(), Rational::new(1.into(), 2.into())),
        (Rational::one(), Rational::new(1.into(), 2.into())),
    ])
    .expect("two-point measure is standardized")
}

// --- file format ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum MeasureFile {
    Atomic { atoms: Vec<AtomFile> },
    Gaussian,
    Moments { moments: Vec<String> },
}

#[derive(Serialize, Deserialize)]
struct AtomFile {
    x: String,
    w: String,
}

impl Serialize for Measure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let file = match &self.kind {
            Kind::Atomic(a) => MeasureFile::Atomic {
                atoms: a
                    .atoms()
                    .iter()
                    .map(|(x, w)| AtomFile { x: x.to_string(), w: w.to_string() })
                    .collect(),
            },
            Kind::Gaussian => MeasureFile::Gaussian,
            Kind::Moments(m) => MeasureFile::Moments {
                moments: m.moments().iter().map(Rational::to_string).collect(),
            },
        };
        file.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let file = MeasureFile::deserialize(deserializer)?;
        let parse = |s: &str| crate::algebra::parse_rational(s).map_err(D::Error::custom);
        match file {
            MeasureFile::Atomic { atoms } => {
                let atoms = atoms
                    .iter()
                    .map(|a| Ok((parse(&a.x)?, parse(&a.w)?)))
                    .collect::<Result<Vec<_>, D::Error>>()?;
                Measure::from_atoms(atoms).map_err(D::Error::custom)
            }
            MeasureFile::Gaussian => Ok(Measure::gaussian()),
            MeasureFile::Moments { moments } => {
                let moments =
                    moments.iter().map(|s| parse(s)).collect::<Result<Vec<_>, D::Error>>()?;
                Measure::from_moments(moments).map_err(D::Error::custom)
            }
        }
    }
}
