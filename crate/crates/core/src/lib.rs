//! Operator central-limit toolkit.
//!
//! Given a standardized probability measure (zero mean, unit variance,
//! exact rational moments) and a linear operator on one-variable polynomials,
//! this crate computes:
//!
//! * the operator's K-matrix `K[l][m] = ∫ K(H_l) H_m dα` in the Hermite basis,
//! * finite-`N` tensorized coefficients `c[l][m](N)` and their closed-form
//!   limits,
//! * the centered Gaussian operator `M_tau T_omega S_lambda` identified by
//!   those limits, together with its Gaussian-kernel form, and
//! * hypercontractivity diagnostics: Epperson's condition, two-point
//!   contraction ratio scans, and tensor-power contraction checks.
//!
//! Exact rational arithmetic is used everywhere a value can be exact;
//! floating-point mirrors cover irrational parameters. Independent
//! brute-force oracles (composition sums, support-grid summation, direct
//! Gaussian integrals) back every closed form and live next to the
//! operations they check.
//!
//! With the default `parallel` feature the data-parallel inner loops (grid
//! scans, K-matrix tables, partition enumeration, tensor trials) run on
//! rayon; disabling the feature falls back to sequential code paths with
//! identical results. The `*_seq` variants of the hot entry points are
//! always available for comparison.

pub mod algebra;
pub mod clt;
pub mod gaussian;
pub mod hermite;
pub mod hyper;
pub mod measures;
pub mod operators;
mod par;

pub use algebra::{Complex64, ComplexScalar, Polynomial, Rational, Scalar};
pub use clt::{FiniteNValue, GaussianParams};
pub use hermite::HermiteExpansion;
pub use measures::Measure;
pub use operators::{KMatrix, OperatorSpec};
pub use par::init_parallelism_from_env;
