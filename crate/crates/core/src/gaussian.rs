//! The centered Gaussian operator family `M_tau T_omega S_lambda`:
//! application to polynomials, inner products against the Gaussian weight,
//! composition identities, and the equivalent Gaussian-kernel form
//! `G(x,y) = exp[-(A/2)x^2 - (B/2)y^2 + Cxy + D]`.
//!
//! `T_omega` scales the Hermite coefficient of `H_l` by `omega^l`,
//! `S_lambda` rescales the argument, and `M_tau` multiplies by
//! `sqrt(1+tau) exp(-tau x^2/2)` (defined for `Re tau > -1`).

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{double_factorial, float, ComplexScalar, Polynomial, Rational, Scalar};
use crate::clt::{CltError, CoefficientTable, GaussianParams, Provenance, TableEntry};
use crate::hermite::{from_hermite, from_hermite_f64, to_hermite, to_hermite_f64, HermiteExpansion};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussianError {
    #[error("kernel form requires lambda != 0 and omega^2 != 1")]
    DegenerateKernel,
    #[error("composition requires 1 - lambda^2 (1 - omega^2) != 0")]
    DegenerateComposition,
    #[error("integral diverges: Re(1 + B) must be positive, got {0}")]
    DivergentIntegral(f64),
    #[error("inner product diverges: Re(1 + tau) must be positive, got {0}")]
    DivergentInnerProduct(f64),
    #[error("kernel prefactor mismatch: exp(2D) = {got:?} but (1+tau)/(lambda^2(1-omega^2)) = {expected:?}")]
    PrefactorMismatch { expected: Complex64, got: Complex64 },
    #[error(transparent)]
    Params(#[from] CltError),
}

/// Multiplies the Hermite coefficient of `H_l` by `omega^l`.
pub fn apply_t(e: &HermiteExpansion, omega: &ComplexScalar) -> HermiteExpansion {
    let mut pow = ComplexScalar::one();
    let coeffs = e
        .coeffs()
        .iter()
        .enumerate()
        .map(|(l, c)| {
            if l > 0 {
                pow = &pow * omega;
            }
            c * &pow
        })
        .collect();
    HermiteExpansion::new(coeffs)
}

/// Float mirror of [`apply_t`] on raw Hermite coefficients.
pub fn apply_t_f64(e: &[Complex64], omega: Complex64) -> Vec<Complex64> {
    let mut pow = Complex64::new(1.0, 0.0);
    float::trim(
        e.iter()
            .enumerate()
            .map(|(l, c)| {
                if l > 0 {
                    pow *= omega;
                }
                c * pow
            })
            .collect(),
    )
}

/// Polynomial part of a centered Gaussian operator image, exact or float.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyPart {
    Exact(Polynomial),
    Float(Vec<Complex64>),
}

impl PolyPart {
    pub fn to_c64(&self) -> Vec<Complex64> {
        match self {
            PolyPart::Exact(p) => p.to_c64(),
            PolyPart::Float(v) => v.clone(),
        }
    }
}

/// A function of the form `sqrt(1+tau) e^{-tau x^2/2} poly(x)`.
///
/// With `tau = 0` the prefactor is 1 and this is a plain polynomial. The
/// prefactor itself may be irrational, but every inner product against the
/// Gaussian weight combines it into integer powers of `1+tau`, so inner
/// products stay exact whenever `tau` and the polynomial are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolynomial {
    tau: Scalar,
    poly: PolyPart,
}

impl GaussianPolynomial {
    pub fn new(tau: Scalar, poly: PolyPart) -> Self {
        Self { tau, poly }
    }

    /// A plain polynomial (`tau = 0`, prefactor 1).
    pub fn plain(p: Polynomial) -> Self {
        Self { tau: Scalar::zero(), poly: PolyPart::Exact(p) }
    }

    pub fn tau(&self) -> &Scalar {
        &self.tau
    }

    pub fn poly(&self) -> &PolyPart {
        &self.poly
    }

    /// `sqrt(1+tau)`, exact when a rational-complex root exists.
    pub fn prefactor(&self) -> Scalar {
        (&Scalar::one() + &self.tau).sqrt()
    }

    /// Pointwise evaluation in float arithmetic.
    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let tau = self.tau.to_c64();
        let pre = (Complex64::new(1.0, 0.0) + tau).sqrt();
        pre * (-tau * x * x / 2.0).exp() * float::eval(&self.poly.to_c64(), x)
    }
}

/// Applies `M_tau T_omega S_lambda` to a polynomial. The polynomial part is
/// computed exactly when `omega` and `lambda` are exact.
pub fn apply_c(gp: &GaussianParams, f: &Polynomial) -> GaussianPolynomial {
    let poly = match (gp.omega().as_exact(), gp.lambda().as_exact()) {
        (Some(omega), Some(lambda)) => {
            PolyPart::Exact(from_hermite(&apply_t(&to_hermite(&f.scale_arg(lambda)), omega)))
        }
        _ => {
            let scaled = float::scale_arg(&f.to_c64(), gp.lambda().to_c64());
            PolyPart::Float(from_hermite_f64(&apply_t_f64(
                &to_hermite_f64(&scaled),
                gp.omega().to_c64(),
            )))
        }
    };
    GaussianPolynomial { tau: gp.tau().clone(), poly }
}

/// `∫ gp(x) q(x) dγ(x)` in closed form, using
/// `∫ x^k e^{-tau x^2/2} dγ = (1+tau)^{-(k+1)/2} (k-1)!!` for even `k`
/// (odd moments vanish). Together with the prefactor `sqrt(1+tau)` every
/// term carries the integer power `(1+tau)^{-k/2}`, so the result is exact
/// on the exact path.
pub fn inner_product_gamma(
    gp: &GaussianPolynomial,
    q: &Polynomial,
) -> Result<Scalar, GaussianError> {
    let re_one_plus_tau = 1.0 + gp.tau.to_c64().re;
    if re_one_plus_tau <= 0.0 {
        return Err(GaussianError::DivergentInnerProduct(re_one_plus_tau));
    }
    match (&gp.tau, &gp.poly) {
        (Scalar::Exact(tau), PolyPart::Exact(p)) => {
            let r = p * q;
            let inv = (&ComplexScalar::one() + tau).inv().expect("Re(1+tau) > 0");
            let mut acc = ComplexScalar::zero();
            for k in (0..=r.degree().unwrap_or(0)).step_by(2) {
                let c = r.coeff(k);
                if c.is_zero() {
                    continue;
                }
                let moment = Rational::from_integer(double_factorial(k as i64 - 1));
                acc = &acc + &(&c.scale(&moment) * &inv.powu((k / 2) as u32));
            }
            Ok(Scalar::Exact(acc))
        }
        _ => {
            let r = float::mul(&gp.poly.to_c64(), &q.to_c64());
            let sqrt_w = (Complex64::new(1.0, 0.0) + gp.tau.to_c64()).sqrt();
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, c) in r.iter().enumerate().step_by(2) {
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                let moment = crate::algebra::rational_to_f64(&Rational::from_integer(
                    double_factorial(k as i64 - 1),
                ));
                acc += c * moment * sqrt_w.powi(-(k as i32));
            }
            Ok(Scalar::Float(acc))
        }
    }
}

/// Coefficient table `c[l][m] = ∫ C(H_l) H_m dγ` computed by direct Gaussian
/// integration; the independent cross-check for the closed-form limits.
pub fn coefficients_direct(
    gp: &GaussianParams,
    cutoff: usize,
) -> Result<CoefficientTable, GaussianError> {
    let hermites = crate::hermite::hermite_table(cutoff);
    let rows = par::map_range(cutoff + 1, |l| {
        let image = apply_c(gp, &hermites[l]);
        (0..=cutoff)
            .map(|m| {
                inner_product_gamma(&image, &hermites[m]).map(|value| TableEntry {
                    value,
                    provenance: Provenance::Limit,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    });
    Ok(CoefficientTable {
        cutoff,
        entries: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

/// Rewrites `T_omega S_lambda` as `S_b T_a`: `a = sqrt(1 - lambda^2 (1 -
/// omega^2))` (principal), `b = omega lambda / a`. Fails when `a = 0`.
pub fn compose_ts(omega: Complex64, lambda: Complex64) -> Result<(Complex64, Complex64), GaussianError> {
    let one = Complex64::new(1.0, 0.0);
    let a = (one - lambda * lambda * (one - omega * omega)).sqrt();
    if a.norm() == 0.0 {
        return Err(GaussianError::DegenerateComposition);
    }
    let b = omega * lambda / a;
    Ok((b, a))
}

/// Kernel parameters of `G(x,y) = exp[-(A/2)x^2 - (B/2)y^2 + Cxy + D]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianKernelParams {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl GaussianKernelParams {
    pub fn to_c64(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (self.a.to_c64(), self.b.to_c64(), self.c.to_c64(), self.d.to_c64())
    }
}

/// Kernel form of `M_tau T_omega S_lambda`:
///
/// ```text
/// A = (tau + (1-tau) omega^2) / (1-omega^2)
/// B = (1 - lambda^2 (1-omega^2)) / (lambda^2 (1-omega^2))
/// C = omega / (lambda (1-omega^2))
/// D = (1/2) log((1+tau) / (lambda^2 (1-omega^2)))   (principal branch)
/// ```
///
/// `A`, `B`, `C` are exact for exact parameters; `D` is always float.
/// Fails when `lambda (1-omega^2) = 0` (no kernel in this family).
pub fn kernel_params(gp: &GaussianParams) -> Result<GaussianKernelParams, GaussianError> {
    let one = Scalar::one();
    let omega_sq = gp.omega() * gp.omega();
    let u = &one - &omega_sq; // 1 - omega^2
    if gp.lambda().is_zero() || u.is_zero() {
        return Err(GaussianError::DegenerateKernel);
    }
    let tau = gp.tau();
    let lambda_sq_u = gp.lambda_sq() * &u;
    let a = (tau + &(&(&one - tau) * &omega_sq)).try_div(&u).expect("1 - omega^2 != 0");
    let b = (&one - &lambda_sq_u).try_div(&lambda_sq_u).expect("lambda^2 (1-omega^2) != 0");
    let c = gp
        .omega()
        .try_div(&(gp.lambda() * &u))
        .expect("lambda (1-omega^2) != 0");
    let arg = (&one + tau).try_div(&lambda_sq_u).expect("nonzero");
    let d = Scalar::Float(0.5 * arg.to_c64().ln());
    Ok(GaussianKernelParams { a, b, c, d })
}

/// Inverts the kernel system on `(A, B, C)`:
///
/// ```text
/// omega^2 = C^2 / (1+B+C^2),  lambda^2 = (1+B+C^2) / (1+B)^2,
/// tau = A - C^2 / (1+B)
/// ```
///
/// with `lambda` the principal root and `omega = C lambda (1-omega^2)` so
/// the pair satisfies the forward system; `D` is determined by the triple.
pub fn params_from_kernel(
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> Result<GaussianParams, GaussianError> {
    let one = Complex64::new(1.0, 0.0);
    let b1 = one + b;
    let denom = b1 + c * c;
    if b1.norm() == 0.0 || denom.norm() == 0.0 {
        return Err(GaussianError::DegenerateKernel);
    }
    let u = b1 / denom; // 1 - omega^2
    let lambda = (denom / (b1 * b1)).sqrt();
    let omega = c * lambda * u;
    let tau = a - c * c / b1;
    Ok(GaussianParams::f64(tau, omega, lambda)?)
}

/// [`params_from_kernel`] plus a consistency check of a caller-supplied `D`
/// against the derived triple: `exp(2D)` must match
/// `(1+tau)/(lambda^2 (1-omega^2))` to `1e-10` relative error.
pub fn params_from_kernel_checked(
    kp: &GaussianKernelParams,
) -> Result<GaussianParams, GaussianError> {
    let (a, b, c, d) = kp.to_c64();
    let gp = params_from_kernel(a, b, c)?;
    let one = Complex64::new(1.0, 0.0);
    let (tau, omega, _) = gp.to_c64();
    let expected = (one + tau) / (gp.lambda_sq().to_c64() * (one - omega * omega));
    let got = (2.0 * d).exp();
    if (got - expected).norm() > 1e-10 * expected.norm().max(1.0) {
        return Err(GaussianError::PrefactorMismatch { expected, got });
    }
    Ok(gp)
}

/// Applies the kernel operator to a polynomial at a point:
/// `(Gf)(x) = ∫ G(x,y) f(y) dγ(y)`, evaluated through the closed form
/// obtained by completing the square in `y` (no numeric quadrature).
///
/// Requires `Re(1+B) > 0` for the Gaussian integral to converge.
pub fn kernel_apply_numeric(
    kp: &GaussianKernelParams,
    f: &Polynomial,
    x: Complex64,
) -> Result<Complex64, GaussianError> {
    let (a, b, c, d) = kp.to_c64();
    let one = Complex64::new(1.0, 0.0);
    let b1 = one + b;
    if b1.re <= 0.0 {
        return Err(GaussianError::DivergentIntegral(b1.re));
    }
    // ∫ f(y) e^{-(B/2)y^2 + Cxy} dγ(y): Gaussian with mean mu = Cx/(1+B) and
    // variance 1/(1+B), times exp(C^2x^2/(2(1+B))) / sqrt(1+B).
    let mu = c * x / b1;
    let var = one / b1;
    let coeffs = f.to_c64();
    let mut moments = Vec::with_capacity(coeffs.len());
    for k in 0..coeffs.len() {
        let m = match k {
            0 => one,
            1 => mu,
            _ => mu * moments[k - 1] + (k as f64 - 1.0) * var * moments[k - 2],
        };
        moments.push(m);
    }
    let sum: Complex64 = coeffs.iter().zip(&moments).map(|(cf, m)| cf * m).sum();
    let exponent = d - a * x * x / 2.0 + c * c * x * x / (2.0 * b1);
    Ok(exponent.exp() / b1.sqrt() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::clt::limit_coefficient_from_params;
    use crate::hermite::hermite_polynomial;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn omega_i_half() -> ComplexScalar {
        ComplexScalar::new(rat(0, 1), rat(1, 2))
    }

    #[test]
    fn apply_t_examples() {
        let e = to_hermite(&Polynomial::from_ints(&[0, 0, 1])); // x^2 = H_0 + H_2
        // omega = 1: identity
        assert_eq!(apply_t(&e, &ComplexScalar::one()), e);
        // omega = 0: projection onto the H_0 coefficient
        let p0 = apply_t(&e, &ComplexScalar::zero());
        assert_eq!(p0.coeffs(), &[ComplexScalar::one()]);
        // general omega: omega^2 x^2 + (1 - omega^2)
        let om = omega_i_half();
        let mapped = from_hermite(&apply_t(&e, &om));
        let om_sq = &om * &om;
        let expected = &Polynomial::monomial(2, om_sq.clone())
            + &Polynomial::constant(&ComplexScalar::one() - &om_sq);
        assert_eq!(mapped, expected);
    }

    #[test]
    fn apply_t_semigroup_law() {
        let e = to_hermite(&Polynomial::from_ints(&[1, -2, 0, 4, 1]));
        let om1 = omega_i_half();
        let om2 = ComplexScalar::from_ratio(2, 3);
        assert_eq!(
            apply_t(&apply_t(&e, &om1), &om2),
            apply_t(&e, &(&om1 * &om2))
        );
    }

    #[test]
    fn apply_c_examples() {
        // identity parameters leave f unchanged
        let id = GaussianParams::exact(
            ComplexScalar::zero(),
            ComplexScalar::one(),
            ComplexScalar::one(),
        )
        .unwrap();
        let f = Polynomial::from_ints(&[3, -1, 2]);
        let gp = apply_c(&id, &f);
        assert_eq!(gp.poly(), &PolyPart::Exact(f));
        assert_eq!(gp.prefactor(), Scalar::one());

        // tau=0, lambda=1: H_l -> omega^l H_l
        let om = omega_i_half();
        let params =
            GaussianParams::exact(ComplexScalar::zero(), om.clone(), ComplexScalar::one())
                .unwrap();
        for l in 0..=5usize {
            let img = apply_c(&params, &hermite_polynomial(l));
            assert_eq!(
                img.poly(),
                &PolyPart::Exact(hermite_polynomial(l).scale(&om.powu(l as u32)))
            );
        }

        // constants are fixed by T and S: C(1) = sqrt(1+tau) e^{-tau x^2/2}
        let params = GaussianParams::exact(
            ComplexScalar::from_int(3),
            om,
            ComplexScalar::from_int(2),
        )
        .unwrap();
        let img = apply_c(&params, &Polynomial::one());
        assert_eq!(img.poly(), &PolyPart::Exact(Polynomial::one()));
        assert_eq!(img.prefactor(), Scalar::from_int(2)); // sqrt(4)
    }

    #[test]
    fn inner_product_examples() {
        // Hermite orthogonality through the T_omega image
        let om = omega_i_half();
        let params =
            GaussianParams::exact(ComplexScalar::zero(), om.clone(), ComplexScalar::one())
                .unwrap();
        for l in 0..=4usize {
            for m in 0..=4usize {
                let v = inner_product_gamma(&apply_c(&params, &hermite_polynomial(l)),
                                            &hermite_polynomial(m))
                    .unwrap();
                let expected = if l == m {
                    Scalar::Exact(om.powu(l as u32).scale(&Rational::from_integer(
                        crate::algebra::factorial(l),
                    )))
                } else {
                    Scalar::zero()
                };
                assert_eq!(v, expected, "({l},{m})");
            }
        }
        // plain 1 against 1: total mass
        let one = GaussianPolynomial::plain(Polynomial::one());
        assert_eq!(inner_product_gamma(&one, &Polynomial::one()).unwrap(), Scalar::one());
        // tau=1, poly=1 against x^2: (1+1)^{-1} * 1!! = 1/2
        let gp = GaussianPolynomial::new(Scalar::from_int(1), PolyPart::Exact(Polynomial::one()));
        assert_eq!(
            inner_product_gamma(&gp, &Polynomial::from_ints(&[0, 0, 1])).unwrap(),
            Scalar::Exact(ComplexScalar::from_ratio(1, 2))
        );
        // divergence guard
        let gp = GaussianPolynomial::new(
            Scalar::Float(Complex64::new(-1.5, 0.0)),
            PolyPart::Exact(Polynomial::one()),
        );
        assert!(matches!(
            inner_product_gamma(&gp, &Polynomial::one()),
            Err(GaussianError::DivergentInnerProduct(_))
        ));
    }

    #[test]
    fn coefficients_direct_examples() {
        // diagonal table for (0, omega, 1)
        let om = omega_i_half();
        let params =
            GaussianParams::exact(ComplexScalar::zero(), om.clone(), ComplexScalar::one())
                .unwrap();
        let table = coefficients_direct(&params, 4).unwrap();
        for l in 0..=4usize {
            for m in 0..=4usize {
                let expected = if l == m {
                    Scalar::Exact(om.powu(l as u32).scale(&Rational::from_integer(
                        crate::algebra::factorial(l),
                    )))
                } else {
                    Scalar::zero()
                };
                assert_eq!(table.entry(l, m).value, expected, "({l},{m})");
            }
        }
        // c[0][0] = 1 for (tau, 0, lambda): the tau-integral normalizes
        let params = GaussianParams::exact(
            ComplexScalar::from_ratio(1, 3),
            ComplexScalar::zero(),
            ComplexScalar::from_int(2),
        )
        .unwrap();
        let table = coefficients_direct(&params, 2).unwrap();
        assert_eq!(table.entry(0, 0).value, Scalar::one());
    }

    #[test]
    fn direct_integrals_match_parameter_form() {
        let triples = [
            (ComplexScalar::zero(), omega_i_half(), ComplexScalar::one()),
            (
                ComplexScalar::from_ratio(1, 3),
                ComplexScalar::from_ratio(1, 2),
                ComplexScalar::from_int(2),
            ),
            (
                ComplexScalar::from_ratio(-1, 2),
                ComplexScalar::from_ratio(2, 3),
                ComplexScalar::one(),
            ),
        ];
        for (tau, om, lam) in triples {
            let gp = GaussianParams::exact(tau, om, lam).unwrap();
            let table = coefficients_direct(&gp, 6).unwrap();
            for l in 0..=6usize {
                for m in 0..=6usize {
                    assert_eq!(
                        table.entry(l, m).value,
                        limit_coefficient_from_params(&gp, l, m),
                        "({l},{m})"
                    );
                }
            }
        }
    }

    #[test]
    fn compose_ts_identities() {
        // omega = 1: a = 1, b = lambda
        let (b, a) = compose_ts(Complex64::new(1.0, 0.0), Complex64::new(0.7, 0.1)).unwrap();
        assert!((a - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((b - Complex64::new(0.7, 0.1)).norm() < 1e-14);
        // degenerate: lambda^2 (1 - omega^2) = 1
        assert!(matches!(
            compose_ts(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            Err(GaussianError::DegenerateComposition)
        ));
        // identity on Hermite polynomials: T_omega S_lambda = S_b T_a
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let omega = Complex64::new(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2));
            let lambda = Complex64::new(rng.gen_range(0.2..1.5), rng.gen_range(-0.8..0.8));
            let (b, a) = match compose_ts(omega, lambda) {
                Ok(v) => v,
                Err(_) => continue,
            };
            for l in 0..=8usize {
                let h = hermite_polynomial(l).to_c64();
                // T_omega S_lambda: scale argument, then T in the Hermite basis
                let lhs = from_hermite_f64(&apply_t_f64(
                    &to_hermite_f64(&float::scale_arg(&h, lambda)),
                    omega,
                ));
                // S_b T_a: T first, then scale the argument
                let rhs = float::scale_arg(
                    &from_hermite_f64(&apply_t_f64(&to_hermite_f64(&h), a)),
                    b,
                );
                let x = Complex64::new(0.37, -0.21);
                let (lv, rv) = (float::eval(&lhs, x), float::eval(&rhs, x));
                assert!(
                    (lv - rv).norm() <= 1e-10 * (1.0 + rv.norm()),
                    "l={l}, omega={omega}, lambda={lambda}"
                );
            }
        }
    }

    #[test]
    fn kernel_params_special_cases() {
        // Mehler form at tau=0, lambda=1, omega=1/2: A = B = 1/3, C = 2/3
        let gp = GaussianParams::exact(
            ComplexScalar::zero(),
            ComplexScalar::from_ratio(1, 2),
            ComplexScalar::one(),
        )
        .unwrap();
        let kp = kernel_params(&gp).unwrap();
        assert_eq!(kp.a, Scalar::Exact(ComplexScalar::from_ratio(1, 3)));
        assert_eq!(kp.b, Scalar::Exact(ComplexScalar::from_ratio(1, 3)));
        assert_eq!(kp.c, Scalar::Exact(ComplexScalar::from_ratio(2, 3)));
        // projection case: all parameters zero
        let gp = GaussianParams::exact(
            ComplexScalar::zero(),
            ComplexScalar::zero(),
            ComplexScalar::one(),
        )
        .unwrap();
        let kp = kernel_params(&gp).unwrap();
        assert!(kp.a.is_zero() && kp.b.is_zero() && kp.c.is_zero() && kp.d.to_c64().norm() < 1e-15);
        // degenerate cases
        let s0 = GaussianParams::exact(
            ComplexScalar::zero(),
            ComplexScalar::zero(),
            ComplexScalar::zero(),
        )
        .unwrap();
        assert!(matches!(kernel_params(&s0), Err(GaussianError::DegenerateKernel)));
        let t1 = GaussianParams::exact(
            ComplexScalar::zero(),
            ComplexScalar::one(),
            ComplexScalar::one(),
        )
        .unwrap();
        assert!(matches!(kernel_params(&t1), Err(GaussianError::DegenerateKernel)));
    }

    #[test]
    fn kernel_prefactor_identity() {
        let gp = GaussianParams::f64(
            Complex64::new(0.3, -0.2),
            Complex64::new(0.4, 0.25),
            Complex64::new(1.1, 0.3),
        )
        .unwrap();
        let kp = kernel_params(&gp).unwrap();
        let (tau, omega, _) = gp.to_c64();
        let one = Complex64::new(1.0, 0.0);
        let expected = (one + tau) / (gp.lambda_sq().to_c64() * (one - omega * omega));
        let got = (2.0 * kp.d.to_c64()).exp();
        assert!((got - expected).norm() <= 1e-12 * expected.norm());
        assert!(params_from_kernel_checked(&kp).is_ok());
        // tampered D fails the check
        let bad = GaussianKernelParams { d: Scalar::Float(kp.d.to_c64() + 0.1), ..kp };
        assert!(matches!(
            params_from_kernel_checked(&bad),
            Err(GaussianError::PrefactorMismatch { .. })
        ));
    }

    #[test]
    fn params_from_kernel_examples() {
        // zero kernel: the rank-one projection (tau, omega, lambda) = (0, 0, 1)
        let zero = Complex64::new(0.0, 0.0);
        let gp = params_from_kernel(zero, zero, zero).unwrap();
        let (tau, omega, lambda) = gp.to_c64();
        assert!(tau.norm() < 1e-15 && omega.norm() < 1e-15);
        assert!((lambda - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // Mehler with omega_0 = 1/2
        let third = Complex64::new(1.0 / 3.0, 0.0);
        let gp = params_from_kernel(third, third, Complex64::new(2.0 / 3.0, 0.0)).unwrap();
        let (tau, omega, lambda) = gp.to_c64();
        assert!(tau.norm() < 1e-14);
        assert!((omega - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((lambda - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    fn random_valid_params(rng: &mut ChaCha8Rng) -> GaussianParams {
        loop {
            let tau = Complex64::new(rng.gen_range(-0.6..1.5), rng.gen_range(-1.0..1.0));
            let omega = Complex64::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
            let lambda = Complex64::new(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            let one = Complex64::new(1.0, 0.0);
            let u = one - omega * omega;
            if u.norm() < 0.15 || lambda.norm() < 0.2 || (one + tau).norm() < 0.2 {
                continue;
            }
            return GaussianParams::f64(tau, omega, lambda).unwrap();
        }
    }

    #[test]
    fn kernel_roundtrip_on_random_valid_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let gp = random_valid_params(&mut rng);
            let kp = kernel_params(&gp).unwrap();
            let back = params_from_kernel_checked(&kp).unwrap();
            let (t0, o0, l0) = gp.to_c64();
            let (t1, o1, l1) = back.to_c64();
            assert!((t0 - t1).norm() <= 1e-12 * (1.0 + t0.norm()), "tau {t0} vs {t1}");
            assert!((o0 - o1).norm() <= 1e-12 * (1.0 + o0.norm()), "omega {o0} vs {o1}");
            assert!((l0 - l1).norm() <= 1e-12 * (1.0 + l0.norm()), "lambda {l0} vs {l1}");
            // and the forward direction reproduces (A, B, C)
            let kp2 = kernel_params(&back).unwrap();
            for (x, y) in [
                (kp.a.to_c64(), kp2.a.to_c64()),
                (kp.b.to_c64(), kp2.b.to_c64()),
                (kp.c.to_c64(), kp2.c.to_c64()),
            ] {
                assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
            }
        }
    }

    #[test]
    fn kernel_apply_examples() {
        // Mehler kernel with omega = 1/2 acts diagonally: H_3 -> (1/2)^3 H_3
        let gp = GaussianParams::exact(
            ComplexScalar::zero(),
            ComplexScalar::from_ratio(1, 2),
            ComplexScalar::one(),
        )
        .unwrap();
        let kp = kernel_params(&gp).unwrap();
        let x = Complex64::new(0.7, 0.0);
        let got = kernel_apply_numeric(&kp, &hermite_polynomial(3), x).unwrap();
        let h3 = 0.7f64.powi(3) - 3.0 * 0.7;
        let expected = h3 / 8.0;
        assert!((got.re - expected).abs() < 1e-12 && got.im.abs() < 1e-12);
        assert!((got.re - (-0.219625)).abs() < 1e-12);

        // trivial kernel: integrates against the Gaussian
        let kp0 = GaussianKernelParams {
            a: Scalar::zero(),
            b: Scalar::zero(),
            c: Scalar::zero(),
            d: Scalar::zero(),
        };
        let got = kernel_apply_numeric(&kp0, &Polynomial::one(), Complex64::new(2.3, 0.0)).unwrap();
        assert!((got - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        // divergence guard
        let bad = GaussianKernelParams {
            a: Scalar::zero(),
            b: Scalar::from_int(-2),
            c: Scalar::zero(),
            d: Scalar::zero(),
        };
        assert!(matches!(
            kernel_apply_numeric(&bad, &Polynomial::one(), Complex64::new(0.0, 0.0)),
            Err(GaussianError::DivergentIntegral(_))
        ));
    }

    #[test]
    fn kernel_apply_matches_operator_path() {
        // kp from (tau, 0, 1): the image is constant in the polynomial sense
        let tau = Complex64::new(0.4, 0.1);
        let gp = GaussianParams::f64(tau, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
            .unwrap();
        let kp = kernel_params(&gp).unwrap();
        let f = Polynomial::from_ints(&[1, 2, -1]);
        for &xr in &[0.0, 0.5, -1.3] {
            let x = Complex64::new(xr, 0.0);
            let via_kernel = kernel_apply_numeric(&kp, &f, x).unwrap();
            let via_operator = apply_c(&gp, &f).eval_c64(x);
            assert!(
                (via_kernel - via_operator).norm() <= 1e-12 * (1.0 + via_operator.norm()),
                "x={xr}"
            );
        }
    }

    #[test]
    fn kernel_vs_operator_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let points = [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.8, 0.0),
            Complex64::new(-1.1, 0.0),
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.5, -0.7),
        ];
        for _ in 0..20 {
            let gp = random_valid_params(&mut rng);
            let kp = match kernel_params(&gp) {
                Ok(kp) => kp,
                Err(_) => continue,
            };
            if kp.b.to_c64().re <= -0.8 {
                continue; // keep the integral comfortably convergent
            }
            for l in 0..=6usize {
                let h = hermite_polynomial(l);
                let image = apply_c(&gp, &h);
                for &x in &points {
                    let via_kernel = kernel_apply_numeric(&kp, &h, x).unwrap();
                    let via_operator = image.eval_c64(x);
                    assert!(
                        (via_kernel - via_operator).norm()
                            <= 1e-9 * (1.0 + via_operator.norm()),
                        "l={l}, x={x}"
                    );
                }
            }
        }
    }
}
