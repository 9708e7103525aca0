//! Hypothesis checks and the numerical left-hand side of every identity.

use super::rhs::{check_bessel_k, check_cauchy, check_f11, check_f21, check_matrix, check_weber};
use super::{
    rhs_bessel_k_product, rhs_cauchy_beta, rhs_cauchy_selberg, rhs_f11_parseval, rhs_f21_weighted,
    rhs_matrix_cauchy_beta, rhs_multivariate_gamma, rhs_weber_schafheitlin, rhs_wishart_normalization, Engine,
    IdentityCase, IdentityId,
};
use crate::error::{Error, Result};
use crate::matrix::{
    eigen_integrate_with, is_positive_definite, log_det_power, mc_integrate, mc_integrate_sym, vandermonde, ComplexSymMatrix,
    EigenPoint, Proposal, SymMatrix,
};
use crate::quadrature::{
    integrate_half_line_with, integrate_interval, integrate_real_line_with, DecayHint, QuadratureConfig, QUADRATURE_CONFIG,
};
use crate::special::{bessel_j_scaled, bessel_k, c64, gauss_2f1, kummer_1f1, kummer_1f1_parts, principal_ln, ComplexScalar};
use std::f64::consts::PI;

/// Largest dimension for the eigenvalue quadrature route.
const MAX_QUADRATURE_DIM: usize = 3;
/// Wishart importance laws are widened by this factor so that importance
/// weights stay bounded.
const WISHART_WIDENING: f64 = 1.25;

fn hypothesis(id: IdentityId, reason: impl Into<String>) -> Error {
    Error::Hypothesis {
        id: id.to_string(),
        reason: reason.into(),
    }
}

fn real_param(case: &IdentityCase, name: &str) -> Result<f64> {
    let z = case.params().scalar(name)?;
    if z.im != 0.0 {
        return Err(hypothesis(case.id, format!("the numerical side needs real '{name}'")));
    }
    Ok(z.re)
}

fn check_sigma(case: &IdentityCase, name: &str, d: usize) -> Result<()> {
    let m = case.params().matrix(name)?;
    if m.dim() != d {
        return Err(hypothesis(case.id, format!("'{name}' must be {d} x {d}")));
    }
    if !is_positive_definite(m) {
        return Err(hypothesis(case.id, format!("'{name}' must be positive definite")));
    }
    Ok(())
}

/// Checks the identity's hypotheses and what the numerical route supports.
pub(crate) fn validate(case: &IdentityCase) -> Result<()> {
    let p = case.params();
    let id = case.id;
    match id {
        IdentityId::Cb1 | IdentityId::Cb0 => check_cauchy(
            id.as_str(),
            p.scalar("alpha1")?,
            p.scalar("alpha2")?,
            p.scalar("sigma1")?,
            p.scalar("sigma2")?,
        ),
        IdentityId::F11One | IdentityId::F11Zero => check_f11(
            id.as_str(),
            p.scalar("alpha1")?,
            p.scalar("sigma1")?,
            p.scalar("alpha2")?,
            p.scalar("sigma2")?,
        ),
        IdentityId::F21One => check_f21(
            p.scalar("alpha1")?,
            p.scalar("alpha2")?,
            p.scalar("sigma1")?,
            p.scalar("sigma2")?,
            p.scalar("gamma2")?,
            p.scalar("theta")?,
        ),
        IdentityId::Bk1 => {
            check_bessel_k(p.scalar("nu1")?, p.scalar("nu2")?)?;
            real_param(case, "nu1")?;
            real_param(case, "nu2")?;
            Ok(())
        }
        IdentityId::Ws1 => {
            check_weber(p.scalar("nu1")?, p.scalar("nu2")?)?;
            if real_param(case, "nu1")? < 0.0 || real_param(case, "nu2")? < 0.0 {
                return Err(hypothesis(id, "the numerical side needs nu_j >= 0"));
            }
            Ok(())
        }
        IdentityId::Gd1 | IdentityId::Wi1 => {
            let d = p.dim()?;
            let alpha = real_param(case, "alpha")?;
            if d == 0 || !(alpha > 0.5 * (d as f64 - 1.0)) {
                return Err(hypothesis(id, "need d >= 1 and alpha > (d-1)/2"));
            }
            if id == IdentityId::Wi1 {
                check_sigma(case, "Sigma", d)?;
            }
            Ok(())
        }
        IdentityId::Mc1 | IdentityId::Mc0 => {
            let d = p.dim()?;
            check_matrix(id.as_str(), d, p.scalar("alpha1")?, p.scalar("alpha2")?)?;
            check_sigma(case, "Sigma1", d)?;
            check_sigma(case, "Sigma2", d)
        }
        IdentityId::Cs1 | IdentityId::Cs0 => {
            let d = p.dim()?;
            check_matrix(id.as_str(), d, p.scalar("alpha1")?, p.scalar("alpha2")?)?;
            if !(p.scalar("sigma1")?.re > 0.0 && p.scalar("sigma2")?.re > 0.0) {
                return Err(hypothesis(id, "need Re(sigma1) > 0 and Re(sigma2) > 0"));
            }
            if case.engine() == Engine::Quadrature && d > MAX_QUADRATURE_DIM {
                return Err(hypothesis(
                    id,
                    format!("eigenvalue quadrature handles d <= {MAX_QUADRATURE_DIM}; use the mc engine"),
                ));
            }
            Ok(())
        }
    }
}

/// The closed-form right-hand side; zero for vanishing identities.
pub(crate) fn right_side(case: &IdentityCase) -> Result<ComplexScalar> {
    let p = case.params();
    match case.id {
        id if id.is_vanishing() => Ok(c64(0.0, 0.0)),
        IdentityId::Cb1 => rhs_cauchy_beta(p.scalar("alpha1")?, p.scalar("alpha2")?, p.scalar("sigma1")?, p.scalar("sigma2")?),
        IdentityId::F11One => rhs_f11_parseval(p.scalar("alpha1")?, p.scalar("sigma1")?, p.scalar("alpha2")?, p.scalar("sigma2")?),
        IdentityId::F21One => rhs_f21_weighted(
            p.scalar("alpha1")?,
            p.scalar("alpha2")?,
            p.scalar("sigma1")?,
            p.scalar("sigma2")?,
            p.scalar("gamma1")?,
            p.scalar("gamma2")?,
            p.scalar("theta")?,
        ),
        IdentityId::Bk1 => rhs_bessel_k_product(p.scalar("nu1")?, p.scalar("nu2")?),
        IdentityId::Ws1 => rhs_weber_schafheitlin(p.scalar("nu1")?, p.scalar("nu2")?),
        IdentityId::Gd1 => rhs_multivariate_gamma(p.dim()?, p.scalar("alpha")?),
        IdentityId::Wi1 => rhs_wishart_normalization(
            p.dim()?,
            p.scalar("alpha")?,
            &ComplexSymMatrix::real(p.matrix("Sigma")?.clone()),
        ),
        IdentityId::Mc1 => rhs_matrix_cauchy_beta(
            p.dim()?,
            p.scalar("alpha1")?,
            p.scalar("alpha2")?,
            &ComplexSymMatrix::real(p.matrix("Sigma1")?.clone()),
            &ComplexSymMatrix::real(p.matrix("Sigma2")?.clone()),
        ),
        IdentityId::Cs1 => rhs_cauchy_selberg(
            p.dim()?,
            p.scalar("alpha1")?,
            p.scalar("alpha2")?,
            p.scalar("sigma1")?,
            p.scalar("sigma2")?,
        ),
        _ => unreachable!("vanishing identities handled above"),
    }
}

/// A numerical left-hand side.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LeftSide {
    pub value: ComplexScalar,
    /// Error estimate (quadrature) or standard error (Monte Carlo).
    pub err: f64,
    pub count: u64,
    pub engine: Engine,
}

/// Tolerances handed to the engines for one case.
pub(crate) struct EngineBudget {
    /// Relative accuracy asked of quadrature.
    pub rel_tol: f64,
    /// Absolute accuracy accepted by quadrature, for vanishing identities.
    pub abs_tol: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `(1 + iσt)^{−α}` on the principal branch.
#[inline]
fn cauchy_factor(sigma: ComplexScalar, t: f64, alpha: ComplexScalar, sign: f64) -> ComplexScalar {
    (-alpha * principal_ln(c64(1.0, 0.0) + c64(0.0, sign * t) * sigma)).exp()
}

fn quadrature(r: crate::quadrature::IntegralEstimate) -> Result<LeftSide> {
    if !r.converged {
        return Err(Error::no_convergence(
            "quadrature",
            format!("error estimate {:.3e} above tolerance", r.error_estimate),
        ));
    }
    Ok(LeftSide {
        value: r.value,
        err: r.error_estimate,
        count: r.evaluations as u64,
        engine: Engine::Quadrature,
    })
}

fn monte_carlo(r: crate::matrix::MCEstimate) -> LeftSide {
    LeftSide {
        value: r.value,
        err: r.standard_error,
        count: r.samples as u64,
        engine: Engine::MonteCarlo,
    }
}

fn core_scale(s1: ComplexScalar, s2: ComplexScalar) -> f64 {
    1.0 / s1.norm().min(s2.norm())
}

/// Beyond this `|t|` the confluent pairing is integrated term by term.
const CONFLUENT_SPLIT: f64 = 40.0;

/// `factor · ∫ ₁F₁(a₁; c₁; iε₁t) ₁F₁(a₂; c₂; iε₂t) dt` for `(a_j, c_j, ε_j)`.
///
/// The tails mix a non-oscillating part with `e^{±it}` and `e^{±2it}`
/// parts whose decay rates need not differ by integers, which defeats a
/// single extrapolation. Past `CONFLUENT_SPLIT` each factor is split into
/// its algebraic and exponential large-argument parts and each of the four
/// products, a single `e^{iωt}` times a power series in `1/t`, is integrated
/// on its own: ω = 0 by an algebraic tail map, ω ≠ 0 over half-period panels.
fn confluent_pairing(
    factors: [(ComplexScalar, ComplexScalar, f64); 2],
    factor: f64,
    rel_tol: f64,
    config: &QuadratureConfig,
) -> Result<LeftSide> {
    let [(a1, c1, e1), (a2, c2, e2)] = factors;
    let x = CONFLUENT_SPLIT;
    // Sub-integrals share the absolute budget.
    let piece_config = QuadratureConfig {
        abs_tol: config.abs_tol / 9.0,
        ..*config
    };
    let full = |t: f64| -> Result<ComplexScalar> {
        Ok(kummer_1f1(a1, c1, c64(0.0, e1 * t))? * kummer_1f1(a2, c2, c64(0.0, e2 * t))? * factor)
    };
    let core = integrate_interval(&full, -x, x, rel_tol, &piece_config)?;
    let mut total = LeftSide {
        value: core.value,
        err: core.error_estimate,
        count: core.evaluations as u64,
        engine: Engine::Quadrature,
    };
    let mut converged = core.converged;
    // Decay of the algebraic part ~ t^{−a} and of the exponential part ~ t^{a−c}.
    let decay = [[a1.re, (c1 - a1).re], [a2.re, (c2 - a2).re]];
    for dir in [1.0, -1.0] {
        for k1 in 0..2 {
            for k2 in 0..2 {
                let omega = dir * (k1 as f64 * e1 + k2 as f64 * e2);
                let term = |u: f64| -> Result<ComplexScalar> {
                    let t = dir * (x + u);
                    let p1 = kummer_1f1_parts(a1, c1, c64(0.0, e1 * t))?;
                    let p2 = kummer_1f1_parts(a2, c2, c64(0.0, e2 * t))?;
                    let f1 = if k1 == 0 { p1.0 } else { p1.1 };
                    let f2 = if k2 == 0 { p2.0 } else { p2.1 };
                    Ok(f1 * f2 * factor)
                };
                let mut hint = DecayHint::algebraic(decay[0][k1] + decay[1][k2]).with_scale(x);
                if omega != 0.0 {
                    hint = hint.with_wavelength(PI / omega.abs());
                }
                let r = integrate_half_line_with(term, &hint, rel_tol, &piece_config)?;
                total.value += r.value;
                total.err += r.error_estimate;
                total.count += r.evaluations as u64;
                converged &= r.converged;
            }
        }
    }
    if !converged {
        return Err(Error::no_convergence(
            "quadrature",
            format!("error estimate {:.3e} above tolerance", total.err),
        ));
    }
    Ok(total)
}

/// Evaluates the left-hand side with the case's engine.
pub(crate) fn left_side(case: &IdentityCase, budget: &EngineBudget) -> Result<LeftSide> {
    let p = case.params();
    let id = case.id;
    let config = QuadratureConfig {
        abs_tol: budget.abs_tol,
        ..QUADRATURE_CONFIG
    };
    let rel_tol = budget.rel_tol;
    match id {
        IdentityId::Cb1 | IdentityId::Cb0 => {
            let (a1, a2, s1, s2) = (p.scalar("alpha1")?, p.scalar("alpha2")?, p.scalar("sigma1")?, p.scalar("sigma2")?);
            let sign2 = if id == IdentityId::Cb1 { -1.0 } else { 1.0 };
            let hint = DecayHint::algebraic((a1 + a2).re).with_scale(core_scale(s1, s2));
            let f = |t: f64| cauchy_factor(s1, t, a1, 1.0) * cauchy_factor(s2, t, a2, sign2);
            quadrature(integrate_real_line_with(f, &hint, rel_tol, &config)?)
        }
        IdentityId::F11One | IdentityId::F11Zero => {
            let (a1, s1, a2, s2) = (p.scalar("alpha1")?, p.scalar("sigma1")?, p.scalar("alpha2")?, p.scalar("sigma2")?);
            let (sign1, factor) = if id == IdentityId::F11One { (-1.0, 0.5 / PI) } else { (1.0, 1.0) };
            confluent_pairing([(a1, a1 + s1, sign1), (a2, a2 + s2, 1.0)], factor, rel_tol, &config)
        }
        IdentityId::F21One => {
            let (a1, a2, s1, s2) = (p.scalar("alpha1")?, p.scalar("alpha2")?, p.scalar("sigma1")?, p.scalar("sigma2")?);
            let (g1, g2, theta) = (p.scalar("gamma1")?, p.scalar("gamma2")?, p.scalar("theta")?);
            let hint = DecayHint::algebraic((a1 + a2).re).with_scale(core_scale(s1, s2));
            let f = |t: f64| -> Result<ComplexScalar> {
                let w = c64(1.0, 0.0) - c64(0.0, t) * s2;
                let z = s2 / (theta * w);
                Ok(cauchy_factor(s1, t, a1, 1.0) * cauchy_factor(s2, t, a2, -1.0) * gauss_2f1(g1, a2, g2, z)? * (0.5 / PI))
            };
            quadrature(integrate_real_line_with(f, &hint, rel_tol, &config)?)
        }
        IdentityId::Bk1 => {
            let (n1, n2) = (real_param(case, "nu1")?, real_param(case, "nu2")?);
            let hint = DecayHint::exponential().with_endpoint_exponent(n1 + n2 - n1.abs() - n2.abs());
            let f = |t: f64| -> Result<f64> { Ok(t.powf(n1) * bessel_k(n1, t)? * t.powf(n2) * bessel_k(n2, t)?) };
            quadrature(integrate_half_line_with(f, &hint, rel_tol, &config)?)
        }
        IdentityId::Ws1 => {
            let (n1, n2) = (real_param(case, "nu1")?, real_param(case, "nu2")?);
            let scale = 0.5f64.powf(n1 + n2);
            let hint = DecayHint::algebraic(n1 + n2 + 1.0).with_wavelength(PI);
            let f = |t: f64| -> Result<f64> { Ok(scale * bessel_j_scaled(n1, t)? * bessel_j_scaled(n2, t)?) };
            quadrature(integrate_half_line_with(f, &hint, rel_tol, &config)?)
        }
        IdentityId::Gd1 | IdentityId::Wi1 => {
            let d = p.dim()?;
            let alpha = real_param(case, "alpha")?;
            let sigma = if id == IdentityId::Wi1 {
                p.matrix("Sigma")?.clone()
            } else {
                SymMatrix::identity(d)
            };
            let sigma_inv = sigma.cholesky()?.inverse();
            let power = alpha - 0.5 * (d as f64 + 1.0);
            let g = |x: &SymMatrix| -> Result<f64> {
                let trace = (&sigma_inv * x.to_dense()).trace();
                Ok((power * x.log_det()? - trace).exp())
            };
            let proposal = Proposal::Wishart {
                alpha,
                sigma: sigma.scaled(WISHART_WIDENING),
            };
            Ok(monte_carlo(mc_integrate_sym(g, d, &proposal, budget.samples, budget.seed)?))
        }
        IdentityId::Mc1 | IdentityId::Mc0 => {
            let d = p.dim()?;
            let (a1, a2) = (p.scalar("alpha1")?, p.scalar("alpha2")?);
            let (s1, s2) = (p.matrix("Sigma1")?, p.matrix("Sigma2")?);
            let sign2 = if id == IdentityId::Mc1 { -1.0 } else { 1.0 };
            let g = |t: &SymMatrix| -> Result<ComplexScalar> {
                Ok((log_det_power(s1, t, a1, 1.0)? + log_det_power(s2, t, a2, sign2)?).exp())
            };
            let mean_scale = (s1.trace() + s2.trace()) / (2.0 * d as f64);
            let proposal = Proposal::StudentT {
                dof: 1.0,
                scale: 1.0 / (mean_scale * (a1 + a2).re.sqrt()),
            };
            Ok(monte_carlo(mc_integrate_sym(g, d, &proposal, budget.samples, budget.seed)?))
        }
        IdentityId::Cs1 | IdentityId::Cs0 => {
            let d = p.dim()?;
            let (a1, a2, s1, s2) = (p.scalar("alpha1")?, p.scalar("alpha2")?, p.scalar("sigma1")?, p.scalar("sigma2")?);
            let sign2 = if id == IdentityId::Cs1 { -1.0 } else { 1.0 };
            let h = |t: &[f64]| -> ComplexScalar {
                let mut log = c64(0.0, 0.0);
                for &tj in t {
                    log += -a1 * principal_ln(c64(1.0, 0.0) + c64(0.0, tj) * s1)
                        - a2 * principal_ln(c64(1.0, 0.0) + c64(0.0, sign2 * tj) * s2);
                }
                log.exp() * vandermonde(t)
            };
            match case.engine() {
                Engine::Quadrature => {
                    let hint = DecayHint::algebraic((a1 + a2).re - (d as f64 - 1.0)).with_scale(core_scale(s1, s2));
                    quadrature(eigen_integrate_with(|e: &EigenPoint| h(&e.values), d, &hint, rel_tol, &config)?)
                }
                Engine::MonteCarlo => {
                    let proposal = Proposal::ProductStudentT {
                        dof: 1.0,
                        scale: 2.0 / (s1.norm() + s2.norm()),
                    };
                    Ok(monte_carlo(mc_integrate(h, d, &proposal, budget.samples, budget.seed)?))
                }
            }
        }
    }
}
