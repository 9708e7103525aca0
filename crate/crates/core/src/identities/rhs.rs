//! Closed-form right-hand sides.
//!
//! Gamma ratios are summed in log space and exponentiated once, so
//! intermediate `Γ_d` values never overflow on their own.

use crate::error::{Error, Result};
use crate::matrix::ComplexSymMatrix;
use crate::special::{c64, finite, gauss_2f1, is_nonpositive_integer, log_gamma, log_multivariate_gamma, principal_ln, ComplexScalar};
use std::f64::consts::PI;

fn hypothesis(id: &str, reason: impl Into<String>) -> Error {
    Error::Hypothesis {
        id: id.to_string(),
        reason: reason.into(),
    }
}

fn one() -> ComplexScalar {
    c64(1.0, 0.0)
}

/// Hypotheses shared by the scalar Cauchy beta integrals.
pub(crate) fn check_cauchy(id: &str, a1: ComplexScalar, a2: ComplexScalar, s1: ComplexScalar, s2: ComplexScalar) -> Result<()> {
    if !((a1 + a2).re > 1.0) {
        return Err(hypothesis(id, "need Re(alpha1 + alpha2) > 1"));
    }
    if !(s1.re > 0.0 && s2.re > 0.0) {
        return Err(hypothesis(id, "need Re(sigma1) > 0 and Re(sigma2) > 0"));
    }
    Ok(())
}

/// `log` of `Γ(α₁+α₂−1)/(Γ(α₁)Γ(α₂)) · σ₁^{α₂−1}σ₂^{α₁−1}/(σ₁+σ₂)^{α₁+α₂−1}`.
fn log_cauchy_kernel(a1: ComplexScalar, a2: ComplexScalar, s1: ComplexScalar, s2: ComplexScalar) -> Result<ComplexScalar> {
    let b = a1 + a2 - one();
    Ok(log_gamma(b)? - log_gamma(a1)? - log_gamma(a2)? + (a2 - one()) * principal_ln(s1) + (a1 - one()) * principal_ln(s2)
        - b * principal_ln(s1 + s2))
}

/// `∫_ℝ (1+iσ₁t)^{−α₁}(1−iσ₂t)^{−α₂} dt`
/// `= 2π Γ(α₁+α₂−1)/(Γ(α₁)Γ(α₂)) · σ₁^{α₂−1}σ₂^{α₁−1}/(σ₁+σ₂)^{α₁+α₂−1}`.
pub fn rhs_cauchy_beta(a1: ComplexScalar, a2: ComplexScalar, s1: ComplexScalar, s2: ComplexScalar) -> Result<ComplexScalar> {
    check_cauchy("CB-1", a1, a2, s1, s2)?;
    finite("rhs_cauchy_beta", (log_cauchy_kernel(a1, a2, s1, s2)? + (2.0 * PI).ln()).exp())
}

pub(crate) fn check_f11(id: &str, a1: ComplexScalar, s1: ComplexScalar, a2: ComplexScalar, s2: ComplexScalar) -> Result<()> {
    if !((a1 + a2).re > 1.0 && (s1 + s2).re > 1.0) {
        return Err(hypothesis(id, "need Re(alpha1 + alpha2) > 1 and Re(sigma1 + sigma2) > 1"));
    }
    if !((a1 + s1).re > 0.0 && (a2 + s2).re > 0.0) {
        return Err(hypothesis(id, "need Re(alpha_j + sigma_j) > 0"));
    }
    if is_nonpositive_integer(a1) || is_nonpositive_integer(a2) || is_nonpositive_integer(s1) || is_nonpositive_integer(s2) {
        return Err(hypothesis(id, "alpha_j and sigma_j must not be non-positive integers"));
    }
    Ok(())
}

/// `(1/2π)∫_ℝ ₁F₁(α₁;α₁+σ₁;−it) ₁F₁(α₂;α₂+σ₂;it) dt`
/// `= Γ(α₁+α₂−1)Γ(σ₁+σ₂−1)Γ(α₁+σ₁)Γ(α₂+σ₂) / (Γ(α₁+α₂+σ₁+σ₂−2)Γ(α₁)Γ(σ₁)Γ(α₂)Γ(σ₂))`.
pub fn rhs_f11_parseval(a1: ComplexScalar, s1: ComplexScalar, a2: ComplexScalar, s2: ComplexScalar) -> Result<ComplexScalar> {
    check_f11("F11-1", a1, s1, a2, s2)?;
    let two = c64(2.0, 0.0);
    let log = log_gamma(a1 + a2 - one())? + log_gamma(s1 + s2 - one())? + log_gamma(a1 + s1)? + log_gamma(a2 + s2)?
        - log_gamma(a1 + a2 + s1 + s2 - two)?
        - log_gamma(a1)?
        - log_gamma(s1)?
        - log_gamma(a2)?
        - log_gamma(s2)?;
    finite("rhs_f11_parseval", log.exp())
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn check_f21(
    a1: ComplexScalar,
    a2: ComplexScalar,
    s1: ComplexScalar,
    s2: ComplexScalar,
    g2: ComplexScalar,
    theta: ComplexScalar,
) -> Result<()> {
    let id = "F21-1";
    if !((a1 + a2).re > 1.0) {
        return Err(hypothesis(id, "need Re(alpha1 + alpha2) > 1"));
    }
    if !(s1.re > 0.0 && s2.re > 0.0 && theta.re > s2.re) {
        return Err(hypothesis(id, "need Re(sigma1) > 0 and Re(theta) > Re(sigma2) > 0"));
    }
    if is_nonpositive_integer(g2) {
        return Err(hypothesis(id, "-gamma2 must not be a non-negative integer"));
    }
    Ok(())
}

/// `(1/2π)∫_ℝ (1+iσ₁t)^{−α₁}(1−iσ₂t)^{−α₂} ₂F₁(γ₁,α₂;γ₂;σ₂θ⁻¹(1−iσ₂t)⁻¹) dt`
/// `= Γ(α₁+α₂−1)/(Γ(α₁)Γ(α₂)) · σ₁^{α₂−1}σ₂^{α₁−1}/(σ₁+σ₂)^{α₁+α₂−1}`
/// `· ₂F₁(γ₁, α₁+α₂−1; γ₂; θ⁻¹(σ₁⁻¹+σ₂⁻¹)⁻¹)`.
#[allow(clippy::too_many_arguments)]
pub fn rhs_f21_weighted(
    a1: ComplexScalar,
    a2: ComplexScalar,
    s1: ComplexScalar,
    s2: ComplexScalar,
    g1: ComplexScalar,
    g2: ComplexScalar,
    theta: ComplexScalar,
) -> Result<ComplexScalar> {
    check_f21(a1, a2, s1, s2, g2, theta)?;
    let z = (s1.inv() + s2.inv()).inv() / theta;
    let f = gauss_2f1(g1, a1 + a2 - one(), g2, z)?;
    finite("rhs_f21_weighted", log_cauchy_kernel(a1, a2, s1, s2)?.exp() * f)
}

pub(crate) fn check_bessel_k(n1: ComplexScalar, n2: ComplexScalar) -> Result<()> {
    if !(n1.re > -0.5 && n2.re > -0.5 && (n1 + n2).re > -1.0) {
        return Err(hypothesis("BK-1", "need Re(nu_j) > -1/2 and Re(nu1 + nu2) > -1"));
    }
    Ok(())
}

/// `∫_0^∞ t^{ν₁+ν₂} K_{ν₁}(t) K_{ν₂}(t) dt`
/// `= 2^{ν₁+ν₂−2} √π Γ(ν₁+ν₂+1/2)Γ(ν₁+1/2)Γ(ν₂+1/2)/Γ(ν₁+ν₂+1)`.
pub fn rhs_bessel_k_product(n1: ComplexScalar, n2: ComplexScalar) -> Result<ComplexScalar> {
    check_bessel_k(n1, n2)?;
    let s = n1 + n2;
    let half = c64(0.5, 0.0);
    let log = (s - c64(2.0, 0.0)) * std::f64::consts::LN_2 + 0.5 * PI.ln() + log_gamma(s + half)? + log_gamma(n1 + half)?
        + log_gamma(n2 + half)?
        - log_gamma(s + one())?;
    finite("rhs_bessel_k_product", log.exp())
}

pub(crate) fn check_weber(n1: ComplexScalar, n2: ComplexScalar) -> Result<()> {
    if !((n1 + n2).re > 0.0) {
        return Err(hypothesis("WS-1", "need Re(nu1 + nu2) > 0"));
    }
    Ok(())
}

/// `∫_0^∞ t^{−ν₁−ν₂} J_{ν₁}(t) J_{ν₂}(t) dt`
/// `= √π Γ(ν₁+ν₂) / (2^{ν₁+ν₂} Γ(ν₁+ν₂+1/2) Γ(ν₁+1/2) Γ(ν₂+1/2))`.
pub fn rhs_weber_schafheitlin(n1: ComplexScalar, n2: ComplexScalar) -> Result<ComplexScalar> {
    check_weber(n1, n2)?;
    let s = n1 + n2;
    let half = c64(0.5, 0.0);
    let log = 0.5 * PI.ln() + log_gamma(s)? - s * std::f64::consts::LN_2 - log_gamma(s + half)? - log_gamma(n1 + half)?
        - log_gamma(n2 + half)?;
    finite("rhs_weber_schafheitlin", log.exp())
}

/// `Γ_d(α)`, the value of the cone integral `∫ det X^{α−(d+1)/2} etr(−X) dX`.
pub fn rhs_multivariate_gamma(d: usize, alpha: ComplexScalar) -> Result<ComplexScalar> {
    if d == 0 || !(alpha.re > 0.5 * (d as f64 - 1.0)) {
        return Err(hypothesis("GD-1", "need d >= 1 and Re(alpha) > (d-1)/2"));
    }
    finite("rhs_multivariate_gamma", log_multivariate_gamma(d, alpha)?.exp())
}

/// `∫ det X^{α−(d+1)/2} etr(−Σ⁻¹X) dX = Γ_d(α) det Σ^α`.
pub fn rhs_wishart_normalization(d: usize, alpha: ComplexScalar, sigma: &ComplexSymMatrix) -> Result<ComplexScalar> {
    if d == 0 || !(alpha.re > 0.5 * (d as f64 - 1.0)) {
        return Err(hypothesis("WI-1", "need d >= 1 and Re(alpha) > (d-1)/2"));
    }
    if sigma.dim() != d {
        return Err(hypothesis("WI-1", "Sigma must be d x d"));
    }
    let log = log_multivariate_gamma(d, alpha)? + alpha * sigma.log_det()?;
    finite("rhs_wishart_normalization", log.exp())
}

pub(crate) fn check_matrix(id: &str, d: usize, a1: ComplexScalar, a2: ComplexScalar) -> Result<()> {
    if d == 0 {
        return Err(hypothesis(id, "need d >= 1"));
    }
    if !((a1 + a2).re > d as f64) {
        return Err(hypothesis(id, "need Re(alpha1 + alpha2) > d"));
    }
    Ok(())
}

/// `log` of `Γ_d(α₁+α₂−(d+1)/2)/(Γ_d(α₁)Γ_d(α₂))`.
fn log_gamma_d_ratio(d: usize, a1: ComplexScalar, a2: ComplexScalar) -> Result<ComplexScalar> {
    let p = c64(0.5 * (d as f64 + 1.0), 0.0);
    Ok(log_multivariate_gamma(d, a1 + a2 - p)? - log_multivariate_gamma(d, a1)? - log_multivariate_gamma(d, a2)?)
}

/// `∫_{S^{d×d}} det(I+iΣ₁T)^{−α₁} det(I−iΣ₂T)^{−α₂} dT`
/// `= 2^d π^{d(d+1)/2} Γ_d(α₁+α₂−(d+1)/2)/(Γ_d(α₁)Γ_d(α₂))`
/// `· (det Σ₁)^{α₂−(d+1)/2}(det Σ₂)^{α₁−(d+1)/2}/det(Σ₁+Σ₂)^{α₁+α₂−(d+1)/2}`,
/// with `dT` Lebesgue on the upper-triangle coordinates. `Re Σ_j` must be
/// positive definite; determinant powers follow the branch continuous from
/// real `Σ_j`.
pub fn rhs_matrix_cauchy_beta(
    d: usize,
    a1: ComplexScalar,
    a2: ComplexScalar,
    sigma1: &ComplexSymMatrix,
    sigma2: &ComplexSymMatrix,
) -> Result<ComplexScalar> {
    check_matrix("MC-1", d, a1, a2)?;
    if sigma1.dim() != d || sigma2.dim() != d {
        return Err(hypothesis("MC-1", "Sigma1 and Sigma2 must be d x d"));
    }
    let df = d as f64;
    let p = c64(0.5 * (df + 1.0), 0.0);
    let log_det_sum = sigma1.add(sigma2)?.log_det()?;
    let log = df * std::f64::consts::LN_2 + 0.5 * df * (df + 1.0) * PI.ln() + log_gamma_d_ratio(d, a1, a2)?
        + (a2 - p) * sigma1.log_det()?
        + (a1 - p) * sigma2.log_det()?
        - (a1 + a2 - p) * log_det_sum;
    finite("rhs_matrix_cauchy_beta", log.exp())
}

/// `∫_{ℝ^d} ∏_{j<k}|t_j−t_k| ∏_j (1+iσ₁t_j)^{−α₁}(1−iσ₂t_j)^{−α₂} dt`
/// `= d! 2^d π^{d/2} Γ_d(d/2) Γ_d(α₁+α₂−(d+1)/2)/(Γ_d(α₁)Γ_d(α₂))`
/// `· σ₁^{α₂d−d(d+1)/2} σ₂^{α₁d−d(d+1)/2} / (σ₁+σ₂)^{(α₁+α₂)d−d(d+1)/2}`.
pub fn rhs_cauchy_selberg(d: usize, a1: ComplexScalar, a2: ComplexScalar, s1: ComplexScalar, s2: ComplexScalar) -> Result<ComplexScalar> {
    check_matrix("CS-1", d, a1, a2)?;
    if !(s1.re > 0.0 && s2.re > 0.0) {
        return Err(hypothesis("CS-1", "need Re(sigma1) > 0 and Re(sigma2) > 0"));
    }
    let df = d as f64;
    let m = c64(0.5 * df * (df + 1.0), 0.0);
    let log_factorial: f64 = (2..=d).map(|k| (k as f64).ln()).sum();
    let log = log_factorial + df * std::f64::consts::LN_2 + 0.5 * df * PI.ln()
        + log_multivariate_gamma(d, c64(0.5 * df, 0.0))?
        + log_gamma_d_ratio(d, a1, a2)?
        + (a2 * df - m) * principal_ln(s1)
        + (a1 * df - m) * principal_ln(s2)
        - ((a1 + a2) * df - m) * principal_ln(s1 + s2);
    finite("rhs_cauchy_selberg", log.exp())
}
