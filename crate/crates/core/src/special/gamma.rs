use super::{c64, finite, finite_real, is_nonpositive_integer, principal_ln, ComplexScalar};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Stirling series coefficients `B_{2k} / (2k (2k-1))`, k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Below this real part the argument is shifted upward before Stirling.
const STIRLING_MIN: f64 = 15.0;
/// Refuse arguments so far left that the upward shift gets silly.
const MAX_SHIFT: f64 = 1.0e5;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Principal branch of `log Γ(z)`.
///
/// This is the analytic continuation from the positive real axis with the
/// branch cut on the negative real axis, i.e. the same branch as the usual
/// `loggamma`. It is *not* `Log(Γ(z))`; its imaginary part is unbounded.
pub fn log_gamma(z: ComplexScalar) -> Result<ComplexScalar> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("log_gamma", "non-finite argument"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "log_gamma",
            at: format!("{}", z.re),
        });
    }
    if z.re < -MAX_SHIFT {
        return Err(Error::domain("log_gamma", "real part too negative"));
    }

    // lnΓ(z) = lnΓ(z + n) − Σ_{k<n} Log(z + k); each Log is principal, so the
    // sum is continuous off the negative real axis.
    let mut shifted = z;
    let mut correction = c64(0.0, 0.0);
    while shifted.re < STIRLING_MIN && !(shifted.re >= 0.0 && shifted.im.abs() >= STIRLING_MIN) {
        correction += principal_ln(shifted);
        shifted += 1.0;
    }
    finite("log_gamma", stirling(shifted) - correction)
}

fn stirling(z: ComplexScalar) -> ComplexScalar {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = c64(0.0, 0.0);
    for &coef in STIRLING.iter().rev() {
        series = series * inv2 + coef;
    }
    (z - 0.5) * principal_ln(z) - z + HALF_LN_TWO_PI + series * inv
}

/// `Γ(z)` via `exp(log_gamma(z))`.
pub fn gamma(z: ComplexScalar) -> Result<ComplexScalar> {
    finite("gamma", log_gamma(z)?.exp())
}

/// Real fast path; identical to the real part of the complex route.
pub fn log_gamma_real(x: f64) -> Result<f64> {
    Ok(log_gamma(c64(x, 0.0))?.re)
}

/// Real `Γ(x)`, sign included for negative non-integer `x`.
pub fn gamma_real(x: f64) -> Result<f64> {
    finite_real("gamma_real", gamma(c64(x, 0.0))?.re)
}

/// `1/Γ(z)`, which is entire: returns exactly zero at the poles of Γ.
pub fn recip_gamma(z: ComplexScalar) -> Result<ComplexScalar> {
    if is_nonpositive_integer(z) {
        return Ok(c64(0.0, 0.0));
    }
    finite("recip_gamma", (-log_gamma(z)?).exp())
}

/// Euler beta function `Γ(a)Γ(b)/Γ(a+b)`, evaluated in log space.
pub fn beta_fn(a: ComplexScalar, b: ComplexScalar) -> Result<ComplexScalar> {
    let log = log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?;
    finite("beta_fn", log.exp())
}

/// `log Γ_d(α) = (d(d−1)/4) log π + Σ_{j=1}^{d} log Γ(α − (j−1)/2)`.
///
/// This normalization is the one that makes
/// `Γ_d(α) = ∫_{X>0} (det X)^{α−(d+1)/2} etr(−X) dX` with `dX` the Lebesgue
/// measure on the `d(d+1)/2` entries `X_ij, i ≤ j`. In particular `Γ_1 = Γ`.
pub fn log_multivariate_gamma(d: usize, alpha: ComplexScalar) -> Result<ComplexScalar> {
    if d == 0 {
        return Err(Error::domain("multivariate_gamma", "dimension must be positive"));
    }
    let df = d as f64;
    if alpha.re <= (df - 1.0) / 2.0 {
        return Err(Error::domain(
            "multivariate_gamma",
            format!("need Re(alpha) > {}, got {}", (df - 1.0) / 2.0, alpha.re),
        ));
    }
    let mut acc = c64(df * (df - 1.0) / 4.0 * PI.ln(), 0.0);
    for j in 0..d {
        acc += log_gamma(alpha - j as f64 / 2.0)?;
    }
    Ok(acc)
}

/// Multivariate gamma function of the cone of `d×d` positive definite matrices.
pub fn multivariate_gamma(d: usize, alpha: ComplexScalar) -> Result<ComplexScalar> {
    finite("multivariate_gamma", log_multivariate_gamma(d, alpha)?.exp())
}
