//! Scalar special functions over real and complex arguments.
//!
//! All complex powers and logarithms here use the principal branch,
//! `arg ∈ (−π, π]`. Every public function is pure and returns a typed
//! [`Error`](crate::Error) instead of a non-finite value.

mod bessel;
mod double_double;
mod gamma;
mod hypergeometric;

pub use bessel::{bessel_j, bessel_j_scaled, bessel_k, BesselConstants, BESSEL_CONSTANTS};
pub use gamma::{
    beta_fn, gamma, gamma_real, log_gamma, log_gamma_real, log_multivariate_gamma,
    multivariate_gamma, recip_gamma,
};
pub use hypergeometric::{
    gauss_2f1, kummer_1f1, kummer_1f1_parts, pochhammer, HypergeometricParams, HYPERGEOMETRIC_CONSTANTS,
};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Complex scalar carrying every identity parameter.
pub type ComplexScalar = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

/// Principal logarithm with `arg ∈ (−π, π]`.
///
/// A negative zero imaginary part is treated as `+0`, so the negative real
/// axis maps to `arg = +π` rather than `−π`.
#[inline]
pub fn principal_ln(z: ComplexScalar) -> ComplexScalar {
    // `+ 0.0` turns -0.0 into +0.0 before atan2 sees it.
    let arg = (z.im + 0.0).atan2(z.re);
    Complex64::new(z.norm().ln(), arg)
}

/// `base^exponent = exp(exponent · Log base)` on the principal branch.
pub fn principal_power(base: ComplexScalar, exponent: ComplexScalar) -> Result<ComplexScalar> {
    if base == Complex64::new(0.0, 0.0) {
        if exponent.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::domain(
            "principal_power",
            "zero base with non-positive real exponent",
        ));
    }
    finite("principal_power", (exponent * principal_ln(base)).exp())
}

/// Rejects NaN and infinite values with an overflow error.
#[inline]
pub(crate) fn finite(function: &'static str, z: ComplexScalar) -> Result<ComplexScalar> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Overflow { function })
    }
}

#[inline]
pub(crate) fn finite_real(function: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Overflow { function })
    }
}

/// True when `z` sits exactly on a non-positive integer.
#[inline]
pub(crate) fn is_nonpositive_integer(z: ComplexScalar) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn power_of_one_is_one() {
        for e in [c64(0.3, 2.0), c64(-7.0, 0.0), c64(0.0, -1.5)] {
            let v = principal_power(c64(1.0, 0.0), e).unwrap();
            assert!((v - c64(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn reciprocal_of_one_plus_i() {
        let v = principal_power(c64(1.0, 1.0), c64(-1.0, 0.0)).unwrap();
        assert!((v - c64(0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn sqrt_of_i_is_principal() {
        let v = principal_power(c64(0.0, 1.0), c64(0.5, 0.0)).unwrap();
        assert!((v - c64(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn negative_axis_has_arg_pi() {
        assert_eq!(principal_ln(c64(-2.0, -0.0)).im, PI);
        assert_eq!(principal_ln(c64(-2.0, 0.0)).im, PI);
    }

    #[test]
    fn zero_base() {
        assert_eq!(
            principal_power(c64(0.0, 0.0), c64(2.0, 1.0)).unwrap(),
            c64(0.0, 0.0)
        );
        assert!(principal_power(c64(0.0, 0.0), c64(0.0, 1.0)).is_err());
        assert!(principal_power(c64(0.0, 0.0), c64(-1.0, 0.0)).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        assert!(matches!(
            principal_power(c64(1e300, 0.0), c64(5.0, 0.0)),
            Err(Error::Overflow { .. })
        ));
    }
}
