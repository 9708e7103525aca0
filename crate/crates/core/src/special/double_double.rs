//! Just enough double-double complex arithmetic to sum power series whose
//! terms are many orders of magnitude larger than the result.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + rhs.neg()
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        // Two Newton-style correction steps on the quotient.
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    #[inline]
    pub fn from_c64(z: Complex64) -> Self {
        CDd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    /// Exact `z + n` for a double `z` and a small integer `n`.
    #[inline]
    pub fn shifted(z: Complex64, n: f64) -> Self {
        let (hi, lo) = two_sum(z.re, n);
        CDd {
            re: Dd { hi, lo },
            im: Dd::from_f64(z.im),
        }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Cheap magnitude estimate from the leading parts.
    #[inline]
    pub fn approx_norm(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, rhs: CDd) -> CDd {
        CDd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for CDd {
    type Output = CDd;
    #[inline]
    fn div(self, rhs: CDd) -> CDd {
        let denom = rhs.re * rhs.re + rhs.im * rhs.im;
        let re = self.re * rhs.re + self.im * rhs.im;
        let im = self.im * rhs.re - self.re * rhs.im;
        CDd {
            re: re / denom,
            im: im / denom,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_digits_lost_in_plain_double() {
        // (1 + 2^-60) - 1 is zero in f64 but exact in double-double.
        let tiny = 2f64.powi(-60);
        let x = Dd::from_f64(1.0) + Dd::from_f64(tiny) - Dd::from_f64(1.0);
        assert_eq!(x.to_f64(), tiny);
    }

    #[test]
    fn division_round_trips() {
        let a = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        let back = a * Dd::from_f64(3.0) - Dd::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-30);
    }

    #[test]
    fn complex_division() {
        let a = CDd::from_c64(Complex64::new(1.0, 2.0));
        let b = CDd::from_c64(Complex64::new(3.0, -4.0));
        let q = (a / b).to_c64();
        let want = Complex64::new(1.0, 2.0) / Complex64::new(3.0, -4.0);
        assert!((q - want).norm() < 1e-16);
    }
}
