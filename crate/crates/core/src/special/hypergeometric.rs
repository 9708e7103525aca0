use super::double_double::CDd;
use super::gamma::{log_gamma, recip_gamma};
use super::{c64, finite, is_nonpositive_integer, principal_ln, principal_power, ComplexScalar};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Evaluation envelope for the hypergeometric kernels.
#[derive(Debug, Clone, Copy)]
pub struct HypergeometricConstants {
    /// Hard cap on series terms.
    pub max_terms: usize,
    /// `|z|` from which the large-argument expansion of ₁F₁ is tried first.
    pub kummer_asymptotic_min: f64,
    /// Largest `|z|` for which the double-double ₁F₁ series is attempted.
    pub kummer_series_max: f64,
    /// Largest acceptable estimated relative error of a ₁F₁ evaluation.
    pub kummer_rel_err: f64,
    /// Direct ₂F₁ series is used for `|z|` up to this radius.
    pub gauss_direct_radius: f64,
    /// When neither `z`, `1−z` nor `z/(z−1)` is inside this radius, ₂F₁ is
    /// continued from `|z| = gauss_direct_radius` by Taylor steps of its ODE.
    pub gauss_continuation_min: f64,
}

pub const HYPERGEOMETRIC_CONSTANTS: HypergeometricConstants = HypergeometricConstants {
    max_terms: 20_000,
    kummer_asymptotic_min: 25.0,
    kummer_series_max: 50.0,
    kummer_rel_err: 1e-11,
    gauss_direct_radius: 0.5,
    gauss_continuation_min: 0.75,
};

const TERM_EPS: f64 = 1e-17;
const UNIT_ROUNDOFF: f64 = 1.12e-16;
const DD_ROUNDOFF: f64 = 1e-31;

/// Parameter lists of a generalized hypergeometric series `pFq`.
///
/// Only `(p, q) = (1, 1)` and `(2, 1)` can be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricParams {
    numerator: Vec<ComplexScalar>,
    denominator: Vec<ComplexScalar>,
}

impl HypergeometricParams {
    pub fn new(numerator: Vec<ComplexScalar>, denominator: Vec<ComplexScalar>) -> Result<Self> {
        if let Some(bad) = denominator.iter().find(|&&b| is_nonpositive_integer(b)) {
            return Err(Error::Pole {
                function: "hypergeometric",
                at: format!("denominator parameter {}", bad.re),
            });
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> &[ComplexScalar] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[ComplexScalar] {
        &self.denominator
    }

    pub fn evaluate(&self, z: ComplexScalar) -> Result<ComplexScalar> {
        match (self.numerator.as_slice(), self.denominator.as_slice()) {
            ([a], [c]) => kummer_1f1(*a, *c, z),
            ([a, b], [c]) => gauss_2f1(*a, *b, *c, z),
            _ => Err(Error::domain(
                "hypergeometric",
                format!(
                    "{}F{} is not supported",
                    self.numerator.len(),
                    self.denominator.len()
                ),
            )),
        }
    }
}

/// Rising factorial `a (a+1) ⋯ (a+j−1)`; `j = 0` gives 1.
pub fn pochhammer(a: ComplexScalar, j: u32) -> ComplexScalar {
    (0..j).fold(c64(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

fn check_denominator(function: &'static str, c: ComplexScalar) -> Result<()> {
    if is_nonpositive_integer(c) {
        Err(Error::Pole {
            function,
            at: format!("c = {}", c.re),
        })
    } else {
        Ok(())
    }
}

/// Confluent hypergeometric function `₁F₁(a; c; z)`.
///
/// Strategy, in order:
/// * `Re z < 0` is reflected with Kummer's transformation.
/// * Series with no possible cancellation (real `z ≥ 0`, real positive
///   parameters) is summed directly in double precision.
/// * For `|z| ≥ kummer_asymptotic_min` the large-argument expansion is tried
///   and accepted when its smallest term is below the error target.
/// * Otherwise, up to `|z| ≤ kummer_series_max`, the Maclaurin series is
///   summed in double-double arithmetic and the loss to cancellation is
///   checked against `kummer_rel_err`.
pub fn kummer_1f1(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    check_denominator("kummer_1f1", c)?;
    if z == c64(0.0, 0.0) {
        return Ok(c64(1.0, 0.0));
    }
    if a == c {
        return finite("kummer_1f1", z.exp());
    }
    if z.re < 0.0 {
        // ₁F₁(a;c;z) = e^z ₁F₁(c−a;c;−z)
        let reflected = kummer_nonnegative(c - a, c, -z)?;
        return finite("kummer_1f1", z.exp() * reflected);
    }
    kummer_nonnegative(a, c, z)
}

fn kummer_nonnegative(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    let k = HYPERGEOMETRIC_CONSTANTS;
    let positive_terms = z.im == 0.0 && a.im == 0.0 && c.im == 0.0 && a.re > 0.0 && c.re > 0.0;
    let terminating = is_nonpositive_integer(a);
    let r = z.norm();

    if positive_terms || (r <= 2.0 && !terminating) {
        let (sum, lost) = kummer_series_f64(a, c, z)?;
        if lost * UNIT_ROUNDOFF <= k.kummer_rel_err {
            return finite("kummer_1f1", sum);
        }
    }
    if r >= k.kummer_asymptotic_min && !terminating {
        if let Some(v) = kummer_asymptotic(a, c, z)? {
            return finite("kummer_1f1", v);
        }
    }
    if r <= k.kummer_series_max || terminating {
        let (sum, max_term) = kummer_series_dd(a, c, z)?;
        // Near a zero of ₁F₁ the relative loss is unbounded; the absolute
        // error is then measured against the function's natural size.
        let scale = if terminating { 0.0 } else { kummer_envelope(a, c, z)? };
        if max_term * DD_ROUNDOFF <= k.kummer_rel_err * sum.norm().max(scale) {
            return finite("kummer_1f1", sum);
        }
        return Err(Error::no_convergence(
            "kummer_1f1",
            format!("cancellation of {:.1e} in series at |z| = {r}", max_term / sum.norm()),
        ));
    }
    Err(Error::no_convergence(
        "kummer_1f1",
        format!("|z| = {r} is outside the evaluation envelope for these parameters"),
    ))
}

/// Returns the sum and the cancellation factor `max|term| / |sum|`.
fn kummer_series_f64(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<(ComplexScalar, f64)> {
    let mut term = c64(1.0, 0.0);
    let mut sum = term;
    let mut max_term = 1.0_f64;
    for n in 0..HYPERGEOMETRIC_CONSTANTS.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * z / ((c + nf) * (nf + 1.0));
        term *= ratio;
        sum += term;
        let t = term.norm();
        max_term = max_term.max(t);
        if !t.is_finite() {
            return Err(Error::Overflow { function: "kummer_1f1" });
        }
        if t == 0.0 || (t <= TERM_EPS * sum.norm() && ratio.norm() < 0.5) {
            return Ok((sum, max_term / sum.norm()));
        }
    }
    Err(Error::no_convergence("kummer_1f1", "series term budget exhausted"))
}

/// Returns the sum and the largest term magnitude.
fn kummer_series_dd(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<(ComplexScalar, f64)> {
    let zz = CDd::from_c64(z);
    let mut term = CDd::from_c64(c64(1.0, 0.0));
    let mut sum = term;
    let mut max_term = 1.0_f64;
    for n in 0..HYPERGEOMETRIC_CONSTANTS.max_terms {
        let nf = n as f64;
        let num = CDd::shifted(a, nf) * zz;
        let den = CDd::shifted(c, nf) * CDd::from_c64(c64(nf + 1.0, 0.0));
        term = term * num / den;
        sum = sum + term;
        let t = term.approx_norm();
        if !t.is_finite() {
            return Err(Error::Overflow { function: "kummer_1f1" });
        }
        max_term = max_term.max(t);
        let ratio = ((a + nf) * z / ((c + nf) * (nf + 1.0))).norm();
        if t == 0.0 || (t <= TERM_EPS * sum.approx_norm() && ratio < 0.5) {
            return Ok((sum.to_c64(), max_term));
        }
    }
    Err(Error::no_convergence("kummer_1f1", "series term budget exhausted"))
}

/// Prefactors of the two terms of the large-`|z|` expansion.
fn kummer_prefactors(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<(ComplexScalar, ComplexScalar)> {
    let ln_z = principal_ln(z);
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let ln_gc = log_gamma(c)?;
    let pref1 = (ln_gc + c64(0.0, sign * PI) * a - a * ln_z).exp() * recip_gamma(c - a)?;
    let pref2 = (ln_gc + z + (a - c) * ln_z).exp() * recip_gamma(a)?;
    Ok((pref1, pref2))
}

/// Typical magnitude of `₁F₁(a; c; z)` near `z`, ignoring oscillation.
fn kummer_envelope(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<f64> {
    let (p1, p2) = kummer_prefactors(a, c, z)?;
    Ok(p1.norm() + p2.norm())
}

/// Splits `₁F₁(a; c; z) = A + E` for large `|z|`, where `A ~ Γ(c)/Γ(c−a) (−z)^{−a}`
/// is algebraic and `E ~ Γ(c)/Γ(a) e^z z^{a−c}` carries the exponential.
///
/// Needs `|z| ≥ kummer_asymptotic_min` and fails when the expansion cannot
/// reach `kummer_rel_err` of the function's size.
pub fn kummer_1f1_parts(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<(ComplexScalar, ComplexScalar)> {
    check_denominator("kummer_1f1_parts", c)?;
    let k = HYPERGEOMETRIC_CONSTANTS;
    if !(z.norm() >= k.kummer_asymptotic_min) {
        return Err(Error::domain(
            "kummer_1f1_parts",
            format!("needs |z| >= {}, got {}", k.kummer_asymptotic_min, z.norm()),
        ));
    }
    let (s1, min1) = divergent_sum(a, a - c + 1.0, -z);
    let (s2, min2) = divergent_sum(c - a, 1.0 - a, z);
    let (pref1, pref2) = kummer_prefactors(a, c, z)?;
    let err = pref1.norm() * min1 + pref2.norm() * min2;
    if !(err <= k.kummer_rel_err * (pref1.norm() + pref2.norm())) {
        return Err(Error::no_convergence(
            "kummer_1f1_parts",
            format!("large-argument expansion too coarse at |z| = {}", z.norm()),
        ));
    }
    Ok((finite("kummer_1f1_parts", pref1 * s1)?, finite("kummer_1f1_parts", pref2 * s2)?))
}

/// Large-`|z|` expansion; `None` when the series does not get small enough.
fn kummer_asymptotic(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<Option<ComplexScalar>> {
    let target = HYPERGEOMETRIC_CONSTANTS.kummer_rel_err;
    let (s1, min1) = divergent_sum(a, a - c + 1.0, -z);
    let (s2, min2) = divergent_sum(c - a, 1.0 - a, z);
    let (pref1, pref2) = kummer_prefactors(a, c, z)?;
    let value = pref1 * s1 + pref2 * s2;
    let err = pref1.norm() * min1 + pref2.norm() * min2;
    if value.norm() > 0.0 && err <= target * value.norm() {
        Ok(Some(value))
    } else {
        Ok(None)
    }
}

/// Sums `Σ (p)_s (q)_s / s! w^{−s}` up to its smallest term.
/// Returns the partial sum and the magnitude of the first omitted term.
fn divergent_sum(p: ComplexScalar, q: ComplexScalar, w: ComplexScalar) -> (ComplexScalar, f64) {
    let inv = w.inv();
    let mut term = c64(1.0, 0.0);
    let mut sum = c64(0.0, 0.0);
    let mut last = f64::INFINITY;
    for s in 0..200 {
        let t = term.norm();
        if t == 0.0 {
            return (sum, 0.0);
        }
        if t > last {
            return (sum, last);
        }
        if t <= TERM_EPS * sum.norm() {
            return (sum, t);
        }
        sum += term;
        last = t;
        let sf = s as f64;
        term *= (p + sf) * (q + sf) / (sf + 1.0) * inv;
    }
    (sum, last)
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for `|z| ≤ 1`.
///
/// `|z| ≤ 1/2` uses the series directly. Beyond that, whichever of the maps
/// `z → z/(z−1)` and `z → 1−z` lands closest to the origin is used; the
/// `1−z` map is skipped when `c−a−b` is an integer. `z = 1` is evaluated by
/// Gauss's summation theorem when `Re(c−a−b) > 0`.
pub fn gauss_2f1(a: ComplexScalar, b: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    check_denominator("gauss_2f1", c)?;
    if z == c64(0.0, 0.0) {
        return Ok(c64(1.0, 0.0));
    }
    let s = c - a - b;
    if z == c64(1.0, 0.0) {
        if s.re <= 0.0 {
            return Err(Error::domain("gauss_2f1", "z = 1 requires Re(c-a-b) > 0"));
        }
        let log = log_gamma(c)? + log_gamma(s)?;
        return finite(
            "gauss_2f1",
            log.exp() * recip_gamma(c - a)? * recip_gamma(c - b)?,
        );
    }
    let r = z.norm();
    if r > 1.0 || (r == 1.0 && s.re <= 0.0) {
        return Err(Error::domain(
            "gauss_2f1",
            format!("|z| = {r} outside the disc of convergence"),
        ));
    }
    if r <= HYPERGEOMETRIC_CONSTANTS.gauss_direct_radius {
        return finite("gauss_2f1", gauss_series(a, b, c, z)?);
    }

    let pfaff = z / (z - 1.0);
    let one_minus = c64(1.0, 0.0) - z;
    let s_integer = s.im == 0.0 && (s.re - s.re.round()).abs() < 1e-12;
    let use_reflection = !s_integer && one_minus.norm() < pfaff.norm();
    let best = if use_reflection { one_minus.norm() } else { pfaff.norm() };

    let value = if best.min(r) > HYPERGEOMETRIC_CONSTANTS.gauss_continuation_min {
        gauss_continuation(a, b, c, z)?
    } else if best >= r && r < 1.0 {
        gauss_series(a, b, c, z)?
    } else if use_reflection {
        // A ₂F₁(a,b;a+b−c+1;1−z) + B (1−z)^{c−a−b} ₂F₁(c−a,c−b;c−a−b+1;1−z)
        let lg_c = log_gamma(c)?;
        let first = (lg_c + log_gamma(s)?).exp() * recip_gamma(c - a)? * recip_gamma(c - b)?;
        let second = (lg_c + log_gamma(-s)?).exp() * recip_gamma(a)? * recip_gamma(b)?;
        first * gauss_series(a, b, a + b - c + 1.0, one_minus)?
            + second
                * principal_power(one_minus, s)?
                * gauss_series(c - a, c - b, s + 1.0, one_minus)?
    } else {
        // (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))
        principal_power(one_minus, -a)? * gauss_series(a, c - b, c, pfaff)?
    };
    finite("gauss_2f1", value)
}

/// Integrates `z(1−z)f'' + (c − (a+b+1)z)f' − ab f = 0` from a point on the
/// ray to `z` inside the direct-series disc, with local Taylor expansions.
fn gauss_continuation(a: ComplexScalar, b: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    let mut z0 = z * (HYPERGEOMETRIC_CONSTANTS.gauss_direct_radius / z.norm());
    let (mut f, mut df) = gauss_series_with_derivative(a, b, c, z0)?;
    let ab = a * b;
    let q1 = -(a + b + 1.0);
    for _ in 0..1000 {
        let remaining = z - z0;
        if remaining.norm() == 0.0 {
            return Ok(f);
        }
        let reach = 0.5 * z0.norm().min((c64(1.0, 0.0) - z0).norm());
        let h = if remaining.norm() <= reach {
            remaining
        } else {
            remaining * (reach / remaining.norm())
        };
        let p0 = z0 * (1.0 - z0);
        let p1 = 1.0 - 2.0 * z0;
        let q0 = c + q1 * z0;
        // f_{n+2} from the ODE coefficient of w^n, w = z − z0.
        let (mut fn0, mut fn1) = (f, df);
        let mut hp1 = h;
        let (mut val, mut der) = (f + df * h, df);
        let mut converged = false;
        for n in 0..HYPERGEOMETRIC_CONSTANTS.max_terms {
            let nf = n as f64;
            let fn2 = -((p1 * nf + q0) * (nf + 1.0) * fn1 + (q1 * nf - nf * (nf - 1.0) - ab) * fn0)
                / (p0 * ((nf + 2.0) * (nf + 1.0)));
            let hp0 = hp1;
            hp1 *= h;
            let term = fn2 * hp1;
            val += term;
            der += fn2 * hp0 * (nf + 2.0);
            fn0 = fn1;
            fn1 = fn2;
            let t = term.norm().max((fn0 * hp0).norm());
            if !t.is_finite() {
                return Err(Error::Overflow { function: "gauss_2f1" });
            }
            if t <= TERM_EPS * val.norm() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::no_convergence("gauss_2f1", "Taylor continuation"));
        }
        f = val;
        df = der;
        z0 += h;
    }
    Err(Error::no_convergence("gauss_2f1", "continuation path too long"))
}

/// Direct series for `₂F₁` and its derivative.
fn gauss_series_with_derivative(
    a: ComplexScalar,
    b: ComplexScalar,
    c: ComplexScalar,
    z: ComplexScalar,
) -> Result<(ComplexScalar, ComplexScalar)> {
    let f = gauss_series(a, b, c, z)?;
    let df = a * b / c * gauss_series(a + 1.0, b + 1.0, c + 1.0, z)?;
    Ok((f, df))
}

fn gauss_series(a: ComplexScalar, b: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> Result<ComplexScalar> {
    if is_nonpositive_integer(c) {
        // Only reachable through the 1−z map with integer shifts; guarded above.
        return Err(Error::Pole {
            function: "gauss_2f1",
            at: format!("c = {}", c.re),
        });
    }
    let mut term = c64(1.0, 0.0);
    let mut sum = term;
    for n in 0..HYPERGEOMETRIC_CONSTANTS.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) * z / ((c + nf) * (nf + 1.0));
        term *= ratio;
        sum += term;
        let t = term.norm();
        if !t.is_finite() {
            return Err(Error::Overflow { function: "gauss_2f1" });
        }
        if t == 0.0 || (t <= TERM_EPS * sum.norm() && ratio.norm() < 1.0) {
            return Ok(sum);
        }
    }
    Err(Error::no_convergence("gauss_2f1", "series term budget exhausted"))
}
