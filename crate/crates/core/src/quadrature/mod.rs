//! One-dimensional integration over the real line, the half line and finite
//! intervals.
//!
//! Three engines sit behind the public functions:
//!
//! * globally adaptive Gauss–Kronrod 7/15 on a set of mapped segments, where
//!   each infinite tail `[X, ∞)` is compactified by `t = X·u^{−k}` with `k`
//!   chosen from the declared decay exponent so the mapped integrand stays
//!   bounded;
//! * for oscillatory integrands, one panel per declared wavelength along each
//!   tail, with the panel sums extrapolated by Levin's u-transform;
//! * tanh-sinh on finite intervals, which absorbs algebraic endpoint
//!   singularities.
//!
//! Integrands may return `f64`, [`ComplexScalar`] or a `Result` of either.

mod kronrod;
mod levin;
mod tanh_sinh;

use crate::error::{Error, Result};
use crate::special::{c64, ComplexScalar};
use kronrod::{adaptive, Map, Segment};
use levin::Levin;

/// Value, error estimate and cost of a numerical integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: ComplexScalar,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// `true` when `error_estimate` met the requested tolerance.
    pub converged: bool,
}

/// What the caller knows about the integrand's behaviour at infinity and at
/// the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayHint {
    /// `|f(t)| = O(|t|^{−p})`; `f64::INFINITY` for exponential decay.
    pub p: f64,
    /// Panel length for oscillatory tails, if any. Half the period of a
    /// sinusoidal tail makes panel sums alternate in sign, which the
    /// extrapolation needs; full periods converge only logarithmically.
    pub wavelength: Option<f64>,
    /// `f(t) = O(t^e)` as `t → 0+`; only used on the half line.
    pub endpoint_exponent: f64,
    /// Length scale separating the core from the tails.
    pub scale: f64,
}

impl DecayHint {
    pub fn algebraic(p: f64) -> Self {
        DecayHint {
            p,
            wavelength: None,
            endpoint_exponent: 0.0,
            scale: 1.0,
        }
    }

    pub fn exponential() -> Self {
        Self::algebraic(f64::INFINITY)
    }

    pub fn with_wavelength(mut self, wavelength: f64) -> Self {
        self.wavelength = Some(wavelength);
        self
    }

    pub fn with_endpoint_exponent(mut self, e: f64) -> Self {
        self.endpoint_exponent = e;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    /// Tail exponent making `t = X·u^{−k}` map `t^{−p}` to a bounded function.
    fn tail_power(&self) -> f64 {
        if self.p.is_infinite() {
            1.0
        } else {
            (1.0 / (self.p - 1.0)).max(1.0)
        }
    }
}

/// Budgets shared by all engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Integrand calls allowed per integral.
    pub max_evals: usize,
    /// Panels allowed along one oscillatory tail.
    pub max_tail_terms: usize,
    /// Absolute tolerance accepted in place of the relative one.
    pub abs_tol: f64,
}

pub const QUADRATURE_CONFIG: QuadratureConfig = QuadratureConfig {
    max_evals: 1_000_000,
    max_tail_terms: 10_000,
    abs_tol: 0.0,
};

/// An oscillatory tail gives up once this many terms pass without the
/// extrapolated value improving.
const STALL_TERMS: usize = 8;
/// Smallest relative tolerance a caller may request.
const MIN_REL_TOL: f64 = 1e-12;
/// Panels of an oscillatory tail are integrated to this relative accuracy.
const PANEL_REL_TOL: f64 = 1e-13;

/// Values an integrand may return.
pub trait IntegrandValue {
    fn into_result(self) -> Result<ComplexScalar>;
}

impl IntegrandValue for ComplexScalar {
    fn into_result(self) -> Result<ComplexScalar> {
        Ok(self)
    }
}

impl IntegrandValue for f64 {
    fn into_result(self) -> Result<ComplexScalar> {
        Ok(c64(self, 0.0))
    }
}

impl<V: IntegrandValue> IntegrandValue for Result<V> {
    fn into_result(self) -> Result<ComplexScalar> {
        self.and_then(IntegrandValue::into_result)
    }
}

fn check_tolerance(rel_tol: f64) -> Result<()> {
    if rel_tol >= MIN_REL_TOL && rel_tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "quadrature",
            format!("relative tolerance must be in [{MIN_REL_TOL}, inf), got {rel_tol}"),
        ))
    }
}

fn check_hint(hint: &DecayHint) -> Result<()> {
    // Oscillatory tails converge for any positive decay rate.
    let min_p = if hint.wavelength.is_some() { 0.0 } else { 1.0 };
    if !(hint.p > min_p) {
        return Err(Error::DivergentHint(hint.p));
    }
    if !(hint.scale > 0.0) || !hint.scale.is_finite() {
        return Err(Error::domain("quadrature", "scale must be positive and finite"));
    }
    if let Some(w) = hint.wavelength {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::domain("quadrature", "wavelength must be positive and finite"));
        }
    }
    Ok(())
}

/// `∫_{−∞}^{∞} f(t) dt` with the default budgets.
pub fn integrate_real_line<F, V>(f: F, hint: &DecayHint, rel_tol: f64) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> V,
    V: IntegrandValue,
{
    integrate_real_line_with(f, hint, rel_tol, &QUADRATURE_CONFIG)
}

/// `∫_{−∞}^{∞} f(t) dt`.
pub fn integrate_real_line_with<F, V>(
    f: F,
    hint: &DecayHint,
    rel_tol: f64,
    config: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> V,
    V: IntegrandValue,
{
    check_tolerance(rel_tol)?;
    check_hint(hint)?;
    let g = |t: f64| f(t).into_result();
    let l = hint.scale;
    match hint.wavelength {
        None => {
            let k = hint.tail_power();
            let segments = [
                Segment::identity(-l, l),
                Segment {
                    a: 0.0,
                    b: 1.0,
                    map: Map::Tail { start: l, dir: 1.0, scale: l, k },
                },
                Segment {
                    a: 0.0,
                    b: 1.0,
                    map: Map::Tail { start: -l, dir: -1.0, scale: l, k },
                },
            ];
            let r = adaptive(&g, &segments, rel_tol, config.abs_tol, config.max_evals)?;
            Ok(IntegralEstimate {
                value: r.value,
                error_estimate: r.err,
                evaluations: r.evals,
                converged: r.converged,
            })
        }
        Some(lambda) => {
            let x = l.max(4.0 * lambda);
            let core = adaptive(&g, &[Segment::identity(-x, x)], rel_tol * 0.1, config.abs_tol, config.max_evals)?;
            let mut budget = Budget::new(config.max_evals, core.evals);
            let target = tail_target(core.value, core.err, rel_tol, config);
            let right = oscillatory_tail(&g, x, 1.0, lambda, target, config, &mut budget)?;
            let left = oscillatory_tail(&g, -x, -1.0, lambda, target, config, &mut budget)?;
            let value = core.value + right.value + left.value;
            let err = core.err + right.err + left.err;
            Ok(IntegralEstimate {
                value,
                error_estimate: err,
                evaluations: budget.used,
                converged: core.converged && right.converged && left.converged,
            })
        }
    }
}

/// `∫_0^∞ f(t) dt` with the default budgets.
pub fn integrate_half_line<F, V>(f: F, hint: &DecayHint, rel_tol: f64) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> V,
    V: IntegrandValue,
{
    integrate_half_line_with(f, hint, rel_tol, &QUADRATURE_CONFIG)
}

/// `∫_0^∞ f(t) dt`.
///
/// The head `[0, X]` is integrated in the variable `t = X·v^m` with `m`
/// taken from the endpoint exponent, so `t^e` becomes at worst `v^1`.
pub fn integrate_half_line_with<F, V>(
    f: F,
    hint: &DecayHint,
    rel_tol: f64,
    config: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> V,
    V: IntegrandValue,
{
    check_tolerance(rel_tol)?;
    check_hint(hint)?;
    let e = hint.endpoint_exponent;
    if !(e > -1.0) {
        return Err(Error::EndpointSingularity(e));
    }
    let g = |t: f64| f(t).into_result();
    let m = (2.0 / (1.0 + e)).max(1.0);
    let l = hint.scale;
    match hint.wavelength {
        None => {
            let segments = [
                Segment {
                    a: 0.0,
                    b: 1.0,
                    map: Map::Power { origin: 0.0, len: l, m },
                },
                Segment {
                    a: 0.0,
                    b: 1.0,
                    map: Map::Tail { start: l, dir: 1.0, scale: l, k: hint.tail_power() },
                },
            ];
            let r = adaptive(&g, &segments, rel_tol, config.abs_tol, config.max_evals)?;
            Ok(IntegralEstimate {
                value: r.value,
                error_estimate: r.err,
                evaluations: r.evals,
                converged: r.converged,
            })
        }
        Some(lambda) => {
            let x = l.max(4.0 * lambda);
            let head = [Segment {
                a: 0.0,
                b: 1.0,
                map: Map::Power { origin: 0.0, len: x, m },
            }];
            let core = adaptive(&g, &head, rel_tol * 0.1, config.abs_tol, config.max_evals)?;
            let mut budget = Budget::new(config.max_evals, core.evals);
            let target = tail_target(core.value, core.err, rel_tol, config);
            let tail = oscillatory_tail(&g, x, 1.0, lambda, target, config, &mut budget)?;
            Ok(IntegralEstimate {
                value: core.value + tail.value,
                error_estimate: core.err + tail.err,
                evaluations: budget.used,
                converged: core.converged && tail.converged,
            })
        }
    }
}

/// `∫_a^b f(x) dx` where `f` may blow up like `(x−a)^{e_a}` and `(b−x)^{e_b}`.
pub fn integrate_finite<F, V>(
    f: F,
    a: f64,
    b: f64,
    endpoint_exponents: (f64, f64),
    rel_tol: f64,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> V,
    V: IntegrandValue,
{
    check_tolerance(rel_tol)?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("quadrature", format!("need finite a < b, got [{a}, {b}]")));
    }
    for e in [endpoint_exponents.0, endpoint_exponents.1] {
        if !(e > -1.0) {
            return Err(Error::EndpointSingularity(e));
        }
    }
    let g = |t: f64| f(t).into_result();
    let r = tanh_sinh::integrate(&g, a, b, rel_tol, QUADRATURE_CONFIG.max_evals)?;
    if !r.converged {
        return Err(Error::no_convergence(
            "quadrature",
            format!("tanh-sinh refinement stalled at error {:.3e}", r.err),
        ));
    }
    Ok(IntegralEstimate {
        value: r.value,
        error_estimate: r.err,
        evaluations: r.evals,
        converged: true,
    })
}

/// `∫_a^b f(t) dt` for a smooth integrand by adaptive Gauss-Kronrod.
pub(crate) fn integrate_interval<F>(f: &F, a: f64, b: f64, rel_tol: f64, config: &QuadratureConfig) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<ComplexScalar>,
{
    check_tolerance(rel_tol)?;
    let r = adaptive(f, &[Segment::identity(a, b)], rel_tol, config.abs_tol, config.max_evals)?;
    Ok(IntegralEstimate {
        value: r.value,
        error_estimate: r.err,
        evaluations: r.evals,
        converged: r.converged,
    })
}

/// `∫_{−∞}^{upper} f(t) dt` for a non-oscillatory integrand.
pub(crate) fn integrate_up_to<F>(
    f: &F,
    upper: f64,
    hint: &DecayHint,
    rel_tol: f64,
    config: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(f64) -> Result<ComplexScalar>,
{
    check_hint(hint)?;
    let l = hint.scale;
    let k = hint.tail_power();
    let mut segments = Vec::with_capacity(2);
    if upper > -l {
        segments.push(Segment::identity(-l, upper));
        segments.push(Segment {
            a: 0.0,
            b: 1.0,
            map: Map::Tail { start: -l, dir: -1.0, scale: l, k },
        });
    } else {
        segments.push(Segment {
            a: 0.0,
            b: 1.0,
            map: Map::Tail { start: upper, dir: -1.0, scale: l, k },
        });
    }
    let r = adaptive(f, &segments, rel_tol, config.abs_tol, config.max_evals)?;
    Ok(IntegralEstimate {
        value: r.value,
        error_estimate: r.err,
        evaluations: r.evals,
        converged: r.converged,
    })
}

struct Budget {
    max: usize,
    used: usize,
}

impl Budget {
    fn new(max: usize, used: usize) -> Self {
        Budget { max, used }
    }

    fn remaining(&self) -> usize {
        self.max.saturating_sub(self.used)
    }
}

/// Absolute accuracy demanded from each tail, given the core estimate.
fn tail_target(core: ComplexScalar, core_err: f64, rel_tol: f64, config: &QuadratureConfig) -> f64 {
    (0.25 * rel_tol * core.norm())
        .max(config.abs_tol)
        .max(core_err)
        .max(1e-300)
}

struct Tail {
    value: ComplexScalar,
    err: f64,
    converged: bool,
}

/// `∫` from `start` to `dir·∞` as a series of one-wavelength panels,
/// extrapolated with Levin's u-transform.
///
/// On logarithmically converging panel sums the extrapolation amplifies
/// rounding noise, so once the estimates stop improving the best one so far
/// is returned with `converged = false` and an honest error.
fn oscillatory_tail<F>(
    f: &F,
    start: f64,
    dir: f64,
    lambda: f64,
    target: f64,
    config: &QuadratureConfig,
    budget: &mut Budget,
) -> Result<Tail>
where
    F: Fn(f64) -> Result<ComplexScalar>,
{
    let mut partial = c64(0.0, 0.0);
    let mut levin = Levin::new(1.0);
    let mut previous_change = f64::INFINITY;
    // (estimate, error, index)
    let mut best: Option<(ComplexScalar, f64, usize)> = None;
    for n in 0..config.max_tail_terms {
        let a = start + dir * lambda * n as f64;
        let b = start + dir * lambda * (n + 1) as f64;
        let (lo, hi) = if dir > 0.0 { (a, b) } else { (b, a) };
        let panel = adaptive(
            f,
            &[Segment::identity(lo, hi)],
            PANEL_REL_TOL,
            1e-3 * target,
            budget.remaining(),
        )?;
        budget.used += panel.evals;
        let term = panel.value;
        partial += term;
        if term.norm() <= 1e-3 * target && n >= 2 {
            return Ok(Tail {
                value: partial,
                err: term.norm(),
                converged: true,
            });
        }
        let est = levin.next(partial, term * (1.0 + n as f64));
        let change = levin.last_change;
        let stable = change.max(previous_change);
        previous_change = change;
        if n < 3 {
            continue;
        }
        if best.is_none_or(|(_, e, _)| stable < e) {
            best = Some((est, stable, n));
        }
        if stable <= target {
            return Ok(Tail {
                value: est,
                err: stable,
                converged: true,
            });
        }
        if let Some((value, err, at)) = best {
            if n >= at + STALL_TERMS {
                return Ok(Tail {
                    value,
                    err,
                    converged: false,
                });
            }
        }
    }
    let (value, err, _) = best.unwrap_or((partial, f64::INFINITY, 0));
    Err(Error::no_convergence(
        "quadrature",
        format!(
            "oscillatory tail not settled after {} panels (best change {err:.3e} at value {value})",
            config.max_tail_terms
        ),
    ))
}
