//! Double-exponential (tanh-sinh) rule on a finite interval.
//!
//! Nodes cluster doubly exponentially at both ends, which absorbs algebraic
//! endpoint singularities `(x−a)^p`, `p > −1`, without being told about them.

use super::kronrod::{eval, EPS};
use crate::error::{Error, Result};
use crate::special::{c64, ComplexScalar};
use std::f64::consts::FRAC_PI_2;

/// Deepest level; step `h = 2^{−MAX_LEVEL}`.
const MAX_LEVEL: u32 = 12;
/// Abscissae run over `|s| ≤ S_MAX` in the `sinh` variable.
const S_MAX: f64 = 6.5;

pub(crate) struct TanhSinh {
    pub value: ComplexScalar,
    pub err: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Weight and distance from the nearer endpoint, in units of `(b−a)/2`.
#[inline]
fn node(s: f64) -> (f64, f64) {
    let v = FRAC_PI_2 * s.sinh();
    // 1 − tanh v = 2/(1 + e^{2v}), computed without cancellation.
    let e = (2.0 * v).exp();
    let gap = 2.0 / (1.0 + e);
    let cosh_v = v.cosh();
    let w = FRAC_PI_2 * s.cosh() / (cosh_v * cosh_v);
    (w, gap)
}

pub(crate) fn integrate<F>(f: &F, a: f64, b: f64, rel_tol: f64, max_evals: usize) -> Result<TanhSinh>
where
    F: Fn(f64) -> Result<ComplexScalar>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut evals = 0usize;

    // Symmetric pair at ±s: points a + half·gap and b − half·gap.
    let pair = |s: f64, evals: &mut usize| -> Result<(ComplexScalar, f64)> {
        let (w, gap) = node(s);
        let d = half * gap;
        if w == 0.0 || d == 0.0 {
            return Ok((c64(0.0, 0.0), 0.0));
        }
        let left = a + d;
        let right = b - d;
        let mut sum = c64(0.0, 0.0);
        let mut mag = 0.0;
        if left > a && left < b {
            let v = eval(f, left)?;
            sum += v;
            mag += v.norm();
            *evals += 1;
        }
        if right > a && right < b {
            let v = eval(f, right)?;
            sum += v;
            mag += v.norm();
            *evals += 1;
        }
        Ok((sum * w, mag * w))
    };

    let mut h = 1.0;
    let center = eval(f, mid)? * FRAC_PI_2;
    evals += 1;
    let mut sum = center;
    let mut abs_sum = center.norm();
    let mut k = 1;
    while (k as f64) * h <= S_MAX {
        let (v, m) = pair(k as f64 * h, &mut evals)?;
        sum += v;
        abs_sum += m;
        k += 1;
    }
    let mut previous = sum * h * half;
    let mut err = f64::INFINITY;

    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        // New nodes are the odd multiples of the halved step.
        let mut k = 1;
        while (k as f64) * h <= S_MAX {
            let (v, m) = pair(k as f64 * h, &mut evals)?;
            sum += v;
            abs_sum += m;
            k += 2;
        }
        if evals > max_evals {
            return Err(Error::no_convergence("quadrature", "tanh-sinh evaluation budget exhausted"));
        }
        let current = sum * h * half;
        err = (current - previous).norm();
        let floor = 100.0 * EPS * abs_sum * h * half.abs();
        previous = current;
        if err <= rel_tol * current.norm() || err <= floor {
            return Ok(TanhSinh {
                value: current,
                err: err.max(floor),
                evals,
                converged: true,
            });
        }
    }
    Ok(TanhSinh {
        value: previous,
        err,
        evals,
        converged: false,
    })
}
