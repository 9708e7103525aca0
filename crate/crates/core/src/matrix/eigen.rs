//! Integrals over eigenvalues.
//!
//! For an orthogonally invariant `g` on `S^{d×d}`,
//! `∫ g(T) dT = c_d ∫_{ℝ^d} g(diag t) ∏_{j<k} |t_j − t_k| dt` with
//! `c_d = π^{d²/2} / (d! Γ_d(d/2))`. The right side is evaluated by nested
//! one-dimensional quadrature over the ordered sector `t_1 < … < t_d`.

use super::SymMatrix;
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_real_line_with, integrate_up_to, DecayHint, IntegralEstimate, IntegrandValue, QuadratureConfig,
    QUADRATURE_CONFIG,
};
use crate::special::{c64, multivariate_gamma, ComplexScalar};
use std::cell::Cell;
use std::f64::consts::PI;

/// An unordered tuple of eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPoint {
    pub values: Vec<f64>,
}

impl EigenPoint {
    pub fn new(values: Vec<f64>) -> Self {
        EigenPoint { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// `∏_{j<k} |t_j − t_k|`; 1 for fewer than two values.
pub fn vandermonde(t: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 0..t.len() {
        for k in j + 1..t.len() {
            p *= (t[j] - t[k]).abs();
        }
    }
    p
}

/// Largest dimension handled by nested quadrature.
const MAX_DIM: usize = 3;

/// `∫_{ℝ^d} h(t) dt` for a permutation-symmetric `h`, `d ≤ 3`.
///
/// `hint` describes the decay of `h` in one coordinate with the others
/// fixed. Inner integrals run at a tenth of `rel_tol`.
pub fn eigen_integrate<F, V>(h: F, d: usize, hint: &DecayHint, rel_tol: f64) -> Result<IntegralEstimate>
where
    F: Fn(&EigenPoint) -> V,
    V: IntegrandValue,
{
    eigen_integrate_with(h, d, hint, rel_tol, &QUADRATURE_CONFIG)
}

/// [`eigen_integrate`] with explicit budgets; `config.abs_tol` applies to
/// the outer integral and, scaled by a tenth, to the inner ones.
pub fn eigen_integrate_with<F, V>(
    h: F,
    d: usize,
    hint: &DecayHint,
    rel_tol: f64,
    config: &QuadratureConfig,
) -> Result<IntegralEstimate>
where
    F: Fn(&EigenPoint) -> V,
    V: IntegrandValue,
{
    let inner_config = QuadratureConfig {
        abs_tol: 0.1 * config.abs_tol,
        ..*config
    };
    let inner_tol = (0.1 * rel_tol).max(1e-12);
    let inner_evals = Cell::new(0usize);
    let inner_ok = Cell::new(true);
    let inner = |f: &dyn Fn(f64) -> Result<ComplexScalar>, upper: f64| -> Result<ComplexScalar> {
        let r = integrate_up_to(&f, upper, hint, inner_tol, &inner_config)?;
        inner_evals.set(inner_evals.get() + r.evaluations);
        if !r.converged {
            inner_ok.set(false);
        }
        Ok(r.value)
    };
    let (outer, factor) = match d {
        1 => (integrate_real_line_with(|t| h(&EigenPoint::new(vec![t])), hint, rel_tol, config)?, 1.0),
        2 => {
            let r = integrate_real_line_with(
                |t2| inner(&|t1| h(&EigenPoint::new(vec![t1, t2])).into_result(), t2),
                hint,
                rel_tol,
                config,
            )?;
            (r, 2.0)
        }
        3 => {
            let r = integrate_real_line_with(
                |t3| {
                    inner(
                        &|t2| inner(&|t1| h(&EigenPoint::new(vec![t1, t2, t3])).into_result(), t2),
                        t3,
                    )
                },
                hint,
                rel_tol,
                config,
            )?;
            (r, 6.0)
        }
        _ => {
            return Err(Error::domain(
                "eigen_integrate",
                format!("dimension must be between 1 and {MAX_DIM}, got {d}"),
            ))
        }
    };
    let value = outer.value * factor;
    let inner_err = if d > 1 { inner_tol * value.norm() + inner_config.abs_tol } else { 0.0 };
    Ok(IntegralEstimate {
        value,
        error_estimate: outer.error_estimate * factor + inner_err,
        evaluations: outer.evaluations + inner_evals.get(),
        converged: outer.converged && inner_ok.get(),
    })
}

/// An orthogonally invariant matrix integrand restricted to diagonal
/// matrices and weighted by the Vandermonde factor.
pub struct ReducedIntegrand<G> {
    g: G,
    d: usize,
    /// `π^{d²/2} / (d! Γ_d(d/2))`.
    pub constant: f64,
}

impl<G, V> ReducedIntegrand<G>
where
    G: Fn(&SymMatrix) -> V,
    V: IntegrandValue,
{
    /// `g(diag t) ∏_{j<k} |t_j − t_k|`.
    pub fn eval(&self, p: &EigenPoint) -> Result<ComplexScalar> {
        if p.dim() != self.d {
            return Err(Error::domain("ReducedIntegrand", "dimension mismatch"));
        }
        Ok((self.g)(&SymMatrix::diag(&p.values)).into_result()? * vandermonde(&p.values))
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}

/// Reduces `∫_{S^{d×d}} g dT` to `constant · ∫_{ℝ^d} eval(t) dt`.
///
/// `g` must satisfy `g(HTH') = g(T)` for orthogonal `H`; this is not checked.
pub fn orthogonal_invariance_reduce<G>(g: G, d: usize) -> Result<ReducedIntegrand<G>> {
    if d == 0 {
        return Err(Error::domain("orthogonal_invariance_reduce", "dimension must be positive"));
    }
    let mut factorial = 1.0;
    for k in 2..=d {
        factorial *= k as f64;
    }
    let gd = multivariate_gamma(d, c64(0.5 * d as f64, 0.0))?.re;
    let constant = PI.powf(0.5 * (d * d) as f64) / (factorial * gd);
    Ok(ReducedIntegrand { g, d, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_real_line;

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde(&[]), 1.0);
        assert_eq!(vandermonde(&[3.0]), 1.0);
        assert_eq!(vandermonde(&[1.0, 4.0, 2.0]), 3.0 * 1.0 * 2.0);
    }

    #[test]
    fn one_dimension_is_the_real_line() {
        let hint = DecayHint::algebraic(2.0);
        let a = eigen_integrate(|p: &EigenPoint| 1.0 / (1.0 + p.values[0].powi(2)), 1, &hint, 1e-10).unwrap();
        let b = integrate_real_line(|t: f64| 1.0 / (1.0 + t * t), &hint, 1e-10).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn gaussian_vandermonde_in_two_dimensions() {
        let h = |p: &EigenPoint| (-p.values.iter().map(|t| t * t).sum::<f64>()).exp() * vandermonde(&p.values);
        let r = eigen_integrate(h, 2, &DecayHint::exponential(), 1e-9).unwrap();
        let want = (2.0 * PI).sqrt();
        assert!((r.value.re - want).abs() < 1e-8 * want, "{:?}", r);
    }

    #[test]
    fn reduction_constants() {
        let c = |d| orthogonal_invariance_reduce(|_: &SymMatrix| 1.0, d).unwrap().constant;
        assert!((c(1) - 1.0).abs() < 1e-14);
        assert!((c(2) - PI / 2.0).abs() < 1e-14);
        assert!((c(3) - PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_ensemble_normalization() {
        // ∫ etr(−T²) dT = π^{d/2} (π/2)^{d(d−1)/4} over the coordinates.
        for d in 2..=3usize {
            let g = |t: &SymMatrix| {
                let m = t.to_dense();
                (-(&m * &m).trace()).exp()
            };
            let red = orthogonal_invariance_reduce(g, d).unwrap();
            let r = eigen_integrate(|p: &EigenPoint| red.eval(p), d, &DecayHint::exponential(), 1e-8).unwrap();
            let want = PI.powf(0.5 * d as f64) * (0.5 * PI).powf(0.25 * (d * (d - 1)) as f64);
            let got = red.constant * r.value.re;
            assert!((got - want).abs() < 1e-7 * want, "d={d}: {got} vs {want}");
        }
    }
}
