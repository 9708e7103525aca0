//! The Wishart law on the positive definite cone,
//! `f(X) = det Σ^{−α} det X^{α−(d+1)/2} etr(−Σ⁻¹X) / Γ_d(α)`.
//!
//! With this shape convention the draw `X = L(AA'/2)L'`, `Σ = LL'`, has the
//! law above when `A` is lower triangular with `a_jj² ~ χ²(2α − j)` (row `j`
//! counted from 0) and standard normal entries below the diagonal. The mean
//! is `αΣ`.

use super::{sym_coordinates, SymMatrix};
use crate::error::{Error, Result};
use crate::special::{c64, log_gamma_real, log_multivariate_gamma};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use std::f64::consts::LN_2;

fn check_shape(function: &'static str, alpha: f64, d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::domain(function, "dimension must be positive"));
    }
    if !(alpha > 0.5 * (d as f64 - 1.0)) || !alpha.is_finite() {
        return Err(Error::domain(
            function,
            format!("shape {alpha} must exceed (d-1)/2 = {}", 0.5 * (d as f64 - 1.0)),
        ));
    }
    Ok(())
}

/// `log f(X)` for the law above.
pub fn wishart_log_density(alpha: f64, sigma: &SymMatrix, x: &SymMatrix) -> Result<f64> {
    let d = sigma.dim();
    check_shape("wishart_log_density", alpha, d)?;
    if x.dim() != d {
        return Err(Error::domain("wishart_log_density", "dimension mismatch"));
    }
    let chol = sigma.cholesky()?;
    let log_det_sigma = sigma.log_det()?;
    let log_det_x = x.log_det()?;
    let trace = chol.solve(&x.to_dense()).trace();
    let log_gd = log_multivariate_gamma(d, c64(alpha, 0.0))?.re;
    Ok(-alpha * log_det_sigma + (alpha - 0.5 * (d as f64 + 1.0)) * log_det_x - trace - log_gd)
}

/// One draw from the law above.
pub fn sample_wishart<R: Rng + ?Sized>(alpha: f64, sigma: &SymMatrix, rng: &mut R) -> Result<SymMatrix> {
    let d = sigma.dim();
    check_shape("sample_wishart", alpha, d)?;
    let l = sigma.cholesky()?.l();
    let mut a = DMatrix::<f64>::zeros(d, d);
    for j in 0..d {
        let chi = ChiSquared::new(2.0 * alpha - j as f64)
            .map_err(|e| Error::domain("sample_wishart", e.to_string()))?;
        a[(j, j)] = chi.sample(rng).sqrt();
        for i in j + 1..d {
            a[(i, j)] = rng.sample(StandardNormal);
        }
    }
    let la = &l * a;
    Ok(SymMatrix::from_dense(&((&la * la.transpose()) * 0.5)))
}

/// `log` density of [`sample_wishart`]'s output, computed from the laws of
/// the triangular factors and the Jacobian of `A ↦ L(AA'/2)L'`.
///
/// Only scalar gamma functions enter, so agreement with
/// [`wishart_log_density`] is an independent check of the normalizer
/// `Γ_d(α)`.
pub(crate) fn bartlett_log_density(alpha: f64, sigma: &SymMatrix, x: &SymMatrix) -> Result<f64> {
    let d = sigma.dim();
    check_shape("bartlett_log_density", alpha, d)?;
    let l = sigma.cholesky()?.l();
    let linv = l.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let y2 = &linv * x.to_dense() * linv.transpose() * 2.0;
    let a = SymMatrix::from_dense(&y2).cholesky()?.l();

    let mut log_p = 0.0;
    for j in 0..d {
        let k = 2.0 * alpha - j as f64;
        let ajj = a[(j, j)];
        let s = ajj * ajj;
        // Density of a = √s where s ~ χ²(k): 2a·s^{k/2−1}e^{−s/2}/(2^{k/2}Γ(k/2)).
        log_p += LN_2 + ajj.ln() + (0.5 * k - 1.0) * s.ln() - 0.5 * s - 0.5 * k * LN_2 - log_gamma_real(0.5 * k)?;
        for i in j + 1..d {
            let z = a[(i, j)];
            log_p += -0.5 * z * z - 0.5 * (2.0 * std::f64::consts::PI).ln();
        }
    }
    // |d(AA')/dA| = 2^d ∏ a_jj^{d−j}; halving scales the n coordinates by 1/2;
    // Y ↦ LYL' has Jacobian det(L)^{d+1}.
    let mut log_jac = d as f64 * LN_2;
    for j in 0..d {
        log_jac += (d - j) as f64 * a[(j, j)].ln();
    }
    log_jac -= sym_coordinates(d) as f64 * LN_2;
    let log_det_l: f64 = (0..d).map(|j| l[(j, j)].ln()).sum();
    log_jac += (d as f64 + 1.0) * log_det_l;
    Ok(log_p - log_jac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn exponential_law_in_one_dimension() {
        let v = wishart_log_density(1.0, &SymMatrix::identity(1), &SymMatrix::identity(1)).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_point_in_two_dimensions() {
        let v = wishart_log_density(1.5, &SymMatrix::identity(2), &SymMatrix::identity(2)).unwrap();
        let want = -2.0 - (PI / 2.0).ln();
        assert!((v - want).abs() < 1e-14, "{v} vs {want}");
    }

    #[test]
    fn shape_below_threshold_is_rejected() {
        assert!(wishart_log_density(0.5, &SymMatrix::identity(2), &SymMatrix::identity(2)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_wishart(0.4, &SymMatrix::identity(2), &mut rng).is_err());
    }

    #[test]
    fn triangular_factor_density_matches_closed_form() {
        let sigma = SymMatrix::from_rows(3, &[2.0, 0.3, -0.1, 0.3, 1.0, 0.2, -0.1, 0.2, 0.5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &alpha in &[1.1, 1.5, 2.75] {
            for _ in 0..20 {
                let x = sample_wishart(alpha, &sigma, &mut rng).unwrap();
                let ev = x.eigenvalues();
                if ev[0] < 1e-3 * ev[2] {
                    // Recovering the factor of a nearly singular draw loses digits.
                    continue;
                }
                let a = wishart_log_density(alpha, &sigma, &x).unwrap();
                let b = bartlett_log_density(alpha, &sigma, &x).unwrap();
                assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn samples_are_positive_definite_with_mean_alpha_sigma() {
        let sigma = SymMatrix::identity(2);
        let alpha = 2.0;
        let n = 40_000;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sum = [0.0; 3];
        let mut sum_sq = [0.0; 3];
        for _ in 0..n {
            let x = sample_wishart(alpha, &sigma, &mut rng).unwrap();
            assert!(super::super::is_positive_definite(&x));
            for (k, v) in x.coordinates().iter().enumerate() {
                sum[k] += v;
                sum_sq[k] += v * v;
            }
        }
        let want = [alpha, 0.0, alpha];
        for k in 0..3 {
            let mean = sum[k] / n as f64;
            let se = ((sum_sq[k] / n as f64 - mean * mean) / n as f64).sqrt();
            assert!((mean - want[k]).abs() < 4.0 * se, "coordinate {k}: {mean} ± {se}");
        }
    }
}
