//! Property checks of the matrix-domain engines.

mod common;

use beta_integrals::matrix::{
    orthogonal_invariance_reduce, sample_wishart, wishart_log_density, SymMatrix,
};
use beta_integrals::quadrature::integrate_finite;
use beta_integrals::special::{c64, ComplexScalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn log_det_power_matches_complex_lu_determinant() {
    let worst = common::branch_validation(100, 17);
    assert!(worst <= 1e-10, "largest deviation {worst:e}");
}

#[test]
fn matrix_monte_carlo_matches_eigenvalue_reduction() {
    for check in common::decomposition_checks(400_000, 3) {
        let z = check.deviation_in_se();
        assert!(
            z <= 4.0,
            "{}: Monte Carlo {} ± {:e} vs reduced {} ({z:.2} SE)",
            check.name,
            check.mc.value,
            check.mc.standard_error,
            check.reduced
        );
    }
}

#[test]
fn gaussian_reduction_matches_closed_form() {
    // ∫ exp(−tr T²) dT over 2×2 matrices: diagonal entries give π^{1/2}
    // each and the off-diagonal one (π/2)^{1/2}.
    let checks = common::decomposition_checks(1000, 1);
    let exact = PI * (0.5 * PI).sqrt();
    assert!((checks[0].reduced.re - exact).abs() <= 1e-8 * exact, "{} vs {exact}", checks[0].reduced);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_det_power_is_orthogonally_equivariant(
        angle in 0.0f64..(2.0 * PI),
        t in (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0),
        ar in 0.5f64..3.0, ai in -1.0f64..1.0,
    ) {
        // With Σ = I the value depends on the eigenvalues of T only.
        let (c, s) = (angle.cos(), angle.sin());
        let h = nalgebra::DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let t = SymMatrix::from_coordinates(2, &[t.0, t.1, t.2]).unwrap();
        let rotated = SymMatrix::from_dense(&(&h * t.to_dense() * h.transpose()));
        let i2 = SymMatrix::identity(2);
        let alpha = c64(ar, ai);
        let a = beta_integrals::matrix::log_det_power(&i2, &t, alpha, 1.0).unwrap();
        let b = beta_integrals::matrix::log_det_power(&i2, &rotated, alpha, 1.0).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn log_det_power_conjugates_with_sign(
        t in (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0),
        s in (0.5f64..2.0, -0.4f64..0.4, 0.5f64..2.0),
        ar in 0.5f64..3.0,
    ) {
        // For real α, det(I − iΣT)^{−α} is the conjugate of det(I + iΣT)^{−α}.
        let t = SymMatrix::from_coordinates(2, &[t.0, t.1, t.2]).unwrap();
        let sigma = SymMatrix::from_coordinates(2, &[s.0, s.1, s.2]).unwrap();
        let alpha = c64(ar, 0.0);
        let plus = beta_integrals::matrix::log_det_power(&sigma, &t, alpha, 1.0).unwrap();
        let minus = beta_integrals::matrix::log_det_power(&sigma, &t, alpha, -1.0).unwrap();
        prop_assert!((plus - minus.conj()).norm() <= 1e-13 * plus.norm().max(1.0));
    }
}

/// Chi-square goodness-of-fit threshold: the 0.999 quantile of χ² with 8
/// degrees of freedom.
const CHI_SQUARE_THRESHOLD: f64 = 26.12;
/// Draws per goodness-of-fit check.
const GOF_SAMPLES: usize = 20_000;
/// Bin edges as multiples of the mean trace `dα`.
const TRACE_EDGES: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5];

/// `P(tr X ≤ c)` under `wishart_log_density` with `Σ = I`, by quadrature.
fn trace_cdf(d: usize, alpha: f64, c: f64) -> f64 {
    let sigma = SymMatrix::identity(d);
    let density = |x: &SymMatrix| wishart_log_density(alpha, &sigma, x).map(f64::exp);
    match d {
        1 => integrate_finite(|x: f64| density(&SymMatrix::diag(&[x])), 0.0, c, (alpha - 1.0, 0.0), 1e-10)
            .unwrap()
            .value
            .re,
        2 => {
            // Eigenvalues t₁,₂ = (s ± v)/2 with |dt₁dt₂| = ds dv / 2; the
            // Vandermonde factor is |v|, symmetric in v.
            let constant = orthogonal_invariance_reduce(|_: &SymMatrix| 1.0, 2).unwrap().constant;
            let e = alpha - 1.5;
            let inner = |s: f64| -> beta_integrals::Result<ComplexScalar> {
                let r = integrate_finite(
                    |v: f64| density(&SymMatrix::diag(&[0.5 * (s + v), 0.5 * (s - v)])).map(|w| w * v),
                    0.0,
                    s,
                    (0.0, e),
                    1e-11,
                )?;
                Ok(r.value)
            };
            constant * integrate_finite(inner, 0.0, c, (2.0 * e + 2.0, 0.0), 1e-10).unwrap().value.re
        }
        _ => unreachable!(),
    }
}

fn wishart_goodness_of_fit(d: usize, alpha: f64, seed: u64) -> f64 {
    let mean = d as f64 * alpha;
    let edges: Vec<f64> = TRACE_EDGES.iter().map(|e| e * mean).collect();
    let mut cdf: Vec<f64> = edges.iter().map(|&c| trace_cdf(d, alpha, c)).collect();
    // Far enough out that the remaining mass is negligible.
    let total = trace_cdf(d, alpha, mean + 40.0);
    assert!((total - 1.0).abs() < 1e-8, "density integrates to {total}");
    cdf.push(1.0);
    let mut expected = Vec::with_capacity(cdf.len());
    let mut previous = 0.0;
    for &f in &cdf {
        expected.push((f - previous) * GOF_SAMPLES as f64);
        previous = f;
    }
    let mut observed = vec![0usize; expected.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = SymMatrix::identity(d);
    for _ in 0..GOF_SAMPLES {
        let tr = sample_wishart(alpha, &sigma, &mut rng).unwrap().trace();
        observed[edges.iter().take_while(|&&e| e < tr).count()] += 1;
    }
    observed
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

#[test]
fn wishart_samples_fit_the_density() {
    for (d, alpha, seed) in [(1, 1.5, 5), (1, 0.7, 6), (2, 2.0, 7), (2, 1.2, 8)] {
        let chi2 = wishart_goodness_of_fit(d, alpha, seed);
        assert!(chi2 <= CHI_SQUARE_THRESHOLD, "d = {d}, alpha = {alpha}: chi-square {chi2:.2}");
    }
}
