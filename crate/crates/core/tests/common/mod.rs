//! Checks shared by the property tests and the acceptance target.
#![allow(dead_code)]

use beta_integrals::matrix::{
    eigen_integrate, log_det_power, mc_integrate_sym, orthogonal_invariance_reduce, EigenPoint, MCEstimate, Proposal,
    SymMatrix,
};
use beta_integrals::quadrature::{integrate_half_line, DecayHint};
use beta_integrals::special::{bessel_k, c64, gamma_real, kummer_1f1, log_gamma, principal_ln, ComplexScalar};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{LN_2, PI};

/// Steps along `s ∈ [0, 1]` when following `log det(I + s·iΣT)`.
const TRACKING_STEPS: usize = 256;

fn complex_det(m: &DMatrix<ComplexScalar>) -> ComplexScalar {
    m.clone().lu().determinant()
}

/// `log det(I + sign·iΣT)` from complex LU determinants, with the imaginary
/// part followed continuously from `T = 0`.
pub fn tracked_log_det(sigma: &SymMatrix, t: &SymMatrix, sign: f64) -> ComplexScalar {
    let d = sigma.dim();
    let st = (sigma.to_dense() * t.to_dense()).map(|x| c64(0.0, sign * x));
    let identity = DMatrix::<ComplexScalar>::identity(d, d);
    let mut log = c64(0.0, 0.0);
    let mut previous = c64(1.0, 0.0);
    for k in 1..=TRACKING_STEPS {
        let s = k as f64 / TRACKING_STEPS as f64;
        let det = complex_det(&(&identity + &st * c64(s, 0.0)));
        log += principal_ln(det / previous);
        previous = det;
    }
    log
}

fn random_sym(d: usize, scale: f64, rng: &mut ChaCha8Rng) -> SymMatrix {
    let mut m = SymMatrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let z: f64 = rng.sample(StandardNormal);
            m.set(i, j, scale * z);
        }
    }
    m
}

fn random_pd(d: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
    let a = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    SymMatrix::from_dense(&(&a * a.transpose() + DMatrix::identity(d, d) * 0.1))
}

/// Largest `|log_det_power − (−α·tracked log det)|` over random draws with
/// `d ≤ 4`, both signs and complex `α`.
pub fn branch_validation(draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 0..draws {
        let d = rng.random_range(1..=4);
        let sigma = random_pd(d, &mut rng);
        let t = random_sym(d, rng.random_range(0.1..5.0), &mut rng);
        let alpha = c64(rng.random_range(0.5..4.0), rng.random_range(-2.0..2.0));
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let fast = log_det_power(&sigma, &t, alpha, sign).unwrap();
        let direct = -alpha * tracked_log_det(&sigma, &t, sign);
        worst = worst.max((fast - direct).norm());
    }
    worst
}

/// Matrix Monte Carlo against reduced eigenvalue quadrature for one
/// orthogonally invariant integrand on `S^{2×2}`.
pub struct DecompositionCheck {
    pub name: &'static str,
    pub mc: MCEstimate,
    pub reduced: ComplexScalar,
}

impl DecompositionCheck {
    pub fn deviation_in_se(&self) -> f64 {
        (self.mc.value - self.reduced).norm() / self.mc.standard_error
    }
}

fn decomposition<G>(name: &'static str, g: G, hint: DecayHint, proposal: Proposal, samples: usize, seed: u64) -> DecompositionCheck
where
    G: Fn(&SymMatrix) -> f64 + Sync + Copy,
{
    let mc = mc_integrate_sym(g, 2, &proposal, samples, seed).unwrap();
    let reduced = orthogonal_invariance_reduce(g, 2).unwrap();
    let q = eigen_integrate(|p: &EigenPoint| reduced.eval(p), 2, &hint, 1e-9).unwrap();
    assert!(q.converged, "{name}: {q:?}");
    DecompositionCheck {
        name,
        mc,
        reduced: q.value * reduced.constant,
    }
}

/// `exp(−tr T²)` and `det(I+T²)^{−2}` at `d = 2`.
pub fn decomposition_checks(samples: usize, seed: u64) -> Vec<DecompositionCheck> {
    let gaussian = |t: &SymMatrix| {
        let m = t.to_dense();
        (-(&m * &m).trace()).exp()
    };
    let cauchy = |t: &SymMatrix| {
        let m = t.to_dense();
        let det = (DMatrix::<f64>::identity(2, 2) + &m * &m).determinant();
        det.powi(-2)
    };
    vec![
        decomposition(
            "exp(-tr T^2)",
            gaussian,
            DecayHint::exponential(),
            Proposal::Gaussian { scale: 0.8 },
            samples,
            seed,
        ),
        decomposition(
            "det(I+T^2)^-2",
            cauchy,
            DecayHint::algebraic(3.0),
            Proposal::StudentT { dof: 1.0, scale: 0.7 },
            samples,
            seed ^ 1,
        ),
    ]
}

/// Distance between two logarithms, ignoring multiples of `2πi`.
pub fn log_distance(a: ComplexScalar, b: ComplexScalar) -> f64 {
    let d = a - b;
    let turns = (d.im / (2.0 * PI)).round();
    c64(d.re, d.im - 2.0 * PI * turns).norm()
}

/// 100 points with real part in (0, 10] and imaginary part in [−5, 5].
pub fn gamma_grid() -> Vec<ComplexScalar> {
    let mut zs = Vec::with_capacity(100);
    for i in 0..10 {
        for j in 0..10 {
            zs.push(c64(0.1 + 0.99 * i as f64 + 0.003 * j as f64, -5.0 + 10.0 * j as f64 / 9.0));
        }
    }
    zs
}

/// Worst log-space deviation of `Γ(z+1) = zΓ(z)` on the grid; a log-space
/// distance ε is a relative error of about ε.
pub fn gamma_recurrence_worst() -> f64 {
    gamma_grid()
        .into_iter()
        .map(|z| log_distance(log_gamma(z + 1.0).unwrap(), log_gamma(z).unwrap() + principal_ln(z)))
        .fold(0.0, f64::max)
}

/// Worst log-space deviation of `Γ(2z) = (2π)^{−1/2} 2^{2z−1/2} Γ(z)Γ(z+1/2)`.
pub fn gamma_duplication_worst() -> f64 {
    gamma_grid()
        .into_iter()
        .map(|z| {
            let lhs = log_gamma(2.0 * z).unwrap();
            let rhs = -0.5 * (2.0 * PI).ln() + (2.0 * z - 0.5) * LN_2 + log_gamma(z).unwrap() + log_gamma(z + 0.5).unwrap();
            log_distance(lhs, rhs)
        })
        .fold(0.0, f64::max)
}

/// Relative deviation of `₁F₁(a;c;z) = e^z ₁F₁(c−a;c;−z)`.
pub fn kummer_transform_deviation(a: ComplexScalar, c: ComplexScalar, z: ComplexScalar) -> f64 {
    let lhs = kummer_1f1(a, c, z).unwrap();
    let rhs = z.exp() * kummer_1f1(c - a, c, -z).unwrap();
    (lhs - rhs).norm() / lhs.norm()
}

/// Worst Kummer-transform deviation over random `c > a > 0`, `|z| ≤ 40` real.
pub fn kummer_transform_worst(draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws)
        .map(|_| {
            let a = rng.random_range(0.05..8.0);
            let c = a + rng.random_range(0.05..8.0);
            kummer_transform_deviation(c64(a, 0.0), c64(c, 0.0), c64(rng.random_range(-40.0..40.0), 0.0))
        })
        .fold(0.0, f64::max)
}

/// `₁F₁(γ₁;γ₂;x)` over `e^x` for `0 < γ₁ ≤ γ₂`, `x ≥ 0`; at most 1 up to
/// rounding, with equality at `γ₁ = γ₂`.
pub fn kummer_bound_ratio(g1: f64, g2: f64, x: f64) -> f64 {
    kummer_1f1(c64(g1, 0.0), c64(g2, 0.0), c64(x, 0.0)).unwrap().re / x.exp()
}

/// Largest `₁F₁/e^x` over random admissible draws.
pub fn kummer_bound_worst(draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..draws)
        .map(|_| {
            let g1 = rng.random_range(0.01..10.0);
            kummer_bound_ratio(g1, g1 + rng.random_range(0.0..10.0), rng.random_range(0.0..45.0))
        })
        .fold(0.0, f64::max)
}

/// Worst relative gap between `K_ν(x)` and Basset's integral
/// `π^{−1/2}Γ(ν+1/2)(2/x)^ν ∫₀^∞ (1+u²)^{−(ν+1/2)} cos(xu) du`
/// for `ν ∈ {0, 1/3, 1, 5/2}`, `x ∈ {0.5, 1, 3}`.
pub fn basset_worst() -> f64 {
    let mut worst = 0.0f64;
    for nu in [0.0, 1.0 / 3.0, 1.0, 2.5] {
        for x in [0.5f64, 1.0, 3.0] {
            // Half-period panels of a cosine alternate in sign.
            let hint = DecayHint::algebraic(2.0 * nu + 1.0).with_wavelength(PI / x);
            let q = integrate_half_line(|u: f64| (1.0 + u * u).powf(-(nu + 0.5)) * (x * u).cos(), &hint, 1e-11).unwrap();
            assert!(q.converged, "nu = {nu}, x = {x}: {q:?}");
            let basset = gamma_real(nu + 0.5).unwrap() / PI.sqrt() * (2.0 / x).powf(nu) * q.value.re;
            let k = bessel_k(nu, x).unwrap();
            worst = worst.max((basset - k).abs() / k);
        }
    }
    worst
}
