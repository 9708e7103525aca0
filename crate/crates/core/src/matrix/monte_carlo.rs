//! Importance-sampling Monte Carlo over `ℝ^n` and over `S^{d×d}`.
//!
//! Samples are drawn in fixed-size batches; batch `b` uses a ChaCha8 stream
//! `b` keyed by the seed, so the estimate depends only on
//! `(seed, samples, proposal)` and not on how batches are scheduled across
//! threads. Batch statistics are merged in batch order.

use super::wishart::{bartlett_log_density, sample_wishart};
use super::{sym_coordinates, SymMatrix};
use crate::error::{Error, Result};
use crate::quadrature::IntegrandValue;
use crate::special::{log_gamma_real, ComplexScalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Samples per batch.
pub const MC_BATCH: usize = 4096;
/// Fewest samples accepted by the integrators.
const MIN_SAMPLES: usize = 1000;

/// Importance sampling estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: ComplexScalar,
    pub standard_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Importance law.
#[derive(Debug, Clone, PartialEq)]
pub enum Proposal {
    /// Independent `N(0, scale²)` coordinates.
    Gaussian { scale: f64 },
    /// Spherical multivariate Student t over all coordinates jointly.
    StudentT { dof: f64, scale: f64 },
    /// Independent Student t coordinates.
    ProductStudentT { dof: f64, scale: f64 },
    /// The Wishart law; supported on the positive definite cone only, so it
    /// suits integrands that vanish off the cone.
    Wishart { alpha: f64, sigma: SymMatrix },
}

impl Proposal {
    fn validate(&self, n: usize, d: Option<usize>) -> Result<()> {
        let bad = |reason: &str| Err(Error::DegenerateProposal(reason.to_string()));
        match self {
            Proposal::Gaussian { scale } => {
                if !(*scale > 0.0 && scale.is_finite()) {
                    return bad("Gaussian scale must be positive");
                }
            }
            Proposal::StudentT { dof, scale } | Proposal::ProductStudentT { dof, scale } => {
                if !(*scale > 0.0 && scale.is_finite() && *dof > 0.0 && dof.is_finite()) {
                    return bad("Student t scale and degrees of freedom must be positive");
                }
            }
            Proposal::Wishart { sigma, .. } => match d {
                Some(d) if d == sigma.dim() => {}
                _ => return bad("Wishart proposal needs a matrix space of matching dimension"),
            },
        }
        if n == 0 {
            return bad("empty sample space");
        }
        Ok(())
    }

    fn sample<R: Rng>(&self, rng: &mut R, out: &mut [f64]) -> Result<()> {
        match self {
            Proposal::Gaussian { scale } => {
                for v in out.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *v = scale * z;
                }
            }
            Proposal::StudentT { dof, scale } => {
                let w = chi_squared(*dof)?.sample(rng);
                let r = scale / (w / dof).sqrt();
                for v in out.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *v = r * z;
                }
            }
            Proposal::ProductStudentT { dof, scale } => {
                let chi = chi_squared(*dof)?;
                for v in out.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *v = scale * z / (chi.sample(rng) / dof).sqrt();
                }
            }
            Proposal::Wishart { alpha, sigma } => {
                let x = sample_wishart(*alpha, sigma, rng)?;
                out.copy_from_slice(x.coordinates());
            }
        }
        Ok(())
    }

    fn log_density(&self, x: &[f64], d: Option<usize>) -> Result<f64> {
        let n = x.len() as f64;
        match self {
            Proposal::Gaussian { scale } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Ok(-0.5 * r2 / (scale * scale) - n * scale.ln() - 0.5 * n * (2.0 * PI).ln())
            }
            Proposal::StudentT { dof, scale } => {
                let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (scale * scale);
                Ok(log_gamma_real(0.5 * (dof + n))? - log_gamma_real(0.5 * dof)?
                    - 0.5 * n * (dof * PI).ln()
                    - n * scale.ln()
                    - 0.5 * (dof + n) * (r2 / dof).ln_1p())
            }
            Proposal::ProductStudentT { dof, scale } => {
                let c = log_gamma_real(0.5 * (dof + 1.0))? - log_gamma_real(0.5 * dof)? - 0.5 * (dof * PI).ln() - scale.ln();
                Ok(x.iter()
                    .map(|v| {
                        let u = v / scale;
                        c - 0.5 * (dof + 1.0) * (u * u / dof).ln_1p()
                    })
                    .sum())
            }
            Proposal::Wishart { alpha, sigma } => {
                let d = d.ok_or_else(|| Error::DegenerateProposal("Wishart proposal on a flat space".into()))?;
                let m = SymMatrix::from_coordinates(d, x)?;
                bartlett_log_density(*alpha, sigma, &m)
            }
        }
    }
}

fn chi_squared(dof: f64) -> Result<ChiSquared<f64>> {
    ChiSquared::new(dof).map_err(|e| Error::DegenerateProposal(e.to_string()))
}

/// Running mean and sum of squared deviations of the real and imaginary parts.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: ComplexScalar,
    m2_re: f64,
    m2_im: f64,
}

impl Moments {
    fn push(&mut self, v: ComplexScalar) {
        self.count += 1.0;
        let delta = v - self.mean;
        self.mean += delta / self.count;
        let after = v - self.mean;
        self.m2_re += delta.re * after.re;
        self.m2_im += delta.im * after.im;
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0.0 {
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = self.count * other.count / total;
        self.mean += delta * (other.count / total);
        self.m2_re += other.m2_re + delta.re * delta.re * w;
        self.m2_im += other.m2_im + delta.im * delta.im * w;
        self.count = total;
    }
}

fn run<G>(g: G, n: usize, d: Option<usize>, proposal: &Proposal, samples: usize, seed: u64) -> Result<MCEstimate>
where
    G: Fn(&[f64]) -> Result<ComplexScalar> + Sync,
{
    if samples < MIN_SAMPLES {
        return Err(Error::domain(
            "mc_integrate",
            format!("at least {MIN_SAMPLES} samples are required, got {samples}"),
        ));
    }
    proposal.validate(n, d)?;
    let batches = samples.div_ceil(MC_BATCH);
    let partial: Vec<Result<Moments>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = MC_BATCH.min(samples - b * MC_BATCH);
            let mut x = vec![0.0; n];
            let mut m = Moments::default();
            for _ in 0..count {
                proposal.sample(&mut rng, &mut x)?;
                let v = g(&x)?;
                let w = if v.re == 0.0 && v.im == 0.0 {
                    v
                } else {
                    v * (-proposal.log_density(&x, d)?).exp()
                };
                if !(w.re.is_finite() && w.im.is_finite()) {
                    return Err(Error::DegenerateProposal(format!(
                        "non-finite importance weight at {x:?}"
                    )));
                }
                m.push(w);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for m in partial {
        total.merge(&m?);
    }
    let var = (total.m2_re + total.m2_im) / (total.count - 1.0);
    let standard_error = (var / total.count).sqrt();
    if !standard_error.is_finite() {
        return Err(Error::DegenerateProposal("variance estimate is not finite".into()));
    }
    Ok(MCEstimate {
        value: total.mean,
        standard_error,
        samples,
        seed,
    })
}

/// `∫_{ℝ^n} g(x) dx` by importance sampling.
pub fn mc_integrate<G, V>(g: G, n: usize, proposal: &Proposal, samples: usize, seed: u64) -> Result<MCEstimate>
where
    G: Fn(&[f64]) -> V + Sync,
    V: IntegrandValue,
{
    run(|x| g(x).into_result(), n, None, proposal, samples, seed)
}

/// `∫_{S^{d×d}} g(T) dT`, `dT` Lebesgue on the upper-triangle coordinates.
pub fn mc_integrate_sym<G, V>(g: G, d: usize, proposal: &Proposal, samples: usize, seed: u64) -> Result<MCEstimate>
where
    G: Fn(&SymMatrix) -> V + Sync,
    V: IntegrandValue,
{
    if d == 0 {
        return Err(Error::domain("mc_integrate_sym", "dimension must be positive"));
    }
    run(
        |x| g(&SymMatrix::from_coordinates(d, x)?).into_result(),
        sym_coordinates(d),
        Some(d),
        proposal,
        samples,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::c64;

    fn within(est: &MCEstimate, want: f64, k: f64) -> bool {
        (est.value - c64(want, 0.0)).norm() <= k * est.standard_error
    }

    #[test]
    fn proposal_density_integrates_to_one() {
        for p in [
            Proposal::Gaussian { scale: 0.7 },
            Proposal::StudentT { dof: 3.0, scale: 1.3 },
            Proposal::ProductStudentT { dof: 1.0, scale: 0.5 },
        ] {
            let q = p.clone();
            let est = mc_integrate(move |x: &[f64]| q.log_density(x, None).map(f64::exp), 3, &p, 5000, 3).unwrap();
            assert!((est.value.re - 1.0).abs() < 1e-12, "{p:?}: {est:?}");
            assert!(est.standard_error < 1e-12);
        }
    }

    #[test]
    fn cauchy_proposal_recovers_arctan_integral() {
        let p = Proposal::ProductStudentT { dof: 1.0, scale: 1.5 };
        let est = mc_integrate_sym(|t: &SymMatrix| 1.0 / (1.0 + t.get(0, 0).powi(2)), 1, &p, 50_000, 17).unwrap();
        assert!(within(&est, PI, 4.0), "{est:?}");
        assert!(est.standard_error < 0.05);
    }

    #[test]
    fn reproducible_and_seed_dependent() {
        let p = Proposal::Gaussian { scale: 1.0 };
        let g = |x: &[f64]| (-x[0] * x[0] - x[1] * x[1]).exp();
        let a = mc_integrate(g, 2, &p, 10_000, 5).unwrap();
        let b = mc_integrate(g, 2, &p, 10_000, 5).unwrap();
        let c = mc_integrate(g, 2, &p, 10_000, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.value, c.value);
        assert!(within(&a, PI, 4.0));
    }

    #[test]
    fn wishart_proposal_outside_matrix_space_is_rejected() {
        let p = Proposal::Wishart { alpha: 1.5, sigma: SymMatrix::identity(2) };
        assert!(matches!(
            mc_integrate(|_: &[f64]| 1.0, 3, &p, 2000, 1),
            Err(Error::DegenerateProposal(_))
        ));
        assert!(mc_integrate(|_: &[f64]| 1.0, 3, &Proposal::Gaussian { scale: 1.0 }, 10, 1).is_err());
    }
}
