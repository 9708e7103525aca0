//! Probability densities paired with their Fourier transforms
//! `f̂(t) = ∫ e^{−itx} f(x) dx`, and closed forms for the inner products
//! `⟨f₁, f₂⟩ = ∫ f₁(x) conj(f₂(x)) dx`.
//!
//! By Parseval, `(1/2π) ∫ f̂₁(t) conj(f̂₂(t)) dt = ⟨f₁, f₂⟩`, which is how every
//! scalar identity in the crate is derived.

use crate::error::{Error, Result};
use crate::special::{
    bessel_j_scaled, bessel_k, beta_fn, c64, gamma_real, gauss_2f1, kummer_1f1, log_gamma,
    principal_power, ComplexScalar,
};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Gamma,
    Beta,
    KummerWeightedGamma,
    StudentT,
    SemicirclePower,
}

impl PairKind {
    pub fn name(self) -> &'static str {
        match self {
            PairKind::Gamma => "gamma",
            PairKind::Beta => "beta",
            PairKind::KummerWeightedGamma => "kummer-weighted-gamma",
            PairKind::StudentT => "student-t",
            PairKind::SemicirclePower => "semicircle-power",
        }
    }
}

/// Where the density lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// `(0, ∞)`
    HalfLine,
    /// `(0, 1)`
    UnitInterval,
    /// `ℝ`
    RealLine,
    /// `(−1, 1)`
    SymmetricInterval,
}

/// An immutable density/transform pair.
///
/// Parameter order follows the constructor arguments. Densities can only be
/// evaluated for real parameters; transforms accept complex ones wherever
/// the closed form is analytic.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformPair {
    kind: PairKind,
    params: Vec<ComplexScalar>,
    support: Support,
    /// Normalizing constant of the Kummer-weighted density.
    normalizer: ComplexScalar,
}

fn require(cond: bool, what: &'static str, reason: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(what, reason))
    }
}

/// Gamma law with shape `α` and scale `σ`: `f̂(t) = (1+iσt)^{−α}`.
pub fn gamma_pair(alpha: ComplexScalar, sigma: ComplexScalar) -> Result<TransformPair> {
    require(alpha.re > 0.0, "gamma_pair", "need Re(alpha) > 0")?;
    require(sigma.re > 0.0, "gamma_pair", "need Re(sigma) > 0")?;
    Ok(TransformPair {
        kind: PairKind::Gamma,
        params: vec![alpha, sigma],
        support: Support::HalfLine,
        normalizer: c64(1.0, 0.0),
    })
}

/// Beta law on `(0,1)`: `f̂(t) = ₁F₁(α; α+σ; −it)`.
pub fn beta_pair(alpha: ComplexScalar, sigma: ComplexScalar) -> Result<TransformPair> {
    require(alpha.re > 0.0, "beta_pair", "need Re(alpha) > 0")?;
    require(sigma.re > 0.0, "beta_pair", "need Re(sigma) > 0")?;
    Ok(TransformPair {
        kind: PairKind::Beta,
        params: vec![alpha, sigma],
        support: Support::UnitInterval,
        normalizer: c64(1.0, 0.0),
    })
}

/// Density `c·x^{α−1} e^{−x/σ} ₁F₁(γ₁; γ₂; x/θ)` on `(0, ∞)`, normalized.
///
/// The normalizer is `c⁻¹ = Γ(α) σ^α ₂F₁(γ₁, α; γ₂; σ/θ)` and is computed once.
pub fn kummer_weighted_gamma_pair(
    alpha2: ComplexScalar,
    sigma2: ComplexScalar,
    gamma1: ComplexScalar,
    gamma2: ComplexScalar,
    theta: ComplexScalar,
) -> Result<TransformPair> {
    let what = "kummer_weighted_gamma_pair";
    require(alpha2.re > 0.0, what, "need Re(alpha2) > 0")?;
    require(sigma2.re > 0.0, what, "need Re(sigma2) > 0")?;
    require(theta.re > sigma2.re, what, "need Re(theta) > Re(sigma2)")?;
    require(
        !(gamma2.im == 0.0 && gamma2.re <= 0.0 && gamma2.re.fract() == 0.0),
        what,
        "gamma2 must not be a non-positive integer",
    )?;
    let rate = sigma2.inv();
    let mass = log_gamma(alpha2)?.exp()
        * principal_power(rate, -alpha2)?
        * gauss_2f1(gamma1, alpha2, gamma2, sigma2 / theta)?;
    Ok(TransformPair {
        kind: PairKind::KummerWeightedGamma,
        params: vec![alpha2, sigma2, gamma1, gamma2, theta],
        support: Support::HalfLine,
        normalizer: mass.inv(),
    })
}

/// Student-type law `(1+x²)^{−(ν+1/2)}/B(ν, 1/2)` on `ℝ`, with transform
/// `|t|^ν K_ν(|t|)/(2^{ν−1}Γ(ν))`.
pub fn student_t_pair(nu: ComplexScalar) -> Result<TransformPair> {
    require(nu.re > 0.0, "student_t_pair", "need Re(nu) > 0")?;
    Ok(TransformPair {
        kind: PairKind::StudentT,
        params: vec![nu],
        support: Support::RealLine,
        normalizer: c64(1.0, 0.0),
    })
}

/// `(1−x²)^{ν−1/2}` on `(−1, 1)` (not normalized), with transform
/// `π^{1/2} Γ(ν+1/2) (|t|/2)^{−ν} J_ν(|t|)`.
pub fn semicircle_power_pair(nu: ComplexScalar) -> Result<TransformPair> {
    require(nu.re > -0.5, "semicircle_power_pair", "need Re(nu) > -1/2")?;
    Ok(TransformPair {
        kind: PairKind::SemicirclePower,
        params: vec![nu],
        support: Support::SymmetricInterval,
        normalizer: c64(1.0, 0.0),
    })
}

fn real(z: ComplexScalar, what: &'static str) -> Result<f64> {
    if z.im == 0.0 {
        Ok(z.re)
    } else {
        Err(Error::domain(what, "needs real parameters"))
    }
}

impl TransformPair {
    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn params(&self) -> &[ComplexScalar] {
        &self.params
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// Density at `x`; zero off the support. Real parameters only.
    pub fn density(&self, x: f64) -> Result<f64> {
        let what = "density";
        let p: Vec<f64> = self.params.iter().map(|&z| real(z, what)).collect::<Result<_>>()?;
        let inside = match self.support {
            Support::HalfLine => x > 0.0,
            Support::UnitInterval => x > 0.0 && x < 1.0,
            Support::RealLine => x.is_finite(),
            Support::SymmetricInterval => x > -1.0 && x < 1.0,
        };
        if !inside {
            return Ok(0.0);
        }
        let v = match self.kind {
            PairKind::Gamma => {
                let (a, s) = (p[0], p[1]);
                ((a - 1.0) * x.ln() - x / s - a * s.ln() - log_gamma(c64(a, 0.0))?.re).exp()
            }
            PairKind::Beta => {
                let (a, s) = (p[0], p[1]);
                let lb = beta_fn(c64(a, 0.0), c64(s, 0.0))?.re.ln();
                ((a - 1.0) * x.ln() + (s - 1.0) * (-x).ln_1p() - lb).exp()
            }
            PairKind::KummerWeightedGamma => {
                let (a, s, g1, g2, th) = (p[0], p[1], p[2], p[3], p[4]);
                let z = x / th;
                if z <= KUMMER_DIRECT_MAX {
                    let k = kummer_1f1(c64(g1, 0.0), c64(g2, 0.0), c64(z, 0.0))?.re;
                    self.normalizer.re * ((a - 1.0) * x.ln() - x / s).exp() * k
                } else {
                    // Kummer's transformation moves the growth e^z into the exponent.
                    let log_head = (a - 1.0) * x.ln() - x / s + z;
                    if log_head < UNDERFLOW_LOG {
                        return Ok(0.0);
                    }
                    let k = kummer_1f1(c64(g2 - g1, 0.0), c64(g2, 0.0), c64(-z, 0.0))?.re;
                    self.normalizer.re * log_head.exp() * k
                }
            }
            PairKind::StudentT => {
                let nu = p[0];
                (1.0 + x * x).powf(-(nu + 0.5)) / beta_fn(c64(nu, 0.0), c64(0.5, 0.0))?.re
            }
            PairKind::SemicirclePower => ((1.0 - x) * (1.0 + x)).powf(p[0] - 0.5),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow { function: "density" })
        }
    }

    /// Fourier transform `f̂(t)`.
    pub fn transform(&self, t: f64) -> Result<ComplexScalar> {
        let p = &self.params;
        match self.kind {
            PairKind::Gamma => principal_power(c64(1.0 - p[1].im * t, p[1].re * t), -p[0]),
            PairKind::Beta => kummer_1f1(p[0], p[0] + p[1], c64(0.0, -t)),
            PairKind::KummerWeightedGamma => {
                let (a, s, g1, g2, th) = (p[0], p[1], p[2], p[3], p[4]);
                // Γ(α)(1/σ + it)^{−α} ₂F₁(γ₁, α; γ₂; 1/(θ(1/σ + it)))
                let w = s.inv() + c64(0.0, t);
                let head = log_gamma(a)?.exp() * principal_power(w, -a)?;
                Ok(self.normalizer * head * gauss_2f1(g1, a, g2, (th * w).inv())?)
            }
            PairKind::StudentT => {
                let nu = real(p[0], "student_t transform")?;
                Ok(c64(student_t_transform(nu, t.abs())?, 0.0))
            }
            PairKind::SemicirclePower => {
                let nu = real(p[0], "semicircle transform")?;
                let lead = PI.sqrt() * gamma_real(nu + 0.5)?;
                Ok(c64(lead * bessel_j_scaled(nu, t.abs())?, 0.0))
            }
        }
    }
}

/// Largest `x/θ` at which the Kummer weight is evaluated directly.
const KUMMER_DIRECT_MAX: f64 = 50.0;
/// Log-prefactors below this leave a density that is zero in double precision
/// even after the algebraically bounded ₁F₁ factor.
const UNDERFLOW_LOG: f64 = -800.0;

/// Below this `|t|` the Student transform uses its small-argument expansion.
const STUDENT_SMALL_T: f64 = 1e-6;

fn student_t_transform(nu: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < STUDENT_SMALL_T {
        let h = 0.5 * x;
        if nu == 1.0 {
            return Ok(1.0 + 2.0 * h * h * h.ln());
        }
        let mut v = 1.0 - h * h / (nu - 1.0);
        if nu.fract() != 0.0 {
            v += gamma_real(-nu)? / gamma_real(nu)? * h.powf(2.0 * nu);
        }
        return Ok(v);
    }
    student_t_direct(nu, x)
}

fn student_t_direct(nu: f64, x: f64) -> Result<f64> {
    let log_scale = nu * x.ln() - (nu - 1.0) * std::f64::consts::LN_2 - log_gamma(c64(nu, 0.0))?.re;
    Ok(log_scale.exp() * bessel_k(nu, x)?)
}

/// Closed form of `⟨f₁, f₂⟩ = ∫ f₁ conj(f₂)`.
///
/// Supported: gamma×gamma, gamma×kummer (either order), beta×beta, t×t and
/// semicircle×semicircle.
pub fn inner_product_closed_form(p1: &TransformPair, p2: &TransformPair) -> Result<ComplexScalar> {
    use PairKind::*;
    let a = &p1.params;
    let b: Vec<ComplexScalar> = p2.params.iter().map(|z| z.conj()).collect();
    let lg = log_gamma;
    let value = match (p1.kind, p2.kind) {
        (Gamma, Gamma) => {
            let (a1, s1, a2, s2) = (a[0], a[1], b[0], b[1]);
            let e = a1 + a2 - 1.0;
            require(e.re > 0.0, "inner_product", "need Re(alpha1 + alpha2) > 1")?;
            (lg(e)? - lg(a1)? - lg(a2)?).exp()
                * principal_power(s1.inv() + s2.inv(), -e)?
                * principal_power(s1, -a1)?
                * principal_power(s2, -a2)?
        }
        (Gamma, KummerWeightedGamma) => gamma_kummer(a[0], a[1], &b, p2.normalizer.conj())?,
        (KummerWeightedGamma, Gamma) => inner_product_closed_form(p2, p1)?.conj(),
        (Beta, Beta) => {
            let (a1, s1, a2, s2) = (a[0], a[1], b[0], b[1]);
            let x = a1 + a2 - 1.0;
            let y = s1 + s2 - 1.0;
            require(x.re > 0.0 && y.re > 0.0, "inner_product", "need Re(alpha1+alpha2) > 1, Re(sigma1+sigma2) > 1")?;
            (lg(x)? + lg(y)? - lg(x + y)? + lg(a1 + s1)? + lg(a2 + s2)?
                - lg(a1)?
                - lg(s1)?
                - lg(a2)?
                - lg(s2)?)
            .exp()
        }
        (StudentT, StudentT) => {
            let (n1, n2) = (a[0], b[0]);
            let half = c64(0.5, 0.0);
            let lb = |x: ComplexScalar, y: ComplexScalar| -> Result<ComplexScalar> { Ok(lg(x)? + lg(y)? - lg(x + y)?) };
            (lb(n1 + n2 + 0.5, half)? - lb(n1, half)? - lb(n2, half)?).exp()
        }
        (SemicirclePower, SemicirclePower) => {
            let s = a[0] + b[0];
            require(s.re > 0.0, "inner_product", "need Re(nu1 + nu2) > 0")?;
            // ∫_{−1}^{1} (1−x²)^{s−1} dx = 2^{2s−1} B(s, s)
            ((2.0 * s - 1.0) * std::f64::consts::LN_2 + 2.0 * lg(s)? - lg(2.0 * s)?).exp()
        }
        (k1, k2) => return Err(Error::UnsupportedCombination(k1.name().into(), k2.name().into())),
    };
    crate::special::finite("inner_product", value)
}

/// `∫ gamma(α₁, σ₁) · kummer(α₂, σ₂, γ₁, γ₂, θ)` with the Kummer parameters
/// already conjugated by the caller where required.
fn gamma_kummer(a1: ComplexScalar, s1: ComplexScalar, k: &[ComplexScalar], c: ComplexScalar) -> Result<ComplexScalar> {
    let (a2, s2, g1, g2, th) = (k[0], k[1], k[2], k[3], k[4]);
    let e = a1 + a2 - 1.0;
    require(e.re > 0.0, "inner_product", "need Re(alpha1 + alpha2) > 1")?;
    let rate = s1.inv() + s2.inv();
    let head = (log_gamma(e)? - log_gamma(a1)?).exp() * principal_power(s1, -a1)? * principal_power(rate, -e)?;
    Ok(c * head * gauss_2f1(g1, e, g2, (th * rate).inv())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: ComplexScalar, b: ComplexScalar, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn normalized_transforms_are_one_at_origin() {
        let pairs = [
            gamma_pair(c64(2.5, 0.3), c64(0.7, 0.0)).unwrap(),
            beta_pair(c64(2.0, 0.0), c64(3.0, 0.0)).unwrap(),
            kummer_weighted_gamma_pair(c64(1.5, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(2.0, 0.0), c64(3.0, 0.0))
                .unwrap(),
            student_t_pair(c64(1.3, 0.0)).unwrap(),
        ];
        for p in &pairs {
            assert!(close(p.transform(0.0).unwrap(), c64(1.0, 0.0), 1e-12), "{:?}", p.kind());
        }
    }

    #[test]
    fn gamma_transform_direct_formula() {
        let p = gamma_pair(c64(1.0, 0.0), c64(1.0, 0.0)).unwrap();
        assert!(close(p.transform(1.0).unwrap(), c64(0.5, -0.5), 1e-15));
    }

    #[test]
    fn beta_transform_uniform_case() {
        let p = beta_pair(c64(1.0, 0.0), c64(1.0, 0.0)).unwrap();
        for t in [0.3, 1.0, 7.0, -2.0] {
            let want = (c64(1.0, 0.0) - c64(0.0, -t).exp()) / c64(0.0, t);
            assert!(close(p.transform(t).unwrap(), want, 1e-13));
        }
    }

    #[test]
    fn kummer_pair_collapses_to_gamma() {
        // ₁F₁(γ;γ;x/θ) = e^{x/θ}: a gamma law with rate 1/σ − 1/θ.
        let (a, s, th) = (1.7, 1.0, 4.0);
        let k = kummer_weighted_gamma_pair(c64(a, 0.0), c64(s, 0.0), c64(1.3, 0.0), c64(1.3, 0.0), c64(th, 0.0)).unwrap();
        let g = gamma_pair(c64(a, 0.0), c64(1.0 / (1.0 / s - 1.0 / th), 0.0)).unwrap();
        for t in [0.0, 0.4, 2.0, -5.0] {
            assert!(close(k.transform(t).unwrap(), g.transform(t).unwrap(), 1e-12));
        }
        for x in [0.1, 1.0, 3.0] {
            assert!((k.density(x).unwrap() - g.density(x).unwrap()).abs() < 1e-12);
        }
        // Past the direct range the weight is taken through Kummer's transformation.
        for x in [250.0, 400.0] {
            let (kd, gd) = (k.density(x).unwrap(), g.density(x).unwrap());
            assert!((kd - gd).abs() <= 1e-12 * gd, "{kd} vs {gd}");
        }
        assert_eq!(k.density(1e6).unwrap(), 0.0);
    }

    #[test]
    fn student_t_transform_values() {
        let p = student_t_pair(c64(0.5, 0.0)).unwrap();
        for t in [0.0, 1e-9, 1e-7, 2e-6, 0.5, 3.0, -2.0] {
            let got = p.transform(t).unwrap().re;
            assert!((got - (-t.abs()).exp()).abs() < 1e-12, "t={t}: {got}");
        }
        // The expansion agrees with the Bessel route just below the switch.
        for nu in [0.3, 1.0, 1.5, 2.0, 2.7] {
            let x = STUDENT_SMALL_T * 0.999;
            let series = student_t_transform(nu, x).unwrap();
            let direct = student_t_direct(nu, x).unwrap();
            assert!((series - direct).abs() < 1e-11, "nu={nu}: {series} vs {direct}");
        }
    }

    #[test]
    fn semicircle_values() {
        let p = semicircle_power_pair(c64(0.5, 0.0)).unwrap();
        assert_eq!(p.density(0.3).unwrap(), 1.0);
        for t in [0.5f64, 2.0, 10.0, -3.0] {
            let want = 2.0 * t.abs().sin() / t.abs();
            assert!((p.transform(t).unwrap().re - want).abs() < 1e-12);
        }
        let p = semicircle_power_pair(c64(1.0, 0.0)).unwrap();
        assert!((p.transform(0.0).unwrap().re - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_inner_products() {
        let one = c64(1.0, 0.0);
        let g = gamma_pair(one, one).unwrap();
        assert!(close(inner_product_closed_form(&g, &g).unwrap(), c64(0.5, 0.0), 1e-14));
        let b = beta_pair(one, one).unwrap();
        assert!(close(inner_product_closed_form(&b, &b).unwrap(), one, 1e-14));
        let t = student_t_pair(c64(0.5, 0.0)).unwrap();
        assert!(close(inner_product_closed_form(&t, &t).unwrap(), c64(0.5 / PI, 0.0), 1e-14));
        assert!(matches!(
            inner_product_closed_form(&g, &b),
            Err(Error::UnsupportedCombination(_, _))
        ));
    }

    #[test]
    fn gamma_kummer_order_is_conjugate() {
        let g = gamma_pair(c64(1.5, 0.0), c64(1.0, 0.0)).unwrap();
        let k = kummer_weighted_gamma_pair(c64(1.5, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(2.0, 0.0), c64(3.0, 0.0)).unwrap();
        let gk = inner_product_closed_form(&g, &k).unwrap();
        let kg = inner_product_closed_form(&k, &g).unwrap();
        assert!(close(gk, kg.conj(), 1e-14));
    }

    #[test]
    fn densities_need_real_parameters() {
        let p = gamma_pair(c64(1.0, 0.5), c64(1.0, 0.0)).unwrap();
        assert!(p.density(1.0).is_err());
        assert!(p.transform(1.0).is_ok());
        assert_eq!(gamma_pair(c64(2.0, 0.0), c64(1.0, 0.0)).unwrap().density(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn constructors_check_parameters() {
        assert!(gamma_pair(c64(0.0, 0.0), c64(1.0, 0.0)).is_err());
        assert!(beta_pair(c64(1.0, 0.0), c64(-1.0, 0.0)).is_err());
        assert!(student_t_pair(c64(0.0, 0.0)).is_err());
        assert!(semicircle_power_pair(c64(-0.5, 0.0)).is_err());
        let one = c64(1.0, 0.0);
        assert!(kummer_weighted_gamma_pair(one, one, one, one, c64(0.5, 0.0)).is_err());
        assert!(kummer_weighted_gamma_pair(one, one, one, c64(-2.0, 0.0), c64(3.0, 0.0)).is_err());
    }
}
