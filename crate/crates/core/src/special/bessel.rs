//! Real-order Bessel functions `J_ν` and `K_ν` of real argument.
//!
//! `K_ν` uses Temme's series below `temme_max` and Steed's continued fraction
//! above it, for the fractional order `μ = ν − round(ν)`, then upward
//! recurrence. `J_ν` uses the ascending series for small arguments, Hankel's
//! expansion for large ones and the Steed/Temme scheme in between.

use super::gamma::{gamma_real, log_gamma_real};
use super::finite_real;
use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_4, PI};

/// Fixed crossover points, so results do not depend on anything but inputs.
#[derive(Debug, Clone, Copy)]
pub struct BesselConstants {
    /// `J_ν` ascending series is used for `x ≤ ascending_max`.
    pub ascending_max: f64,
    /// Hankel's expansion is used for `x ≥ max(asymptotic_min, ν²)`.
    pub asymptotic_min: f64,
    /// Temme series below this argument, continued fractions above.
    pub temme_max: f64,
    pub max_iterations: usize,
}

pub const BESSEL_CONSTANTS: BesselConstants = BesselConstants {
    ascending_max: 2.0,
    asymptotic_min: 25.0,
    temme_max: 2.0,
    max_iterations: 200_000,
};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;

/// Taylor coefficients of `1/Γ(z) = Σ_{k≥1} c_k z^k`.
const RECIP_GAMMA_TAYLOR: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary gammas for `|μ| ≤ 1/2`:
/// `gam1 = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ)`, `gam2 = (1/Γ(1−μ) + 1/Γ(1+μ))/2`,
/// plus `1/Γ(1+μ)` and `1/Γ(1−μ)`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mu2 = mu * mu;
    let mut even = 0.0; // Σ c_{2m+1} μ^{2m}
    let mut odd = 0.0; // Σ c_{2m+2} μ^{2m}
    for m in (0..RECIP_GAMMA_TAYLOR.len() / 2).rev() {
        even = even * mu2 + RECIP_GAMMA_TAYLOR[2 * m];
        odd = odd * mu2 + RECIP_GAMMA_TAYLOR[2 * m + 1];
    }
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// Modified Bessel function of the second kind `K_ν(x)`, `x > 0`.
///
/// Negative orders are folded with `K_{−ν} = K_ν`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_k", format!("need x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::domain("bessel_k", "non-finite order"));
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let max_it = BESSEL_CONSTANTS.max_iterations;

    let (mut k_mu, mut k_mu1);
    if x < BESSEL_CONSTANTS.temme_max {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=max_it {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::no_convergence("bessel_k", "Temme series"));
        }
        k_mu = sum;
        k_mu1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=max_it {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::no_convergence("bessel_k", "Steed continued fraction"));
        }
        h *= a1;
        k_mu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        k_mu1 = k_mu * (mu + x + 0.5 - h) * xi;
    }
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    finite_real("bessel_k", k_mu)
}

/// Bessel function of the first kind `J_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_j_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= BESSEL_CONSTANTS.ascending_max {
        return finite_real("bessel_j", (0.5 * x).powf(nu) * ascending_scaled(nu, x)?);
    }
    if x >= BESSEL_CONSTANTS.asymptotic_min.max(nu * nu) {
        if let Some(v) = hankel_asymptotic(nu, x) {
            return Ok(v);
        }
    }
    steed_j(nu, x)
}

/// `(x/2)^{−ν} J_ν(x)`, which is entire in `x` and equals `1/Γ(ν+1)` at 0.
pub fn bessel_j_scaled(nu: f64, x: f64) -> Result<f64> {
    check_j_args(nu, x)?;
    if x <= BESSEL_CONSTANTS.ascending_max {
        return ascending_scaled(nu, x);
    }
    finite_real("bessel_j_scaled", bessel_j(nu, x)? / (0.5 * x).powf(nu))
}

fn check_j_args(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain("bessel_j", format!("need nu >= 0, got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_j", format!("need x >= 0, got {x}")));
    }
    Ok(())
}

/// `Σ_k (−x²/4)^k / (k! Γ(ν+k+1))`.
fn ascending_scaled(nu: f64, x: f64) -> Result<f64> {
    let q = -0.25 * x * x;
    let lead = if nu + 1.0 > 170.0 {
        (-log_gamma_real(nu + 1.0)?).exp()
    } else {
        1.0 / gamma_real(nu + 1.0)?
    };
    let mut term = lead;
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() <= EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::no_convergence("bessel_j", "ascending series"))
}

/// Hankel's expansion; `None` if its smallest term is not negligible.
fn hankel_asymptotic(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let inv8x = 1.0 / (8.0 * x);
    // a_k(ν) / (8x)^k, alternating between P (even k) and Q (odd k).
    let mut term: f64 = 1.0;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    let mut ok = false;
    for k in 0..200 {
        let t = term.abs();
        if t > last {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        last = t;
        if t < EPS * 1e-2 {
            ok = true;
            break;
        }
        let odd = (2 * k + 1) as f64;
        term *= (mu - odd * odd) * inv8x / (k + 1) as f64;
        if term == 0.0 {
            ok = true;
            break;
        }
    }
    if !ok && last > EPS {
        return None;
    }
    let chi = x - (0.5 * nu * PI + FRAC_PI_4);
    let (s, c) = chi.sin_cos();
    Some((2.0 / (PI * x)).sqrt() * (p * c - q * s))
}

/// Steed's CF1/CF2 with Temme's series for the fractional order.
fn steed_j(nu: f64, x: f64) -> Result<f64> {
    let max_it = BESSEL_CONSTANTS.max_iterations;
    let xmin = BESSEL_CONSTANTS.temme_max;
    let nl = if x < xmin {
        (nu + 0.5).floor() as i64
    } else {
        ((nu - x + 1.5).floor() as i64).max(0)
    };
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: f = J'_ν / J_ν
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 1..=max_it {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::no_convergence("bessel_j", "CF1"));
    }
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in (1..=nl).rev() {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let rjmu = if x < xmin {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=max_it {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::no_convergence("bessel_j", "Temme series"));
        }
        let rymu = -sum;
        let ry1 = -sum1 * xi2;
        let rymup = mu * xi * rymu - ry1;
        w / (rymup - f * rymu)
    } else {
        let mut a = 0.25 - mu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut converged = false;
        for i in 2..=max_it {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::no_convergence("bessel_j", "CF2"));
        }
        let gam = (p - f) / q;
        let v = (w / ((p - f) * gam + q)).sqrt();
        v.copysign(rjl)
    };
    finite_real("bessel_j", rjl1 * (rjmu / rjl))
}
