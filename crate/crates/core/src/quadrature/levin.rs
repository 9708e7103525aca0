//! Levin's u-transform for accelerating partial sums of a slowly converging
//! series, in the recursive form that adds one term at a time.

use crate::special::{c64, ComplexScalar};

pub(crate) struct Levin {
    beta: f64,
    n: usize,
    numer: Vec<ComplexScalar>,
    denom: Vec<ComplexScalar>,
    last: ComplexScalar,
    /// Change between the two most recent estimates.
    pub last_change: f64,
}

impl Levin {
    pub fn new(beta: f64) -> Self {
        Levin {
            beta,
            n: 0,
            numer: Vec::new(),
            denom: Vec::new(),
            last: c64(0.0, 0.0),
            last_change: f64::INFINITY,
        }
    }

    /// Feeds the partial sum `s_n` and its remainder estimate
    /// `ω_n = (β + n)·a_n`; returns the current extrapolated limit.
    pub fn next(&mut self, s_n: ComplexScalar, omega: ComplexScalar) -> ComplexScalar {
        let n = self.n;
        let mut term = 1.0 / (self.beta + n as f64);
        let d = omega.inv() * term;
        self.denom.push(d);
        self.numer.push(s_n * d);
        if n > 0 {
            let ratio = (self.beta + n as f64 - 1.0) * term;
            for j in 1..=n {
                let fact = (n as f64 - j as f64 + self.beta) * term;
                self.numer[n - j] = self.numer[n - j + 1] - self.numer[n - j] * fact;
                self.denom[n - j] = self.denom[n - j + 1] - self.denom[n - j] * fact;
                term *= ratio;
            }
        }
        self.n += 1;
        let val = if self.denom[0].norm() < 1e-300 {
            self.last
        } else {
            self.numer[0] / self.denom[0]
        };
        self.last_change = (val - self.last).norm();
        self.last = val;
        val
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accelerates_alternating_harmonic_series() {
        let mut lev = Levin::new(1.0);
        let mut s = c64(0.0, 0.0);
        let mut est = c64(0.0, 0.0);
        for n in 0..20 {
            let a = if n % 2 == 0 { 1.0 } else { -1.0 } / (n as f64 + 1.0);
            s += a;
            est = lev.next(s, c64(a * (1.0 + n as f64), 0.0));
        }
        assert!((est.re - std::f64::consts::LN_2).abs() < 1e-13);
    }

    #[test]
    fn accelerates_logarithmic_series() {
        // Σ 1/(n+1)² = π²/6, which plain summation reaches only as 1/n.
        let mut lev = Levin::new(1.0);
        let mut s = c64(0.0, 0.0);
        let mut best = f64::INFINITY;
        for n in 0..25 {
            let a = 1.0 / ((n as f64 + 1.0) * (n as f64 + 1.0));
            s += a;
            let est = lev.next(s, c64(a * (1.0 + n as f64), 0.0));
            best = best.min((est.re - std::f64::consts::PI.powi(2) / 6.0).abs());
        }
        assert!(best < 1e-10);
    }
}
