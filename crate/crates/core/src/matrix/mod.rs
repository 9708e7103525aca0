//! Symmetric matrices, determinant powers, the Wishart law, and integration
//! over `S^{d×d}` (Monte Carlo) and over eigenvalues (nested quadrature).
//!
//! Throughout, `dT` is Lebesgue measure on the `d(d+1)/2` coordinates
//! `T_ij, i ≤ j`. Other conventions (e.g. counting off-diagonal entries
//! twice) change integrals over `S^{d×d}` by powers of 2, so every constant
//! in this module is stated against this one.

mod eigen;
mod monte_carlo;
mod wishart;

pub use eigen::{eigen_integrate, eigen_integrate_with, orthogonal_invariance_reduce, vandermonde, EigenPoint, ReducedIntegrand};
pub use monte_carlo::{mc_integrate, mc_integrate_sym, MCEstimate, Proposal, MC_BATCH};
pub use wishart::{sample_wishart, wishart_log_density};

use crate::error::{Error, Result};
use crate::special::{c64, principal_ln, ComplexScalar};
use nalgebra::{Cholesky, DMatrix, Dyn, SymmetricEigen};

/// A real symmetric `d×d` matrix stored as its upper triangle, so symmetry
/// holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    d: usize,
    /// Row-major upper triangle: `(0,0), (0,1), …, (0,d−1), (1,1), …`.
    upper: Vec<f64>,
}

#[inline]
fn packed_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * d - i * (i + 1) / 2 + j
}

/// Number of free coordinates of a symmetric `d×d` matrix.
#[inline]
pub fn sym_coordinates(d: usize) -> usize {
    d * (d + 1) / 2
}

impl SymMatrix {
    pub fn zeros(d: usize) -> Self {
        SymMatrix {
            d,
            upper: vec![0.0; sym_coordinates(d)],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::diag(&vec![1.0; d])
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        let mut m = Self::zeros(d);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// From the upper-triangle coordinates in row-major order.
    pub fn from_coordinates(d: usize, coords: &[f64]) -> Result<Self> {
        if coords.len() != sym_coordinates(d) {
            return Err(Error::domain(
                "SymMatrix",
                format!("expected {} coordinates, got {}", sym_coordinates(d), coords.len()),
            ));
        }
        Ok(SymMatrix {
            d,
            upper: coords.to_vec(),
        })
    }

    /// From a full row-major array, which must be exactly symmetric.
    pub fn from_rows(d: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != d * d {
            return Err(Error::domain("SymMatrix", "expected d*d entries"));
        }
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in i..d {
                if rows[i * d + j] != rows[j * d + i] {
                    return Err(Error::domain("SymMatrix", format!("entry ({i},{j}) is not symmetric")));
                }
                m.set(i, j, rows[i * d + j]);
            }
        }
        Ok(m)
    }

    /// Symmetric part of a dense matrix, `(M + M')/2`.
    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let d = m.nrows();
        let mut s = Self::zeros(d);
        for i in 0..d {
            for j in i..d {
                s.set(i, j, 0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn coordinates(&self) -> &[f64] {
        &self.upper
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[packed_index(self.d, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = packed_index(self.d, i, j);
        self.upper[k] = v;
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.d, self.d, |i, j| self.get(i, j))
    }

    pub fn trace(&self) -> f64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymMatrix {
            d: self.d,
            upper: self.upper.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SymMatrix) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::domain("SymMatrix", "dimension mismatch"));
        }
        Ok(SymMatrix {
            d: self.d,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        })
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.to_dense()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub(crate) fn cholesky(&self) -> Result<Cholesky<f64, Dyn>> {
        if self.d == 0 {
            return Err(Error::NotPositiveDefinite);
        }
        Cholesky::new(self.to_dense()).ok_or(Error::NotPositiveDefinite)
    }

    /// `log det` of a positive definite matrix.
    pub fn log_det(&self) -> Result<f64> {
        let l = self.cholesky()?.l();
        Ok(2.0 * (0..self.d).map(|i| l[(i, i)].ln()).sum::<f64>())
    }
}

/// `Σ = A + iB` with `A`, `B` real symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSymMatrix {
    pub re: SymMatrix,
    pub im: SymMatrix,
}

impl ComplexSymMatrix {
    pub fn new(re: SymMatrix, im: SymMatrix) -> Result<Self> {
        if re.dim() != im.dim() {
            return Err(Error::domain("ComplexSymMatrix", "dimension mismatch"));
        }
        Ok(ComplexSymMatrix { re, im })
    }

    pub fn real(re: SymMatrix) -> Self {
        let d = re.dim();
        ComplexSymMatrix { re, im: SymMatrix::zeros(d) }
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    pub fn add(&self, other: &ComplexSymMatrix) -> Result<Self> {
        Ok(ComplexSymMatrix {
            re: self.re.add(&other.re)?,
            im: self.im.add(&other.im)?,
        })
    }

    /// `log det(A + iB)` for positive definite `A`, on the branch obtained by
    /// continuity from `B = 0`.
    ///
    /// With `A = LL'`, `det(A + iB) = det A · ∏ (1 + iμ_j)` where `μ_j` are the
    /// eigenvalues of `L⁻¹BL⁻ᵀ`; each factor has positive real part.
    pub fn log_det(&self) -> Result<ComplexScalar> {
        let chol = self.re.cholesky()?;
        let l = chol.l();
        let log_det_a = 2.0 * (0..self.dim()).map(|i| l[(i, i)].ln()).sum::<f64>();
        let linv = l.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
        let c = &linv * self.im.to_dense() * linv.transpose();
        let mu = SymMatrix::from_dense(&c).eigenvalues();
        let mut acc = c64(log_det_a, 0.0);
        for m in mu {
            acc += principal_ln(c64(1.0, m));
        }
        Ok(acc)
    }
}

/// True iff a Cholesky factorization succeeds, i.e. every pivot is positive.
pub fn is_positive_definite(s: &SymMatrix) -> bool {
    s.cholesky().is_ok()
}

/// `log det(I + sign·iΣT)^{−α} = −α Σ_j Log(1 + sign·iλ_j)`, where `λ_j` are
/// the eigenvalues of `L'TL`, `Σ = LL'`.
///
/// `L'TL` is similar to `ΣT`, so the `λ_j` are real and every factor lies in
/// the right half-plane; the principal logarithm of each is continuous in
/// `T`, which fixes the branch of the power.
pub fn log_det_power(sigma: &SymMatrix, t: &SymMatrix, alpha: ComplexScalar, sign: f64) -> Result<ComplexScalar> {
    if sigma.dim() != t.dim() {
        return Err(Error::domain("log_det_power", "dimension mismatch"));
    }
    let l = sigma.cholesky()?.l();
    let m = l.transpose() * t.to_dense() * &l;
    let lambdas = SymMatrix::from_dense(&m).eigenvalues();
    let s = if sign < 0.0 { -1.0 } else { 1.0 };
    let mut acc = c64(0.0, 0.0);
    for lambda in lambdas {
        acc += principal_ln(c64(1.0, s * lambda));
    }
    Ok(-alpha * acc)
}
