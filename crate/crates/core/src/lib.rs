//! Numerical verification of Cauchy-beta type integral identities.
//!
//! [`special`] provides the scalar kernels, [`fourier`] the transform pairs,
//! [`quadrature`] and [`matrix`] the integration engines, and [`identities`]
//! the registry that compares closed forms with numerical integrals. The
//! `betaint` binary in [`cli`] runs suites of cases and writes reports.

pub mod cli;
pub mod error;
pub mod fourier;
pub mod identities;
pub mod matrix;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};

/// The book chapters, compiled as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/special_functions.md")]
    mod special_functions {}
    #[doc = include_str!("../../../book/src/fourier_pairs.md")]
    mod fourier_pairs {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/matrix_domain.md")]
    mod matrix_domain {}
    #[doc = include_str!("../../../book/src/identities.md")]
    mod identities {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
