//! Truncated eigenfunction expansions for first-kind Fredholm equations.
//!
//! The pieces, in the order an experiment uses them:
//!
//! - [`spectral`]: Gauss–Legendre Nyström discretization and a Jacobi
//!   eigensolver producing a [`SpectralSystem`].
//! - [`kernels`]: the triangular and sinc kernels, tabulated kernels, and
//!   prolate spectra.
//! - [`regularize`]: constraint sequences, problem synthesis, the `k₁`/`k₂`
//!   truncation rules and checks of their error inequalities.
//! - [`infotheory`]: ε-entropy bounds of data ellipsoids and exact covering
//!   and packing numbers of finite point sets.
//! - [`stability`]: the Jensen stability bound, an exact LP sup, and
//!   continuity classification.
//!
//! ```
//! use fredholm::kernels::triangular_eigenvalues;
//! use fredholm::regularize::truncation_k1;
//!
//! let lam = triangular_eigenvalues(100);
//! assert_eq!(truncation_k1(&lam, 1e-2, 1.0)?, 3);
//! # Ok::<(), fredholm::Error>(())
//! ```

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod infotheory;
pub mod json;
pub mod kernels;
pub mod numeric;
pub mod regularize;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
pub use spectral::{gauss_legendre, spectral_system, QuadratureGrid, SpectralSystem};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/truncation.md")]
    mod truncation {}
    #[doc = include_str!("../../../book/src/information.md")]
    mod information {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
