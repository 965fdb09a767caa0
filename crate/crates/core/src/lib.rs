//! Direct and inverse spectral problems for the non-self-adjoint
//! Sturm-Liouville operator `-y'' + q(x) y = λ y` on `(0, π)` with the
//! Robin conditions `y'(0) - h y(0) = 0` and `y'(π) + H y(π) = 0`.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] holds the data types, asymptotic decomposition, distances
//!   and set-membership checks.
//! * [`direct`] solves the forward problem: characteristic functions,
//!   eigenvalues, weight numbers, Weyl function and Cauchy data.
//! * [`inverse`] reconstructs `(q, h, H)` from simple spectral data through
//!   the discrete main equation.
//! * [`contour`] handles multiple eigenvalues with a contour block operator
//!   and reconstructs from Cauchy data.
//! * [`stability`] runs perturbation experiments.
//! * [`io`] holds the JSON/CSV interchange formats.

pub mod contour;
pub mod direct;
pub mod error;
pub mod grid;
pub mod inverse;
pub mod io;
pub mod linalg;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
pub use grid::GridFunction;
pub use num_complex::Complex64;
pub use spectral::{Multiplicity, ProblemTriple, SpectralData};
