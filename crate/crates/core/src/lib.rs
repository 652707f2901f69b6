//! Spectral analysis of self-adjoint quadratic pencils
//! `L(λ, η) = λ²M − ληG − A` with `M, G ⪰ 0`.
//!
//! The crate computes spectra with multiplicities, classifies eigenvalues by
//! whether their eigenvectors are annihilated by `G`, tracks branches along
//! `η`, checks location and counting properties, discretizes Sturm–Liouville
//! problems with spectral-parameter boundary conditions, and finds zeros of
//! analytic characteristic functions by the argument principle.

pub mod charfn;
pub mod error;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod pencil;
pub mod properties;
pub mod report;
pub mod sturm;

pub use error::{Error, Result};
