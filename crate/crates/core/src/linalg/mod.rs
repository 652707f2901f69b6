//! Dense real/complex linear algebra.

pub mod eigen;
pub mod lu;
pub mod matrix;
pub mod polyeig;
pub mod scalar;
pub mod svd;
pub mod symeig;

pub use eigen::{eigen_standard, eigenvalues, eigenvalues_real, EigenDecomposition};
pub use lu::{solve_linear, BandLu, Lu};
pub use matrix::{dot_c, dot_u, vec_norm, DenseMatrix, Matrix, RealMatrix};
pub use polyeig::{count_negative_eigs_pencil, count_negative_eigs_pencil_below, poly_eigen, PolyEigen};
pub use scalar::Scalar;
pub use svd::{rank_with_tol, singular_values};
pub use symeig::{sym_eigen, sym_eigenvalues, SymEigen};
