//! Dense complex matrices, Hermitian operators, and spectral machinery.
//!
//! The two bilinear products at the heart of the crate live here:
//! `jordan(a, b) = (ab + ba)/2` and `lie(a, b) = (i/2)(ab − ba)`. Both map
//! pairs of Hermitian operators to Hermitian operators; neither is
//! associative. The eigensolver is a cyclic Jacobi iteration specialised to
//! Hermitian matrices, which is unconditionally stable and plenty fast at the
//! dimensions this crate targets.

mod error;
mod matrix;
mod hermitian;
mod eigen;

pub use error::LinalgError;
pub use matrix::ComplexMatrix;
pub use hermitian::{jordan, lie, op_function, op_norm, re_im_product, HermitianOp};
pub use eigen::{
    cluster_ranges, decompose, simultaneous_diagonalize, JointEigenspace, SpectralDecomposition,
};
