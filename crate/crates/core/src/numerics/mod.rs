//! Dense complex linear algebra and a Hermitian eigensolver.

mod eigen;
mod matrix;

pub use eigen::{
    hermitian_eigen, hermitian_eigen_with, EigenLimits, Parity, SpectralDecomposition, CLUSTER_GAP,
    DEFAULT_MAX_DIM, HERMITIAN_TOL,
};
pub use matrix::{expectation, inner, vector_norm, ComplexScalar, DenseComplexMatrix};
pub(crate) use matrix::{ONE, ZERO};
