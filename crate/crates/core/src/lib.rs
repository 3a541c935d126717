//! Numerical model of the non-commutative two-player quantum heads-or-tails game.
//!
//! The game space is the span of round-number states `|0>..|N>`. The arbiter
//! owns a ladder pair that steps through rounds, and each player's pay-off is a
//! Hermitian operator linear in the ladder pair. This crate builds those
//! operators in a truncated basis ([`gamespace`]), diagonalizes the symmetrized
//! pay-off product to classify pay-off correlations ([`correlation`]), and
//! evaluates the continuum picture of Hermite round densities ([`roundwaves`]).
//! [`shell`] provides the `qht` command line front end and its file formats.

pub mod correlation;
pub mod error;
pub mod gamespace;
pub mod numerics;
pub mod roundwaves;
pub mod shell;

pub use correlation::{correlation_spectrum, CorrelationReport, CorrelationRow, SignClass};
pub use error::{Error, Result};
pub use gamespace::{BoundaryMode, CommutatorAudit, GameSpace, OperatorSet, PayoffUnit, Player};
pub use numerics::{hermitian_eigen, ComplexScalar, DenseComplexMatrix, Parity, SpectralDecomposition};
