//! Continuum picture of the game: pay-off wavefunctions after `n` rounds.
//!
//! With player 2's pay-off as the coordinate `xi = pi / sqrt(k1 k2)`, the
//! round-number states are the Hermite functions and `P_n = psi_n^2` is the
//! pay-off density after `n` rounds. This module locates the density maxima,
//! checks the finite-difference residual of the eigen-equation, compares
//! against the classical unit-step random walk, and measures how the norms of
//! free-player and correlation eigenstates diverge.

mod classical;
mod eigenfunction;
mod hermite;

pub use classical::{
    classical_mixture_density, classical_variance, compare_quantum_classical, comparison_grid, quantum_variance,
    ClassicalMixture, ComparisonReport, MAX_COMPARE_ROUNDS, QUADRATURE_STEP,
};
pub use eigenfunction::{
    correlation_eigenfunction, divergence_scan, eigen_exponent, eigenfunction_ode_residual, DivergenceKind,
    DivergenceReport, Growth, LineFit, Ordering, GROWTH_TOL,
};
pub use hermite::{
    classical_centers, density, density_grid, density_peaks, hermite, hermite_zeros, psi, psi_all,
    quadrature_half_width, schrodinger_residual, schrodinger_residual_of, trapezoid, uniform_grid, DensityGrid,
    PeakSet, MAX_ORDER, MAX_SEARCH_ORDER,
};
