use serde::Serialize;

use super::hermite::{density, density_peaks, quadrature_half_width, trapezoid, uniform_grid};
use crate::error::{invalid, Result};

/// Quadrature step for variance and normalization integrals.
pub const QUADRATURE_STEP: f64 = 1e-3;

/// `n`-round classical heads-or-tails walk with unit steps, started from the
/// round-zero Gaussian pay-off density `exp(-xi^2) / sqrt(pi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalMixture {
    pub n: usize,
    /// `2^-n C(n, k)`.
    pub weights: Vec<f64>,
    /// `n - 2k`.
    pub centers: Vec<f64>,
    /// Standard deviation of each Gaussian component.
    pub width: f64,
}

impl ClassicalMixture {
    pub fn new(n: usize) -> Self {
        let mut weights = Vec::with_capacity(n + 1);
        let mut binom = 1.0_f64;
        let scale = 0.5f64.powi(n as i32);
        for k in 0..=n {
            weights.push(binom * scale);
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        let centers = (0..=n).map(|k| n as f64 - 2.0 * k as f64).collect();
        Self {
            n,
            weights,
            centers,
            width: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn density(&self, xi: f64) -> f64 {
        let norm = 1.0 / std::f64::consts::PI.sqrt();
        self.weights
            .iter()
            .zip(&self.centers)
            .map(|(w, c)| w * norm * (-(xi - c) * (xi - c)).exp())
            .sum()
    }

    /// `1/2 + n`: initial spread plus one unit of variance per round.
    pub fn analytic_variance(&self) -> f64 {
        0.5 + self.n as f64
    }
}

/// Classical walk density sampled on `grid`.
pub fn classical_mixture_density(n: usize, grid: &[f64]) -> Vec<f64> {
    let mix = ClassicalMixture::new(n);
    grid.iter().map(|&x| mix.density(x)).collect()
}

/// Quadrature grid wide enough for both the quantum and the classical density.
pub fn comparison_grid(n: usize) -> Vec<f64> {
    let half = quadrature_half_width(n).max(n as f64 + 6.0);
    let samples = (2.0 * half / QUADRATURE_STEP).ceil() as usize + 1;
    uniform_grid(-half, half, samples).expect("valid range")
}

/// `integral xi^2 P_n(xi) dxi` by trapezoid quadrature.
pub fn quantum_variance(n: usize) -> Result<f64> {
    let grid = comparison_grid(n);
    let y = grid
        .iter()
        .map(|&x| Ok(x * x * density(n, x)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(trapezoid(&grid, &y))
}

pub fn classical_variance(n: usize) -> f64 {
    let grid = comparison_grid(n);
    let mix = ClassicalMixture::new(n);
    let y: Vec<f64> = grid.iter().map(|&x| x * x * mix.density(x)).collect();
    trapezoid(&grid, &y)
}

/// Quantum round density against the classical walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub quantum_peaks: Vec<f64>,
    pub classical_centers: Vec<f64>,
    pub quantum_density_at_0: f64,
    pub classical_density_at_0: f64,
    /// Only for odd `n`, where both densities have a central dip.
    pub quantum_minimum_deeper: Option<bool>,
    pub quantum_variance: f64,
    pub classical_variance: f64,
    pub outermost_quantum_peak: f64,
    /// `n - outermost_quantum_peak`.
    pub outermost_deviation: f64,
}

pub const MAX_COMPARE_ROUNDS: usize = 50;

pub fn compare_quantum_classical(n: usize) -> Result<ComparisonReport> {
    if n == 0 || n > MAX_COMPARE_ROUNDS {
        return Err(invalid(format!(
            "comparison supports 1..={MAX_COMPARE_ROUNDS} rounds, got {n}"
        )));
    }
    let peaks = density_peaks(n)?;
    let mix = ClassicalMixture::new(n);
    let quantum_density_at_0 = density(n, 0.0)?;
    let classical_density_at_0 = mix.density(0.0);
    let outermost = *peaks.maxima.last().expect("n + 1 maxima");
    Ok(ComparisonReport {
        n,
        quantum_minimum_deeper: (n % 2 == 1).then_some(quantum_density_at_0 < classical_density_at_0),
        quantum_peaks: peaks.maxima,
        classical_centers: peaks.classical_centers,
        quantum_density_at_0,
        classical_density_at_0,
        quantum_variance: quantum_variance(n)?,
        classical_variance: classical_variance(n),
        outermost_quantum_peak: outermost,
        outermost_deviation: n as f64 - outermost,
    })
}
