use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numerics::ComplexScalar;

/// Operator ordering of the continuum correlation operator `xi p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// `i k1 k2 (xi d/dxi + 1)`.
    Printed,
    /// `i k1 k2 (xi d/dxi + 1/2)`, the symmetrized `(xi p + p xi) / 2`.
    Weyl,
}

impl Ordering {
    fn shift(self) -> f64 {
        match self {
            Ordering::Printed => 1.0,
            Ordering::Weyl => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Ordering::Printed => "printed",
            Ordering::Weyl => "weyl",
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Ordering {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Ordering::Printed),
            "weyl" => Ok(Ordering::Weyl),
            other => Err(invalid(format!("unknown ordering `{other}`"))),
        }
    }
}

/// Exponent `s` of the scaling solution `xi^s`.
pub fn eigen_exponent(lambda: f64, ordering: Ordering, kappa12: f64) -> ComplexScalar {
    Complex64::new(-ordering.shift(), -lambda / kappa12)
}

fn check_positive_grid(grid: &[f64]) -> Result<()> {
    if let Some(&bad) = grid.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(invalid(format!(
            "correlation eigenfunctions live on xi > 0; got grid point {bad}"
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("grid must be strictly ascending"));
    }
    Ok(())
}

/// `xi^s` on a positive ascending grid.
pub fn correlation_eigenfunction(
    lambda: f64,
    ordering: Ordering,
    kappa12: f64,
    grid: &[f64],
) -> Result<Vec<ComplexScalar>> {
    if !(kappa12 > 0.0 && kappa12.is_finite()) || !lambda.is_finite() {
        return Err(invalid("eigenvalue and pay-off scale must be finite, scale positive"));
    }
    check_positive_grid(grid)?;
    let s = eigen_exponent(lambda, ordering, kappa12);
    Ok(grid.iter().map(|&x| (s * x.ln()).exp()).collect())
}

/// Max over the grid of `|i k (xi psi' + shift psi) - lambda psi|`, with `psi'`
/// from a central difference of step `1e-4 * xi` at each point.
pub fn eigenfunction_ode_residual(lambda: f64, ordering: Ordering, kappa12: f64, grid: &[f64]) -> Result<f64> {
    check_positive_grid(grid)?;
    let s = eigen_exponent(lambda, ordering, kappa12);
    let f = |x: f64| (s * x.ln()).exp();
    let i_k = Complex64::new(0.0, kappa12);
    Ok(grid
        .iter()
        .map(|&x| {
            let h = 1e-4 * x;
            let d = (f(x + h) - f(x - h)) / (2.0 * h);
            let psi = f(x);
            (i_k * (x * d + ordering.shift() * psi) - lambda * psi).norm()
        })
        .fold(0.0, f64::max))
}

/// State family whose norm divergence is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergenceKind {
    /// Free-player plane wave `exp(i p xi)`, integrated over `[-L, L]`.
    Plane,
    /// Correlation eigenfunction, printed ordering, integrated over `[eps, 1]`.
    Printed,
    /// Correlation eigenfunction, symmetrized ordering, integrated over `[eps, 1]`.
    Weyl,
}

impl DivergenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DivergenceKind::Plane => "plane",
            DivergenceKind::Printed => "printed",
            DivergenceKind::Weyl => "weyl",
        }
    }
}

impl FromStr for DivergenceKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane" => Ok(DivergenceKind::Plane),
            "printed" => Ok(DivergenceKind::Printed),
            "weyl" => Ok(DivergenceKind::Weyl),
            other => Err(invalid(format!("unknown divergence kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Growth {
    Linear,
    Logarithmic,
    Undetermined,
}

impl Growth {
    pub fn as_str(self) -> &'static str {
        match self {
            Growth::Linear => "linear",
            Growth::Logarithmic => "logarithmic",
            Growth::Undetermined => "undetermined",
        }
    }
}

/// Least-squares fit `I = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// `||residual||_2 / ||I||_2`.
    pub relative_residual: f64,
}

fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = y.iter().map(|b| b * b).sum::<f64>().sqrt();
    LineFit {
        intercept,
        slope,
        relative_residual: if scale > 0.0 { res / scale } else { res },
    }
}

/// Fit residual below which a growth model is accepted.
pub const GROWTH_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub kind: DivergenceKind,
    pub cutoffs: Vec<f64>,
    pub integrals: Vec<f64>,
    /// Fit against `1/eps` (or `L`).
    pub linear: LineFit,
    /// Fit against `ln(1/eps)` (or `ln L`).
    pub logarithmic: LineFit,
    pub classification: Growth,
}

/// Composite Simpson rule for `f` on `[a, b]` with step at most `max_step`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, max_step: f64) -> f64 {
    let mut m = ((b - a) / max_step).ceil() as usize;
    m = m.max(2);
    if m % 2 == 1 {
        m += 1;
    }
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for k in 1..m {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Norm integral of the chosen state family at each cutoff, with growth fits.
pub fn divergence_scan(kind: DivergenceKind, cutoffs: &[f64]) -> Result<DivergenceReport> {
    if cutoffs.len() < 4 {
        return Err(invalid("divergence scan needs at least four cutoffs"));
    }
    let integrals: Vec<f64> = match kind {
        DivergenceKind::Plane => {
            if cutoffs.iter().any(|&l| !(l > 1.0 && l.is_finite())) || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
                return Err(invalid("plane-wave cutoffs must be increasing lengths L > 1"));
            }
            let momentum = 1.0;
            cutoffs
                .iter()
                .map(|&l| simpson(|x| Complex64::new(0.0, momentum * x).exp().norm_sqr(), -l, l, 1e-3))
                .collect()
        }
        DivergenceKind::Printed | DivergenceKind::Weyl => {
            if cutoffs.iter().any(|&e| !(e > 0.0 && e < 1.0)) || cutoffs.windows(2).any(|w| w[1] >= w[0]) {
                return Err(invalid("eigenfunction cutoffs must be decreasing values in (0, 1)"));
            }
            let ordering = if kind == DivergenceKind::Printed {
                Ordering::Printed
            } else {
                Ordering::Weyl
            };
            // the eigenvalue only sets a phase; any value gives the same |psi|^2
            let s = eigen_exponent(1.0, ordering, 1.0);
            // integrate in t = ln xi, where the integrand |psi|^2 xi is smooth
            cutoffs
                .iter()
                .map(|&e| simpson(|t| (s * t).exp().norm_sqr() * t.exp(), e.ln(), 0.0, 1e-3))
                .collect()
        }
    };
    let (lin_x, log_x): (Vec<f64>, Vec<f64>) = match kind {
        DivergenceKind::Plane => cutoffs.iter().map(|&l| (l, l.ln())).unzip(),
        _ => cutoffs.iter().map(|&e| (1.0 / e, -e.ln())).unzip(),
    };
    let linear = fit_line(&lin_x, &integrals);
    let logarithmic = fit_line(&log_x, &integrals);
    let classification = match (
        linear.relative_residual < GROWTH_TOL,
        logarithmic.relative_residual < GROWTH_TOL,
    ) {
        (true, false) => Growth::Linear,
        (false, true) => Growth::Logarithmic,
        (true, true) if linear.relative_residual <= logarithmic.relative_residual => Growth::Linear,
        (true, true) => Growth::Logarithmic,
        (false, false) => Growth::Undetermined,
    };
    Ok(DivergenceReport {
        kind,
        cutoffs: cutoffs.to_vec(),
        integrals,
        linear,
        logarithmic,
        classification,
    })
}
