use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Highest polynomial order accepted.
pub const MAX_ORDER: usize = 300;
/// Highest order for peak and zero searches.
pub const MAX_SEARCH_ORDER: usize = 100;

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(invalid(format!(
            "Hermite order {n} exceeds the supported ceiling {MAX_ORDER}"
        )));
    }
    Ok(())
}

fn check_finite(xi: f64) -> Result<()> {
    if xi.is_finite() {
        Ok(())
    } else {
        Err(invalid("evaluation point must be finite"))
    }
}

/// Physicists' Hermite polynomial `H_n(xi)` by forward recurrence.
pub fn hermite(n: usize, xi: f64) -> Result<f64> {
    check_order(n)?;
    check_finite(xi)?;
    let (mut prev, mut cur) = (1.0, 2.0 * xi);
    if n == 0 {
        return Ok(prev);
    }
    for k in 1..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Normalized Hermite functions `psi_0 .. psi_n` at one point.
///
/// Uses the orthonormal recurrence
/// `psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1}`, which keeps
/// `C_n H_n(xi) exp(-xi^2/2)` in range for every supported order without
/// forming `2^n n!` or `H_n` separately.
pub fn psi_all(n: usize, xi: f64) -> Result<Vec<f64>> {
    check_order(n)?;
    check_finite(xi)?;
    let mut out = Vec::with_capacity(n + 1);
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    out.push(psi0);
    if n >= 1 {
        out.push(std::f64::consts::SQRT_2 * xi * psi0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    Ok(out)
}

/// `psi_n(xi) = (2^n n! sqrt(pi))^{-1/2} exp(-xi^2/2) H_n(xi)`.
pub fn psi(n: usize, xi: f64) -> Result<f64> {
    Ok(psi_all(n, xi)?[n])
}

/// Pay-off density `P_n(xi) = psi_n(xi)^2`.
pub fn density(n: usize, xi: f64) -> Result<f64> {
    let p = psi(n, xi)?;
    Ok(p * p)
}

/// Uniform samples of `psi_n` and `P_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityGrid {
    pub n: usize,
    pub xi: Vec<f64>,
    pub psi: Vec<f64>,
    pub density: Vec<f64>,
}

/// `samples` equally spaced points from `xi_min` to `xi_max` inclusive.
pub fn uniform_grid(xi_min: f64, xi_max: f64, samples: usize) -> Result<Vec<f64>> {
    if !(xi_min.is_finite() && xi_max.is_finite()) || xi_min >= xi_max {
        return Err(invalid(format!(
            "grid range must satisfy xi_min < xi_max (got {xi_min}, {xi_max})"
        )));
    }
    if samples < 2 {
        return Err(invalid("a grid needs at least two samples"));
    }
    let step = (xi_max - xi_min) / (samples - 1) as f64;
    Ok((0..samples)
        .map(|k| if k + 1 == samples { xi_max } else { xi_min + k as f64 * step })
        .collect())
}

pub fn density_grid(n: usize, xi_min: f64, xi_max: f64, samples: usize) -> Result<DensityGrid> {
    check_order(n)?;
    let xi = uniform_grid(xi_min, xi_max, samples)?;
    let psi = xi.iter().map(|&x| psi(n, x)).collect::<Result<Vec<_>>>()?;
    let density = psi.iter().map(|p| p * p).collect();
    Ok(DensityGrid { n, xi, psi, density })
}

/// Symmetric quadrature half-width that captures the round-`n` density.
pub fn quadrature_half_width(n: usize) -> f64 {
    (2.0 * n as f64 + 1.0).sqrt() + 6.0
}

/// Composite trapezoid rule over paired samples.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Bisection of a sign change on `[lo, hi]` down to adjacent doubles.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numerical(format!(
            "no sign change on bracket [{lo}, {hi}] (values {flo:e}, {fhi:e})"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // adjacent doubles: keep the endpoint closer to the root
            return Ok(if flo.abs() <= f(hi).abs() { lo } else { hi });
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

/// The `n` real zeros of `H_n` in ascending order.
///
/// Zeros of consecutive orders interlace strictly, so the zeros of `H_{k-1}`
/// bracket those of `H_k`; the outer brackets close at `sqrt(2k+1) + 1`.
pub fn hermite_zeros(n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_SEARCH_ORDER {
        return Err(invalid(format!(
            "zero search supports orders 1..={MAX_SEARCH_ORDER}, got {n}"
        )));
    }
    let mut zeros: Vec<f64> = vec![0.0];
    for k in 2..=n {
        let bound = (2.0 * k as f64 + 1.0).sqrt() + 1.0;
        let mut edges = Vec::with_capacity(k + 1);
        edges.push(-bound);
        edges.extend_from_slice(&zeros);
        edges.push(bound);
        let f = |x: f64| psi(k, x).expect("order checked");
        zeros = edges
            .windows(2)
            .map(|w| bisect(f, w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(symmetrize(zeros))
}

/// Local maxima of `P_n` with the classical walk end-points for reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakSet {
    pub n: usize,
    pub maxima: Vec<f64>,
    /// `{-n, -n+2, .., n}`.
    pub classical_centers: Vec<f64>,
}

pub fn classical_centers(n: usize) -> Vec<f64> {
    (0..=n).map(|k| 2.0 * k as f64 - n as f64).collect()
}

/// Maxima of `P_n`, the roots of `2n H_{n-1} - xi H_n`.
///
/// The maxima interlace the `n` zeros of `H_n` (the minima of `P_n`), with the
/// outer two closed off at `sqrt(2n+1) + 2`. Scaled by `C_n exp(-xi^2/2)` the
/// peak condition reads `sqrt(2n) psi_{n-1} - xi psi_n = 0`, which is what is
/// bisected.
pub fn density_peaks(n: usize) -> Result<PeakSet> {
    if n > MAX_SEARCH_ORDER {
        return Err(invalid(format!(
            "peak search supports orders 0..={MAX_SEARCH_ORDER}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(PeakSet {
            n,
            maxima: vec![0.0],
            classical_centers: vec![0.0],
        });
    }
    let bound = (2.0 * n as f64 + 1.0).sqrt() + 2.0;
    let mut edges = vec![-bound];
    edges.extend(hermite_zeros(n)?);
    edges.push(bound);
    let scale = (2.0 * n as f64).sqrt();
    let g = |x: f64| {
        let all = psi_all(n, x).expect("order checked");
        scale * all[n - 1] - x * all[n]
    };
    let maxima = edges
        .windows(2)
        .map(|w| bisect(g, w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    let maxima = symmetrize(maxima);

    let h = 1e-4;
    for &x in &maxima {
        let d = |t: f64| density(n, t).expect("order checked");
        let curvature = d(x - h) + d(x + h) - 2.0 * d(x);
        if curvature >= 0.0 {
            return Err(Error::Numerical(format!(
                "stationary point {x} of P_{n} is not a maximum"
            )));
        }
    }
    Ok(PeakSet {
        n,
        maxima,
        classical_centers: classical_centers(n),
    })
}

/// Enforces the exact mirror symmetry of roots of even/odd functions.
fn symmetrize(mut roots: Vec<f64>) -> Vec<f64> {
    let len = roots.len();
    for i in 0..len / 2 {
        let j = len - 1 - i;
        let m = 0.5 * (roots[j] - roots[i]);
        roots[i] = -m;
        roots[j] = m;
    }
    if len % 2 == 1 {
        roots[len / 2] = 0.0;
    }
    roots
}

/// Max over `grid` of `|-D2_h f + xi^2 f - energy f|` with the central second difference.
pub fn schrodinger_residual_of(f: impl Fn(f64) -> f64, energy: f64, grid: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("finite-difference step must be positive"));
    }
    Ok(grid
        .iter()
        .map(|&x| {
            let f0 = f(x);
            let d2 = (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
            (-d2 + x * x * f0 - energy * f0).abs()
        })
        .fold(0.0, f64::max))
}

/// Residual of `psi_n` in `-psi'' + xi^2 psi = (2n+1) psi`.
pub fn schrodinger_residual(n: usize, grid: &[f64], h: f64) -> Result<f64> {
    check_order(n)?;
    let half = quadrature_half_width(n);
    if let Some(&bad) = grid.iter().find(|x| x.abs() > half) {
        return Err(invalid(format!("grid point {bad} outside [-{half}, {half}]")));
    }
    schrodinger_residual_of(|x| psi(n, x).expect("order checked"), 2.0 * n as f64 + 1.0, grid, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(2, 1.0).unwrap(), 2.0);
        assert_eq!(hermite(1, 0.0).unwrap(), 0.0);
        assert_eq!(hermite(4, 0.0).unwrap(), 12.0);
        assert_eq!(hermite(3, 2.0).unwrap(), 8.0 * 8.0 - 12.0 * 2.0);
        assert!(hermite(301, 0.0).is_err());
        assert!(hermite(2, f64::INFINITY).is_err());
    }

    #[test]
    fn psi_matches_closed_form() {
        assert!((psi(0, 0.0).unwrap() - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(psi(1, 0.0).unwrap(), 0.0);
        // C_n H_n exp(-xi^2/2) directly, small n
        for n in 0..12 {
            let mut fact = 1.0;
            for k in 1..=n {
                fact *= k as f64;
            }
            let c = (2f64.powi(n as i32) * fact * std::f64::consts::PI.sqrt()).powf(-0.5);
            for &x in &[-2.3_f64, -0.4, 0.0, 0.9, 3.1] {
                let want = c * (-0.5 * x * x).exp() * hermite(n, x).unwrap();
                assert!((psi(n, x).unwrap() - want).abs() < 1e-13, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn psi_high_order_is_finite() {
        let v = psi(300, 5.0).unwrap();
        assert!(v.is_finite());
        assert!(psi(300, 30.0).unwrap().is_finite());
    }

    #[test]
    fn normalization_n3() {
        let g = density_grid(3, -8.0, 8.0, 16001).unwrap();
        assert!((trapezoid(&g.xi, &g.density) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn density_points() {
        let g = density_grid(0, -1.0, 1.0, 201).unwrap();
        let imax = g
            .density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(g.xi[imax], 0.0);
        assert_eq!(density(1, 0.0).unwrap(), 0.0);
        let want = 2.0 * (-1.0f64).exp() / std::f64::consts::PI.sqrt();
        assert!((density(1, 1.0).unwrap() - want).abs() < 1e-15);
        assert!((density(1, -1.0).unwrap() - want).abs() < 1e-15);
        assert!((want - 0.415107).abs() < 1e-6);
        assert!(density_grid(1, 1.0, 1.0, 10).is_err());
        assert!(density_grid(1, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn zeros_small_orders() {
        assert_eq!(hermite_zeros(1).unwrap(), vec![0.0]);
        let z2 = hermite_zeros(2).unwrap();
        assert!((z2[1] - 0.5f64.sqrt()).abs() < 1e-12 && z2[0] == -z2[1]);
        let z3 = hermite_zeros(3).unwrap();
        assert!((z3[2] - 1.5f64.sqrt()).abs() < 1e-12 && z3[1] == 0.0);
        assert!(hermite_zeros(0).is_err());
    }

    #[test]
    fn peaks_small_orders() {
        assert_eq!(density_peaks(0).unwrap().maxima, vec![0.0]);
        assert_eq!(density_peaks(1).unwrap().maxima, vec![-1.0, 1.0]);
        let p2 = density_peaks(2).unwrap();
        assert!((p2.maxima[2] - 2.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(p2.maxima[1], 0.0);
        assert_eq!(p2.classical_centers, vec![-2.0, 0.0, 2.0]);
    }

    #[test]
    fn residual_of_zero_function() {
        let grid = uniform_grid(-3.0, 3.0, 61).unwrap();
        assert_eq!(schrodinger_residual_of(|_| 0.0, 1.0, &grid, 1e-3).unwrap(), 0.0);
        assert!(schrodinger_residual_of(|_| 0.0, 1.0, &grid, 0.0).is_err());
    }

    #[test]
    fn residual_ground_state() {
        let grid = uniform_grid(-7.0, 7.0, 1401).unwrap();
        assert!(schrodinger_residual(0, &grid, 1e-3).unwrap() <= 1e-5);
        assert!(schrodinger_residual(0, &[100.0], 1e-3).is_err());
    }
}
