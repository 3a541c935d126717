use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{inner, vector_norm, ComplexScalar, DenseComplexMatrix};
use crate::error::{invalid, Error, Result};

/// Default ceiling on the matrix dimension accepted by [`hermitian_eigen`].
pub const DEFAULT_MAX_DIM: usize = 512;
/// Hermiticity tolerance for eigensolver input.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;
const PHASE_THRESHOLD: f64 = 1e-10;

/// Round-number parity of a state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    /// Classifies a vector by the weight it carries on odd vs even indices.
    pub fn of_vector(v: &[ComplexScalar], tol: f64) -> Parity {
        let (mut even, mut odd) = (0.0, 0.0);
        for (k, z) in v.iter().enumerate() {
            if k % 2 == 0 {
                even += z.norm_sqr();
            } else {
                odd += z.norm_sqr();
            }
        }
        if odd.sqrt() <= tol {
            Parity::Even
        } else if even.sqrt() <= tol {
            Parity::Odd
        } else {
            Parity::Mixed
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<ComplexScalar>>,
    pub parity: Vec<Option<Parity>>,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest `|<v_j, v_k> - delta_jk|`.
    pub fn orthonormality_error(&self) -> f64 {
        let vs = &self.eigenvectors;
        let mut worst = 0.0_f64;
        for j in 0..vs.len() {
            for k in j..vs.len() {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((inner(&vs[j], &vs[k]) - target).norm());
            }
        }
        worst
    }

    /// Largest `||M v_k - lambda_k v_k||_2`.
    pub fn max_residual(&self, m: &DenseComplexMatrix) -> Result<f64> {
        let mut worst = 0.0_f64;
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let mv = m.apply(v)?;
            let r: Vec<ComplexScalar> = mv.iter().zip(v).map(|(a, b)| a - b * lambda).collect();
            worst = worst.max(vector_norm(&r));
        }
        Ok(worst)
    }

    /// `|| sum_k v_k v_k^† - I ||_inf`.
    pub fn resolution_error(&self) -> f64 {
        let n = self.eigenvectors.first().map_or(0, Vec::len);
        let mut worst = 0.0_f64;
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                let mut acc: ComplexScalar = self.eigenvectors.iter().map(|v| v[i] * v[j].conj()).sum();
                if i == j {
                    acc -= 1.0;
                }
                row_sum += acc.norm();
            }
            worst = worst.max(row_sum);
        }
        worst
    }
}

/// Eigensolver limits.
#[derive(Debug, Clone, Copy)]
pub struct EigenLimits {
    pub max_dim: usize,
    pub max_sweeps: usize,
}

impl Default for EigenLimits {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            max_sweeps: MAX_SWEEPS,
        }
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Runs cyclic Jacobi on the real symmetric embedding `[[Re, -Im], [Im, Re]]`,
/// whose spectrum is the Hermitian spectrum with every eigenvalue doubled.
/// Each doubled cluster is folded back to complex vectors and re-orthogonalized.
/// Every eigenvector is rotated so that its first non-negligible component is
/// real and positive. `tol` bounds the relative residual `||Mv - lv|| / (1 + ||M||_inf)`
/// and the orthonormality error.
pub fn hermitian_eigen(m: &DenseComplexMatrix, tol: f64) -> Result<SpectralDecomposition> {
    hermitian_eigen_with(m, tol, EigenLimits::default())
}

pub fn hermitian_eigen_with(
    m: &DenseComplexMatrix,
    tol: f64,
    limits: EigenLimits,
) -> Result<SpectralDecomposition> {
    let n = m.dim();
    if n > limits.max_dim {
        return Err(invalid(format!(
            "matrix dimension {n} exceeds eigensolver ceiling {}",
            limits.max_dim
        )));
    }
    let herm_dev = m.hermitian_deviation();
    if herm_dev > HERMITIAN_TOL {
        return Err(invalid(format!(
            "matrix is not Hermitian (max deviation {herm_dev:e})"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }

    let mut real = embed(m);
    let (values, vectors, sweeps) = jacobi_symmetric(&mut real, 2 * n, limits.max_sweeps)?;

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut pairs: Vec<(f64, Vec<ComplexScalar>)> = Vec::with_capacity(n);
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - values[order[end - 1]] < CLUSTER_GAP {
            end += 1;
        }
        let cluster = &order[start..end];
        if !cluster.len().is_multiple_of(2) {
            return Err(Error::Numerical(format!(
                "embedded spectrum cluster of odd size {} near {}",
                cluster.len(),
                values[cluster[0]]
            )));
        }
        let candidates: Vec<Vec<ComplexScalar>> = cluster
            .iter()
            .map(|&c| fold_column(&vectors, 2 * n, c))
            .collect();
        for v in orthonormal_subset(candidates, cluster.len() / 2)? {
            let lambda = rayleigh(m, &v)?;
            pairs.push((lambda, v));
        }
        start = end;
    }

    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let (eigenvalues, eigenvectors): (Vec<f64>, Vec<Vec<ComplexScalar>>) = pairs
        .into_iter()
        .map(|(l, v)| (l, fix_phase(v)))
        .unzip();

    let decomposition = SpectralDecomposition {
        parity: vec![None; eigenvalues.len()],
        eigenvalues,
        eigenvectors,
    };

    let scale = 1.0 + m.norm_inf();
    let residual = decomposition.max_residual(m)?;
    let ortho = decomposition.orthonormality_error();
    if residual > tol * scale || ortho > tol {
        return Err(Error::NotConverged {
            sweeps,
            residual: residual.max(ortho),
        });
    }
    Ok(decomposition)
}

/// Row-major `2n x 2n` real symmetric embedding of a Hermitian matrix.
fn embed(m: &DenseComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let big = 2 * n;
    let mut out = vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            out[i * big + j] = z.re;
            out[(i + n) * big + (j + n)] = z.re;
            out[i * big + (j + n)] = -z.im;
            out[(i + n) * big + j] = z.im;
        }
    }
    out
}

/// Cyclic Jacobi for a dense real symmetric matrix (row-major, overwritten).
/// Returns the diagonal, the accumulated rotations (row-major, eigenvectors in
/// columns) and the number of sweeps used.
fn jacobi_symmetric(a: &mut [f64], n: usize, max_sweeps: usize) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let mut v = vec![0.0; n * n];
    for k in 0..n {
        v[k * n + k] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = f64::EPSILON * frob;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(a, n);
        if off <= target || off == 0.0 {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NotConverged {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(a, n, p, q, c, s);
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let diag = (0..n).map(|k| a[k * n + k]).collect();
    Ok((diag, v, sweeps))
}

/// Applies `J^T A J` for the rotation in the (p, q) plane, off-pivot entries only.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp;
        a[k * n + q] = new_kq;
        a[q * n + k] = new_kq;
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Column `c` of the embedded eigenvector matrix as the complex vector `x + iy`.
fn fold_column(v: &[f64], big: usize, c: usize) -> Vec<ComplexScalar> {
    let n = big / 2;
    (0..n)
        .map(|i| Complex64::new(v[i * big + c], v[(i + n) * big + c]))
        .collect()
}

/// Pivoted Gram-Schmidt: picks `k` orthonormal vectors spanning the candidates.
fn orthonormal_subset(mut candidates: Vec<Vec<ComplexScalar>>, k: usize) -> Result<Vec<Vec<ComplexScalar>>> {
    let mut basis: Vec<Vec<ComplexScalar>> = Vec::with_capacity(k);
    while basis.len() < k {
        let (best, norm) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, vector_norm(c)))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || norm < 1e-6 {
            return Err(Error::Numerical(format!(
                "degenerate cluster spans only {} of {k} directions",
                basis.len()
            )));
        }
        let mut chosen = candidates.swap_remove(best);
        // second pass keeps the new vector orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &chosen);
                for (x, y) in chosen.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = vector_norm(&chosen);
        chosen.iter_mut().for_each(|x| *x /= nrm);
        for c in candidates.iter_mut() {
            let proj = inner(&chosen, c);
            for (x, y) in c.iter_mut().zip(&chosen) {
                *x -= proj * y;
            }
        }
        basis.push(chosen);
    }
    Ok(basis)
}

fn rayleigh(m: &DenseComplexMatrix, v: &[ComplexScalar]) -> Result<f64> {
    let mv = m.apply(v)?;
    Ok(inner(v, &mv).re)
}

fn fix_phase(mut v: Vec<ComplexScalar>) -> Vec<ComplexScalar> {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > PHASE_THRESHOLD) {
        let rot = lead.conj() / lead.norm();
        v.iter_mut().for_each(|z| *z *= rot);
        if let Some(first) = v.iter_mut().find(|z| z.norm() > PHASE_THRESHOLD) {
            first.im = 0.0;
        }
    }
    // drop signed zeros so serialized output does not depend on them
    for z in v.iter_mut() {
        if z.re == 0.0 {
            z.re = 0.0;
        }
        if z.im == 0.0 {
            z.im = 0.0;
        }
    }
    v
}
