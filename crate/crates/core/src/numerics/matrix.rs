use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Complex scalar used for every operator entry and state amplitude.
pub type ComplexScalar = Complex64;

pub(crate) const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub(crate) const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

/// Square, dense, row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct DenseComplexMatrix {
    dim: usize,
    data: Vec<ComplexScalar>,
}

impl DenseComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("matrix dimension must be at least 1"));
        }
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[ComplexScalar]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (k, &d) in diag.iter().enumerate() {
            check_finite(d)?;
            m[(k, k)] = d;
        }
        Ok(m)
    }

    /// Builds a matrix from a row-major entry vector of length `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("matrix dimension must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        data.iter().copied().try_for_each(check_finite)?;
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(invalid("matrix rows must form a square array"));
        }
        Self::from_row_major(dim, rows.concat())
    }

    /// Real matrix from rows of `f64`.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<ComplexScalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[ComplexScalar] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<ComplexScalar> {
        (0..self.dim).map(|k| self[(k, k)]).collect()
    }

    pub fn trace(&self) -> ComplexScalar {
        self.diagonal().into_iter().sum()
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { dim: n, data }
    }

    /// `self * other - other * self`.
    ///
    /// Each entry is accumulated with error-free products and sums, so the
    /// cancellation between the two orderings loses no more than one rounding.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let (mut re, mut im) = (Dot2::default(), Dot2::default());
                for k in 0..n {
                    let (a, b) = (self.data[i * n + k], other.data[k * n + j]);
                    if a != ZERO && b != ZERO {
                        re.add(a.re, b.re);
                        re.add(-a.im, b.im);
                        im.add(a.re, b.im);
                        im.add(a.im, b.re);
                    }
                    let (c, d) = (other.data[i * n + k], self.data[k * n + j]);
                    if c != ZERO && d != ZERO {
                        re.add(-c.re, d.re);
                        re.add(c.im, d.im);
                        im.add(-c.re, d.im);
                        im.add(-c.im, d.re);
                    }
                }
                data[i * n + j] = Complex64::new(re.value(), im.value());
            }
        }
        Ok(Self { dim: n, data })
    }

    /// `(self * other + other * self) / 2`.
    pub fn symmetrized_product(&self, other: &Self) -> Result<Self> {
        let ab = self.multiply(other)?;
        let ba = other.multiply(self)?;
        Ok((&ab + &ba).scale(Complex64::new(0.5, 0.0)))
    }

    pub fn scale(&self, s: ComplexScalar) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn apply(&self, v: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Largest `|M[m][n] - conj(M[n][m])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).iter().map(|x| x.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Principal submatrix on the given index set, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.dim) {
            return Err(invalid(format!("index {bad} out of range for dim {}", self.dim)));
        }
        let k = indices.len();
        let mut out = Self::zeros(k)?;
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        Ok(out)
    }
}

fn check_finite(z: ComplexScalar) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(invalid("matrix entries must be finite"))
    }
}

impl Index<(usize, usize)> for DenseComplexMatrix {
    type Output = ComplexScalar;

    fn index(&self, (r, c): (usize, usize)) -> &ComplexScalar {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of range");
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for DenseComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut ComplexScalar {
        assert!(r < self.dim && c < self.dim, "index ({r}, {c}) out of range");
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &DenseComplexMatrix {
    type Output = DenseComplexMatrix;

    fn add(self, rhs: Self) -> DenseComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        DenseComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DenseComplexMatrix {
    type Output = DenseComplexMatrix;

    fn sub(self, rhs: Self) -> DenseComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        DenseComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for DenseComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let cells: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Compensated dot product accumulator (TwoProduct + TwoSum).
#[derive(Debug, Default, Clone, Copy)]
struct Dot2 {
    sum: f64,
    err: f64,
}

impl Dot2 {
    fn add(&mut self, a: f64, b: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        let s = self.sum + p;
        let z = s - self.sum;
        let q = (self.sum - (s - z)) + (p - z);
        self.sum = s;
        self.err += q + e;
    }

    fn value(self) -> f64 {
        self.sum + self.err
    }
}

/// Euclidean norm of a complex vector.
pub fn vector_norm(v: &[ComplexScalar]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a, b>` with the first argument conjugated.
pub fn inner(a: &[ComplexScalar], b: &[ComplexScalar]) -> ComplexScalar {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `state† · m · state` for a unit-norm state.
pub fn expectation(state: &[ComplexScalar], m: &DenseComplexMatrix) -> Result<ComplexScalar> {
    let norm = vector_norm(state);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("state must be normalized (norm = {norm})")));
    }
    let mv = m.apply(state)?;
    Ok(inner(state, &mv))
}
