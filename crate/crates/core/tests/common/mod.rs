//! Independent reference computations for small Hermitian matrices.
//!
//! Nothing here touches the crate's eigensolver: the characteristic polynomial
//! comes from Faddeev-LeVerrier, real roots from recursive derivative
//! bracketing, eigenvectors from inverse iteration with Gaussian elimination.

#![allow(dead_code)]

use num_complex::Complex64;

pub type C = Complex64;
pub type Mat = Vec<Vec<C>>;

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![C::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Coefficients `c[0..=n]` of `det(x I - A) = sum c[k] x^k`, real parts only.
pub fn char_poly(a: &Mat) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![C::new(0.0, 0.0); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut m = vec![vec![C::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += c[n - k + 1];
        }
        m = next;
        let am = matmul(a, &m);
        let tr: C = (0..n).map(|i| am[i][i]).sum();
        c[n - k] = -tr / k as f64;
    }
    c.iter().map(|z| z.re).collect()
}

fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect()
}

fn bisect(p: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = eval(p, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval(p, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots (with multiplicity, ascending) of a monic polynomial known to be real-rooted.
pub fn real_roots(p: &[f64]) -> Vec<f64> {
    let d = p.len() - 1;
    let lead = p[d];
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        return vec![-p[0] / lead];
    }
    let bound = 1.0 + p[..d].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let scale: f64 = p.iter().map(|c| c.abs()).sum::<f64>() * bound.powi(d as i32);

    // critical points grouped into distinct values with multiplicity
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for r in real_roots(&derivative(p)) {
        match groups.last_mut() {
            Some((x, k)) if (r - *x).abs() <= 1e-9 * bound => {
                *x = (*x * *k as f64 + r) / (*k + 1) as f64;
                *k += 1;
            }
            _ => groups.push((r, 1)),
        }
    }

    let mut roots = Vec::new();
    let mut knots = vec![-bound];
    knots.extend(groups.iter().map(|g| g.0));
    knots.push(bound);
    let is_zero = |x: f64| eval(p, x).abs() <= 1e-13 * scale;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if is_zero(a) || is_zero(b) {
            continue;
        }
        if (eval(p, a) < 0.0) != (eval(p, b) < 0.0) {
            roots.push(bisect(p, a, b));
        }
    }
    for &(c, k) in &groups {
        if is_zero(c) {
            roots.extend(std::iter::repeat_n(c, k + 1));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(roots.len(), d, "oracle lost roots of {p:?}: {roots:?}");
    roots
}

pub fn eigenvalues(a: &Mat) -> Vec<f64> {
    real_roots(&char_poly(a))
}

fn solve(mut a: Mat, mut b: Vec<C>) -> Vec<C> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / d;
            let pivot_row = a[col].clone();
            for (dst, src) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let s: C = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Unit eigenvector for a simple eigenvalue `lambda`.
pub fn inverse_iteration(a: &Mat, lambda: f64) -> Vec<C> {
    let n = a.len();
    let shift = lambda + 1e-10 * (1.0 + lambda.abs());
    let mut shifted = a.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= C::new(shift, 0.0);
    }
    let mut v: Vec<C> = (0..n).map(|k| C::new(1.0 + 0.1 * k as f64, 0.05 * k as f64)).collect();
    for _ in 0..3 {
        v = solve(shifted.clone(), v);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
    }
    v
}

/// `|<u, v>|` for unit vectors.
pub fn overlap(u: &[C], v: &[C]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<C>().norm()
}

/// Local maxima of `f` on a uniform grid, refined by a parabola through the three nearest samples.
pub fn grid_maxima(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    let ys: Vec<f64> = (0..=n).map(|k| f(lo + k as f64 * step)).collect();
    let mut out = Vec::new();
    for k in 1..n {
        if ys[k] > ys[k - 1] && ys[k] >= ys[k + 1] {
            let (a, b, c) = (ys[k - 1], ys[k], ys[k + 1]);
            let offset = 0.5 * (a - c) / (a - 2.0 * b + c);
            out.push(lo + (k as f64 + offset) * step);
        }
    }
    out
}

/// Pseudo-random Hermitian matrices from a fixed seed.
pub fn hermitian_batch(dim: usize, count: usize) -> Vec<Mat> {
    use proptest::strategy::{Strategy, ValueTree};
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let entries = proptest::collection::vec(-3.0f64..3.0, 2 * dim * dim);
    (0..count)
        .map(|_| {
            let raw = entries.new_tree(&mut runner).unwrap().current();
            let mut m = vec![vec![C::new(0.0, 0.0); dim]; dim];
            for i in 0..dim {
                m[i][i] = C::new(raw[2 * (i * dim + i)], 0.0);
                for j in i + 1..dim {
                    let z = C::new(raw[2 * (i * dim + j)], raw[2 * (i * dim + j) + 1]);
                    m[i][j] = z;
                    m[j][i] = z.conj();
                }
            }
            m
        })
        .collect()
}
