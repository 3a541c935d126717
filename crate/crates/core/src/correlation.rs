//! Pay-off correlation spectrum of the pre-correlation operator.
//!
//! In the finite game the pre-correlation only couples rounds two apart, so it
//! splits into even and odd round sectors. Eigenstates inside one sector carry
//! no `n <-> n+-1` coherence and therefore have vanishing pay-off expectations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamespace::{BoundaryMode, GameSpace, OperatorSet};
use crate::numerics::{
    expectation, hermitian_eigen, ComplexScalar, DenseComplexMatrix, Parity, SpectralDecomposition, ZERO,
};

/// Eigenvalues within this band (scaled by `max(1, max |lambda|)`) classify as 0.
pub const ZERO_BAND: f64 = 1e-10;
/// Pearson ratio is reported only when `sigma1 * sigma2` exceeds this.
pub const SIGMA_FLOOR: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;
const STRUCTURE_TOL: f64 = 1e-12;

/// Sign of a correlation eigenvalue: win-lose, neutral, win-win.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "i8")]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

impl SignClass {
    pub fn value(self) -> i8 {
        match self {
            SignClass::Negative => -1,
            SignClass::Zero => 0,
            SignClass::Positive => 1,
        }
    }

    fn of(lambda: f64, band: f64) -> SignClass {
        if lambda.abs() <= band {
            SignClass::Zero
        } else if lambda < 0.0 {
            SignClass::Negative
        } else {
            SignClass::Positive
        }
    }
}

impl From<SignClass> for i8 {
    fn from(s: SignClass) -> i8 {
        s.value()
    }
}

/// Principal blocks of the pre-correlation on even and odd round indices.
#[derive(Debug, Clone)]
pub struct ParityBlocks {
    pub even: DenseComplexMatrix,
    pub odd: Option<DenseComplexMatrix>,
    /// Full-space index of each even-block row.
    pub even_indices: Vec<usize>,
    pub odd_indices: Vec<usize>,
}

/// Splits a round-parity preserving matrix into its even and odd blocks.
///
/// Fails with [`Error::Structure`] on the first entry coupling indices whose
/// distance is neither 0 nor 2.
pub fn parity_blocks(pc: &DenseComplexMatrix) -> Result<ParityBlocks> {
    let dim = pc.dim();
    for m in 0..dim {
        for n in 0..dim {
            let gap = m.abs_diff(n);
            let magnitude = pc[(m, n)].norm();
            if gap != 0 && gap != 2 && magnitude > STRUCTURE_TOL {
                return Err(Error::Structure { row: m, col: n, magnitude });
            }
        }
    }
    let even_indices: Vec<usize> = (0..dim).step_by(2).collect();
    let odd_indices: Vec<usize> = (1..dim).step_by(2).collect();
    let even = pc.submatrix(&even_indices)?;
    let odd = if odd_indices.is_empty() {
        None
    } else {
        Some(pc.submatrix(&odd_indices)?)
    };
    Ok(ParityBlocks {
        even,
        odd,
        even_indices,
        odd_indices,
    })
}

/// Covariance `<PC> - <pi1><pi2>` of a unit state.
pub fn correlation_value(
    state: &[ComplexScalar],
    pi1: &DenseComplexMatrix,
    pi2: &DenseComplexMatrix,
    pc: &DenseComplexMatrix,
) -> Result<f64> {
    let pre = expectation(state, pc)?.re;
    let e1 = expectation(state, pi1)?.re;
    let e2 = expectation(state, pi2)?.re;
    Ok(pre - e1 * e2)
}

/// One eigenstate of the pre-correlation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub index: usize,
    pub eigenvalue: f64,
    pub parity: Parity,
    pub exp_pi1: f64,
    pub exp_pi2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub correlation: f64,
    pub pearson: Option<f64>,
    pub sign_class: SignClass,
}

/// Pre-correlation spectrum with per-eigenstate pay-off statistics.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub gamespace: GameSpace,
    pub rows: Vec<CorrelationRow>,
    pub decomposition: SpectralDecomposition,
}

impl CorrelationReport {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.eigenvalue).collect()
    }
}

/// Diagonalizes the pre-correlation of `gs`: by parity sector in the finite
/// game, as a whole in the periodic game (whose wrap can mix parities).
pub fn correlation_spectrum(gs: &GameSpace) -> Result<CorrelationReport> {
    let ops = OperatorSet::build(gs);
    let pc = &ops.precorrelation;
    let dim = gs.dim();

    let mut pairs: Vec<(f64, Vec<ComplexScalar>, Parity)> = Vec::with_capacity(dim);
    match gs.mode() {
        BoundaryMode::Finite => {
            let blocks = parity_blocks(pc)?;
            let sectors = [
                (Some(&blocks.even), &blocks.even_indices, Parity::Even),
                (blocks.odd.as_ref(), &blocks.odd_indices, Parity::Odd),
            ];
            for (block, indices, parity) in sectors {
                let Some(block) = block else { continue };
                let spec = hermitian_eigen(block, EIGEN_TOL)?;
                for (lambda, v) in spec.eigenvalues.iter().zip(&spec.eigenvectors) {
                    let mut full = vec![ZERO; dim];
                    for (&i, &z) in indices.iter().zip(v) {
                        full[i] = z;
                    }
                    pairs.push((*lambda, full, parity));
                }
            }
        }
        BoundaryMode::Periodic => {
            let spec = hermitian_eigen(pc, EIGEN_TOL)?;
            for (lambda, v) in spec.eigenvalues.into_iter().zip(spec.eigenvectors) {
                let parity = Parity::of_vector(&v, 1e-10);
                pairs.push((lambda, v, parity));
            }
        }
    }
    // stable: equal eigenvalues keep even-before-odd sector order
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let band = zero_band(pairs.iter().map(|p| p.0));
    let pi1_sq = ops.pi1.multiply(&ops.pi1)?;
    let pi2_sq = ops.pi2.multiply(&ops.pi2)?;
    let mut rows = Vec::with_capacity(dim);
    for (index, (eigenvalue, v, parity)) in pairs.iter().enumerate() {
        let exp_pi1 = expectation(v, &ops.pi1)?.re;
        let exp_pi2 = expectation(v, &ops.pi2)?.re;
        let sigma1 = (expectation(v, &pi1_sq)?.re - exp_pi1 * exp_pi1).max(0.0).sqrt();
        let sigma2 = (expectation(v, &pi2_sq)?.re - exp_pi2 * exp_pi2).max(0.0).sqrt();
        let correlation = correlation_value(v, &ops.pi1, &ops.pi2, pc)?;
        let spread = sigma1 * sigma2;
        rows.push(CorrelationRow {
            index,
            eigenvalue: *eigenvalue,
            parity: *parity,
            exp_pi1,
            exp_pi2,
            sigma1,
            sigma2,
            correlation,
            pearson: (spread > SIGMA_FLOOR).then(|| correlation / spread),
            sign_class: SignClass::of(*eigenvalue, band),
        });
    }

    let decomposition = SpectralDecomposition {
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        parity: pairs.iter().map(|p| Some(p.2)).collect(),
        eigenvectors: pairs.into_iter().map(|p| p.1).collect(),
    };
    Ok(CorrelationReport {
        gamespace: *gs,
        rows,
        decomposition,
    })
}

fn zero_band(eigenvalues: impl Iterator<Item = f64>) -> f64 {
    let largest = eigenvalues.map(f64::abs).fold(0.0, f64::max);
    ZERO_BAND * largest.max(1.0)
}

/// Sign classes `{-1, 0, +1}` of an eigenvalue list.
pub fn sign_classification(eigenvalues: &[f64]) -> Vec<SignClass> {
    let band = zero_band(eigenvalues.iter().copied());
    eigenvalues.iter().map(|&l| SignClass::of(l, band)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamespace::{build_payoffs, build_precorrelation, number_state};
    use num_complex::Complex64;

    fn finite(n: usize) -> GameSpace {
        GameSpace::unit(n, BoundaryMode::Finite).unwrap()
    }

    #[test]
    fn blocks_dim3() {
        let b = parity_blocks(&build_precorrelation(&finite(2))).unwrap();
        assert_eq!(b.even_indices, vec![0, 2]);
        assert_eq!(b.odd_indices, vec![1]);
        assert_eq!(b.even.dim(), 2);
        assert_eq!(b.odd.unwrap().max_abs(), 0.0);
    }

    #[test]
    fn blocks_dim2_zero() {
        let b = parity_blocks(&build_precorrelation(&finite(1))).unwrap();
        assert_eq!(b.even.dim(), 1);
        assert_eq!(b.even.max_abs(), 0.0);
        assert_eq!(b.odd.unwrap().dim(), 1);
    }

    #[test]
    fn blocks_dim5() {
        let b = parity_blocks(&build_precorrelation(&finite(4))).unwrap();
        assert_eq!(b.even_indices, vec![0, 2, 4]);
        assert_eq!(b.odd_indices, vec![1, 3]);
    }

    #[test]
    fn blocks_reject_odd_coupling() {
        let (pi1, _) = build_payoffs(&finite(3));
        match parity_blocks(&pi1) {
            Err(Error::Structure { row, col, .. }) => assert_eq!((row, col), (0, 1)),
            other => panic!("expected structure error, got {other:?}"),
        }
    }

    #[test]
    fn correlation_of_states() {
        let gs = finite(2);
        let ops = OperatorSet::build(&gs);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for n in 0..3 {
            let v = number_state(&gs, n).unwrap();
            assert_eq!(correlation_value(&v, &ops.pi1, &ops.pi2, &ops.precorrelation).unwrap(), 0.0);
        }
        let plus = vec![Complex64::new(r, 0.0), ZERO, Complex64::new(0.0, -r)];
        let minus = vec![Complex64::new(r, 0.0), ZERO, Complex64::new(0.0, r)];
        let cp = correlation_value(&plus, &ops.pi1, &ops.pi2, &ops.precorrelation).unwrap();
        let cm = correlation_value(&minus, &ops.pi1, &ops.pi2, &ops.precorrelation).unwrap();
        assert!((cp - r).abs() < 1e-12);
        assert!((cm + r).abs() < 1e-12);

        // <pi1> = 1/sqrt2 but <pi2> = 0 and <PC> = 0
        let mixed = vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0), ZERO];
        assert!((expectation(&mixed, &ops.pi1).unwrap().re - r).abs() < 1e-15);
        assert!(correlation_value(&mixed, &ops.pi1, &ops.pi2, &ops.precorrelation).unwrap().abs() < 1e-15);

        let bad = vec![Complex64::new(1.0, 0.0); 3];
        assert!(correlation_value(&bad, &ops.pi1, &ops.pi2, &ops.precorrelation).is_err());
    }

    #[test]
    fn spectrum_dim3() {
        let report = correlation_spectrum(&finite(2)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let p = 2.0 * 2f64.sqrt() / 3.0;
        let want = [(-r, -1, Some(-p)), (0.0, 0, Some(0.0)), (r, 1, Some(p))];
        for (row, (lambda, class, pearson)) in report.rows.iter().zip(want) {
            assert!((row.eigenvalue - lambda).abs() < 1e-12);
            assert_eq!(row.sign_class.value(), class);
            assert!((row.pearson.unwrap() - pearson.unwrap()).abs() < 1e-12);
            assert!(row.exp_pi1.abs() <= 1e-12 && row.exp_pi2.abs() <= 1e-12);
            assert!((row.correlation - row.eigenvalue).abs() < 1e-12);
        }
        assert_eq!(report.rows[1].parity, Parity::Odd);
        assert_eq!(report.rows[0].parity, Parity::Even);
        assert!((report.rows[2].sigma1 - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_dim2_all_zero() {
        let report = correlation_spectrum(&finite(1)).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.eigenvalue, 0.0);
            assert_eq!(row.correlation, 0.0);
            assert_eq!(row.sign_class, SignClass::Zero);
        }
    }

    #[test]
    fn sign_classes() {
        let classes = sign_classification(&[-0.7, 0.0, 0.7]);
        assert_eq!(classes, vec![SignClass::Negative, SignClass::Zero, SignClass::Positive]);
        assert_eq!(sign_classification(&[0.0, 0.0]), vec![SignClass::Zero; 2]);
    }

    #[test]
    fn six_states_have_two_dimensional_kernel() {
        // each 3x3 parity block is i * (real antisymmetric) of odd size, hence singular
        let report = correlation_spectrum(&finite(5)).unwrap();
        let classes = sign_classification(&report.eigenvalues());
        let count = |c| classes.iter().filter(|&&x| x == c).count();
        assert_eq!(count(SignClass::Negative), 2);
        assert_eq!(count(SignClass::Zero), 2);
        assert_eq!(count(SignClass::Positive), 2);
    }

    #[test]
    fn periodic_spectrum_symmetric() {
        let report = correlation_spectrum(&GameSpace::unit(4, BoundaryMode::Periodic).unwrap()).unwrap();
        let ev = report.eigenvalues();
        for (a, b) in ev.iter().zip(ev.iter().rev()) {
            assert!((a + b).abs() < 1e-10);
        }
    }
}
