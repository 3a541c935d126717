//! Python bindings: `import qht`.

// pyo3 0.22 macro expansion trips this lint on every `PyResult` return
#![allow(clippy::useless_conversion)]

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qht_core::correlation::correlation_spectrum;
use qht_core::gamespace::{audit_commutators, payoff_variance, OperatorSet};
use qht_core::roundwaves::{self, DivergenceKind, Ordering};
use qht_core::{BoundaryMode, DenseComplexMatrix, Error, Player};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn rows(m: &DenseComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.dim()).map(|r| m.row(r).to_vec()).collect()
}

fn parse_mode(mode: &str) -> PyResult<BoundaryMode> {
    mode.parse().map_err(|_| PyValueError::new_err(format!("unknown mode `{mode}`")))
}

fn parse_ordering(ordering: &str) -> PyResult<Ordering> {
    match ordering {
        "printed" => Ok(Ordering::Printed),
        "weyl" => Ok(Ordering::Weyl),
        _ => Err(PyValueError::new_err(format!("unknown ordering `{ordering}`"))),
    }
}

/// Truncated game space with its operators.
#[pyclass(name = "GameSpace", module = "qht", frozen)]
struct PyGameSpace {
    inner: qht_core::GameSpace,
}

#[pymethods]
impl PyGameSpace {
    #[new]
    #[pyo3(signature = (rounds_max, mode = "finite", kappa1 = 1.0, kappa2 = 1.0))]
    fn new(rounds_max: usize, mode: &str, kappa1: f64, kappa2: f64) -> PyResult<Self> {
        let inner = qht_core::GameSpace::new(rounds_max, parse_mode(mode)?, kappa1, kappa2).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn rounds_max(&self) -> usize {
        self.inner.rounds_max()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode().as_str()
    }

    #[getter]
    fn kappa1(&self) -> f64 {
        self.inner.kappa1()
    }

    #[getter]
    fn kappa2(&self) -> f64 {
        self.inner.kappa2()
    }

    /// `{name: rows}` for a+, a-, N, pi1, pi2 and the pre-correlation.
    fn operators<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let ops = OperatorSet::build(&self.inner);
        let d = PyDict::new_bound(py);
        for (name, m) in ops.named() {
            d.set_item(name, rows(m))?;
        }
        Ok(d)
    }

    fn audit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let a = audit_commutators(&self.inner);
        let d = PyDict::new_bound(py);
        d.set_item("ladder_commutator", rows(&a.ladder_commutator))?;
        d.set_item("payoff_commutator", rows(&a.payoff_commutator))?;
        d.set_item("ladder_trace", a.ladder_trace)?;
        d.set_item("interior_block", a.interior_block)?;
        d.set_item("interior_deviation", a.interior_deviation)?;
        d.set_item("canonical_sign", a.canonical_sign)?;
        d.set_item("finite_pattern", a.finite_pattern.pattern.clone())?;
        d.set_item("finite_pattern_deviation", a.finite_pattern.max_deviation)?;
        d.set_item("periodic_pattern", a.periodic_pattern.pattern.clone())?;
        d.set_item("periodic_pattern_deviation", a.periodic_pattern.max_deviation)?;
        d.set_item("ground_payoff_commutator", a.ground_payoff_commutator)?;
        Ok(d)
    }

    /// One dict per pre-correlation eigenstate, ascending eigenvalue.
    fn spectrum<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let report = correlation_spectrum(&self.inner).map_err(to_py)?;
        report
            .rows
            .iter()
            .zip(&report.decomposition.eigenvectors)
            .map(|(r, v)| {
                let d = PyDict::new_bound(py);
                d.set_item("index", r.index)?;
                d.set_item("eigenvalue", r.eigenvalue)?;
                d.set_item("parity", r.parity.as_str())?;
                d.set_item("exp_pi1", r.exp_pi1)?;
                d.set_item("exp_pi2", r.exp_pi2)?;
                d.set_item("sigma1", r.sigma1)?;
                d.set_item("sigma2", r.sigma2)?;
                d.set_item("correlation", r.correlation)?;
                d.set_item("pearson", r.pearson)?;
                d.set_item("sign_class", r.sign_class.value())?;
                d.set_item("eigenvector", v.clone())?;
                Ok(d)
            })
            .collect()
    }

    /// `(value, expected, interior)` for `<n|pi_j^2|n>`.
    fn variance(&self, n: usize, player: u8) -> PyResult<(f64, f64, bool)> {
        let p = Player::from_index(player).map_err(to_py)?;
        let v = payoff_variance(&self.inner, n, p).map_err(to_py)?;
        Ok((v.value, v.expected, v.interior))
    }

    fn __repr__(&self) -> String {
        format!(
            "GameSpace(rounds_max={}, mode='{}', kappa1={}, kappa2={})",
            self.inner.rounds_max(),
            self.inner.mode().as_str(),
            self.inner.kappa1(),
            self.inner.kappa2()
        )
    }
}

/// Eigenvalues (ascending) and unit eigenvectors of a Hermitian matrix.
#[pyfunction]
#[pyo3(signature = (matrix, tol = 1e-10))]
fn hermitian_eigen(matrix: Vec<Vec<Complex64>>, tol: f64) -> PyResult<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let m = DenseComplexMatrix::from_rows(&matrix).map_err(to_py)?;
    let dec = qht_core::hermitian_eigen(&m, tol).map_err(to_py)?;
    Ok((dec.eigenvalues, dec.eigenvectors))
}

#[pyfunction]
fn hermite(n: usize, xi: f64) -> PyResult<f64> {
    roundwaves::hermite(n, xi).map_err(to_py)
}

#[pyfunction]
fn psi(n: usize, xi: f64) -> PyResult<f64> {
    roundwaves::psi(n, xi).map_err(to_py)
}

#[pyfunction]
fn density(n: usize, xi: f64) -> PyResult<f64> {
    roundwaves::density(n, xi).map_err(to_py)
}

#[pyfunction]
fn hermite_zeros(n: usize) -> PyResult<Vec<f64>> {
    roundwaves::hermite_zeros(n).map_err(to_py)
}

#[pyfunction]
fn density_peaks(n: usize) -> PyResult<Vec<f64>> {
    Ok(roundwaves::density_peaks(n).map_err(to_py)?.maxima)
}

#[pyfunction]
fn classical_density(n: usize, xi: Vec<f64>) -> Vec<f64> {
    roundwaves::classical_mixture_density(n, &xi)
}

#[pyfunction]
fn compare<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let c = roundwaves::compare_quantum_classical(n).map_err(to_py)?;
    let d = PyDict::new_bound(py);
    d.set_item("n", c.n)?;
    d.set_item("quantum_peaks", c.quantum_peaks)?;
    d.set_item("classical_centers", c.classical_centers)?;
    d.set_item("quantum_density_at_0", c.quantum_density_at_0)?;
    d.set_item("classical_density_at_0", c.classical_density_at_0)?;
    d.set_item("quantum_minimum_deeper", c.quantum_minimum_deeper)?;
    d.set_item("quantum_variance", c.quantum_variance)?;
    d.set_item("classical_variance", c.classical_variance)?;
    d.set_item("outermost_quantum_peak", c.outermost_quantum_peak)?;
    d.set_item("outermost_deviation", c.outermost_deviation)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (lam, xi, ordering = "weyl", kappa12 = 1.0))]
fn correlation_eigenfunction(lam: f64, xi: Vec<f64>, ordering: &str, kappa12: f64) -> PyResult<Vec<Complex64>> {
    roundwaves::correlation_eigenfunction(lam, parse_ordering(ordering)?, kappa12, &xi).map_err(to_py)
}

/// `(integrals, classification)` for kind `plane`, `printed` or `weyl`.
#[pyfunction]
fn divergence_scan(kind: &str, cutoffs: Vec<f64>) -> PyResult<(Vec<f64>, &'static str)> {
    let kind = match kind {
        "plane" => DivergenceKind::Plane,
        "printed" => DivergenceKind::Printed,
        "weyl" => DivergenceKind::Weyl,
        _ => return Err(PyValueError::new_err(format!("unknown kind `{kind}`"))),
    };
    let d = roundwaves::divergence_scan(kind, &cutoffs).map_err(to_py)?;
    Ok((d.integrals, d.classification.as_str()))
}

#[pymodule]
fn qht(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGameSpace>()?;
    m.add_function(wrap_pyfunction!(hermitian_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(density_peaks, m)?)?;
    m.add_function(wrap_pyfunction!(classical_density, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(correlation_eigenfunction, m)?)?;
    m.add_function(wrap_pyfunction!(divergence_scan, m)?)?;
    Ok(())
}
