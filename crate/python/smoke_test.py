"""Smoke test for the `qht` extension module.

Build first:  maturin develop --release -m crates/py/Cargo.toml
Then:         python python/smoke_test.py
"""

import math

import qht


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    gs = qht.GameSpace(2)
    assert gs.dim == 3 and gs.mode == "finite"

    ops = gs.operators()
    assert set(ops) == {"a_plus", "a_minus", "number", "pi1", "pi2", "precorrelation"}, sorted(ops)
    assert close(ops["a_plus"][1][0].real, 1.0, 1e-15)

    rows = gs.spectrum()
    s = 1 / math.sqrt(2)
    for row, want in zip(rows, (-s, 0.0, s)):
        assert close(row["eigenvalue"], want, 1e-10)
        assert abs(row["exp_pi1"]) < 1e-10 and abs(row["exp_pi2"]) < 1e-10
    assert [r["sign_class"] for r in rows] == [-1, 0, 1]
    assert close(rows[2]["pearson"], 2 * math.sqrt(2) / 3, 1e-9)

    audit = qht.GameSpace(5).audit()
    assert audit["canonical_sign"] == -1
    assert audit["interior_deviation"] < 1e-12
    periodic = qht.GameSpace(4, mode="periodic").audit()
    assert abs(periodic["ground_payoff_commutator"]) < 1e-12

    value, expected, interior = qht.GameSpace(6, kappa2=2.0).variance(3, 2)
    assert interior and close(value, expected, 1e-12) and close(expected, 14.0, 1e-12)

    evals, evecs = qht.hermitian_eigen([[2, 1j], [-1j, 2]])
    assert close(evals[0], 1.0, 1e-12) and close(evals[1], 3.0, 1e-12)
    assert len(evecs) == 2

    assert qht.hermite(3, 0.5) == 8 * 0.125 - 12 * 0.5
    assert close(qht.psi(0, 0.0), math.pi ** -0.25, 1e-15)
    assert qht.density_peaks(1) == [-1.0, 1.0]
    peaks = qht.density_peaks(2)
    assert close(peaks[2], math.sqrt(2.5), 1e-12)
    zeros = qht.hermite_zeros(2)
    assert close(zeros[1], s, 1e-15)
    assert close(qht.classical_density(1, [0.0])[0], 0.2075537, 1e-6)

    cmp = qht.compare(3)
    assert cmp["quantum_minimum_deeper"] is True
    assert close(cmp["quantum_variance"], 3.5, 1e-6)

    f = qht.correlation_eigenfunction(1.0, [1.0, 4.0])
    assert close(abs(f[1]), 0.5, 1e-15)

    _, growth = qht.divergence_scan("weyl", [1e-1, 1e-2, 1e-3, 1e-4])
    assert growth == "logarithmic"
    _, growth = qht.divergence_scan("plane", [10, 20, 40, 80])
    assert growth == "linear"

    try:
        qht.GameSpace(0, mode="periodic")
    except ValueError:
        pass
    else:
        raise AssertionError("periodic space with no rounds should be rejected")

    print("qht smoke test passed")


if __name__ == "__main__":
    main()
