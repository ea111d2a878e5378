import math

import numpy as np
import pytest

su2dual = pytest.importorskip("su2dual")


def test_clebsch_gordan_known_values():
    assert su2dual.clebsch_gordan(1, 1, 1, -1, 0, 0) == pytest.approx(1 / math.sqrt(3))
    assert su2dual.clebsch_gordan(1, 1, 1, 1, 2, 2) == pytest.approx(1.0)


def test_electric_radial_levels_are_casimirs():
    levels = su2dual.radial_levels(0, None, 6)
    expected = [a / 2 * (a / 2 + 1) for a in range(6)]
    assert levels == pytest.approx(expected, abs=1e-9)


def test_basis_labels_follow_casimir_order():
    labels = su2dual.basis_labels(None, 5)
    assert [(a, l, m) for a, l, m, _ in labels] == [(0, 0, 0), (0, 1, -1), (0, 1, 0), (0, 1, 1), (1, 0, 0)]


def test_operator_table_hermitian():
    t = su2dual.operator_table(1.0, 6)
    for e in t["EL"] + t["ER"]:
        assert np.allclose(e, e.conj().T, atol=1e-12)
    assert np.allclose(t["S"], t["S"].conj().T, atol=1e-12)


def test_vacuum_energy_and_plaquette():
    beta = 0.25
    r = su2dual.ground_state(beta, [None] * 5, [1, 1, 1, 1, 1])
    assert r["energy"] == pytest.approx(16 * beta, rel=1e-12)
    assert r["plaquette"] == pytest.approx(1.0, abs=1e-12)


def test_hamiltonian_is_sparse_and_hermitian():
    h = su2dual.hamiltonian(1.0, su2dual.initial_ansatz(1.0), [2, 2, 2, 1, 1])
    assert h.shape == (8, 8)
    d = h.toarray()
    assert np.allclose(d, d.conj().T, atol=1e-12)
    e0 = su2dual.ground_state(1.0, su2dual.initial_ansatz(1.0), [2, 2, 2, 1, 1])["energy"]
    assert np.linalg.eigvalsh(d)[0] == pytest.approx(e0, rel=1e-10)


def test_optimisation_lowers_energy():
    r = su2dual.optimize(1.0, [2, 2, 2, 1, 1], max_cycles=2)
    assert r["e_final"] <= r["e_initial"] + 1e-12
    assert len(r["couplings"]) == 5


def test_sweep_returns_one_point_per_job():
    pts = su2dual.sweep([0.5, 2.0], [[1, 1, 1, 1, 1]], ["ansatz", "electric"])
    assert len(pts) == 4
    assert all(p["ok"] for p in pts)
    with pytest.raises(ValueError):
        su2dual.sweep([1.0], [[1, 1, 1, 1, 1]], ["magnetic"])


def test_symbolic_checks():
    assert su2dual.torus_dof(2, 2) == (5, 3)
    assert su2dual.torus_dof(4, 3) == (13, 11)
    assert su2dual.gauss_laws_reduce()


def test_wigner_eckart_oracle():
    assert su2dual.wigner_eckart_max_deviation(10, 3) < 1e-8
