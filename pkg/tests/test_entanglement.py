import numpy as np
import pytest

from pauliprop import entanglement as ent
from pauliprop.entanglement import BellDiagonalState
from pauliprop.errors import DenseCapExceeded, OutOfRange


def random_state(D, rng):
    w = rng.random((D, D))
    return BellDiagonalState(D, w / w.sum())


def pure_state(D):
    w = np.zeros((D, D))
    w[0, 0] = 1.0
    return BellDiagonalState(D, w)


def test_weight_validation():
    with pytest.raises(OutOfRange):
        BellDiagonalState(2, np.full((2, 2), 1.0))
    with pytest.raises(OutOfRange):
        BellDiagonalState(2, np.zeros((3, 3)))


def test_fidelity_values():
    assert ent.fidelity(pure_state(3)) == 1.0
    uniform = BellDiagonalState(13, np.full((13, 13), 1 / 169))
    assert abs(ent.fidelity(uniform) - 1 / 13) < 1e-15


def test_density_matrix_pure_case():
    D = 2
    rho = ent.density_matrix(pure_state(D))
    psi = ent.maximally_entangled_vector(D)
    assert np.max(np.abs(rho - np.outer(psi, psi.conj()))) < 1e-14
    assert abs(np.vdot(psi, psi) - 1.0) < 1e-14


def test_density_matrix_uniform_is_maximally_mixed():
    D = 3
    uniform = BellDiagonalState(D, np.full((D, D), 1 / D ** 2))
    assert np.max(np.abs(ent.density_matrix(uniform) - np.eye(D * D) / D ** 2)) < 1e-13


def test_density_matrix_is_a_state():
    rng = np.random.default_rng(5)
    for D in (2, 3, 5):
        rho = ent.density_matrix(random_state(D, rng))
        assert abs(np.trace(rho) - 1.0) < 1e-12
        assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_density_matrix_cap():
    with pytest.raises(DenseCapExceeded):
        ent.density_matrix(pure_state(37))


def test_log_negativity_limits():
    for D in (2, 3, 4, 5, 13, 31, 100):
        assert abs(ent.log_negativity(pure_state(D)) - np.log2(D)) < 1e-12
        uniform = BellDiagonalState(D, np.full((D, D), 1 / D ** 2))
        assert ent.log_negativity(uniform) < 1e-12


@pytest.mark.parametrize("D", [2, 3, 5, 7, 11])
def test_fast_path_matches_dense_diagonalization(D):
    rng = np.random.default_rng(100 + D)
    for _ in range(200):
        state = random_state(D, rng)
        fast = ent.log_negativity(state)
        dense = ent.log_negativity(state, force_dense=True)
        assert abs(fast - dense) < 1e-9


@pytest.mark.parametrize("D", [2, 3, 5, 7])
def test_negation_relabeling_invariance(D):
    rng = np.random.default_rng(200 + D)
    idx = (-np.arange(D)) % D
    for _ in range(25):
        state = random_state(D, rng)
        flipped = BellDiagonalState(D, state.weights[np.ix_(idx, idx)])
        assert abs(ent.log_negativity(state) - ent.log_negativity(flipped)) < 1e-10
        assert abs(ent.log_negativity(flipped) - ent.log_negativity(state, force_dense=True)) < 1e-9


def test_log_negativity_bounds():
    rng = np.random.default_rng(31)
    for D in (2, 3, 5, 11):
        for _ in range(40):
            value = ent.log_negativity(random_state(D, rng))
            assert 0.0 <= value <= np.log2(D) + 1e-12
