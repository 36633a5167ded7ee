import numpy as np
import pytest

from pauliprop import pauli
from pauliprop.errors import OracleCapExceeded, ShapeMismatch
from pauliprop.pauli import PauliLabel


def all_labels(D, n):
    for flat in range(D ** (2 * n)):
        yield PauliLabel.from_vector(np.unravel_index(flat, (D,) * (2 * n)), D)


def test_identity_matrix():
    label = PauliLabel.identity(3, 1)
    assert np.allclose(pauli.to_matrix(label), np.eye(3))


def test_x_matrix_is_the_bit_flip_for_qubits():
    label = PauliLabel.single(2, 1, 0, x=1)
    assert np.allclose(pauli.to_matrix(label), [[0, 1], [1, 0]])


def test_z_matrix_is_the_clock_for_qutrits():
    label = PauliLabel.single(3, 1, 0, z=1)
    omega = np.exp(2j * np.pi / 3)
    assert np.allclose(pauli.to_matrix(label), np.diag([1, omega, omega ** 2]))


def test_oracle_cap():
    with pytest.raises(OracleCapExceeded):
        pauli.to_matrix(PauliLabel.identity(2, 13))


@pytest.mark.parametrize("D,n", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)])
def test_unitarity_and_orthogonality(D, n):
    dim = D ** n
    mats = np.stack([pauli.to_matrix(lab) for lab in all_labels(D, n)])
    for m in mats:
        assert np.max(np.abs(m @ m.conj().T - np.eye(dim))) < 1e-12
    vecs = mats.reshape(len(mats), -1)
    gram = vecs.conj() @ vecs.T
    assert np.max(np.abs(gram - dim * np.eye(len(mats)))) < 1e-10


def test_commutation_examples():
    x0 = PauliLabel.single(2, 1, 0, x=1)
    z0 = PauliLabel.single(2, 1, 0, z=1)
    assert pauli.commutation_phase(x0, x0) == 0
    assert pauli.commutation_phase(x0, z0) == 1  # qubit X and Z anticommute
    a = PauliLabel.single(5, 2, 0, x=1)
    b = PauliLabel.single(5, 2, 1, z=1)
    assert pauli.commutation_phase(a, b) == 0  # disjoint supports commute


def test_commutation_antisymmetry():
    D, n = 5, 2
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = PauliLabel.from_vector(rng.integers(0, D, 2 * n), D)
        b = PauliLabel.from_vector(rng.integers(0, D, 2 * n), D)
        t = pauli.commutation_phase(a, b)
        assert pauli.commutation_phase(b, a) == (-t) % D


@pytest.mark.parametrize("D,n", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)])
def test_commutation_agrees_with_matrices(D, n):
    rng = np.random.default_rng(D * 10 + n)
    labels = list(all_labels(D, n)) if D ** (2 * n) <= 81 else None
    omega = np.exp(2j * np.pi / D)
    for _ in range(120):
        if labels is not None:
            a, b = (labels[rng.integers(len(labels))] for _ in range(2))
        else:
            a = PauliLabel.from_vector(rng.integers(0, D, 2 * n), D)
            b = PauliLabel.from_vector(rng.integers(0, D, 2 * n), D)
        ma, mb = pauli.to_matrix(a), pauli.to_matrix(b)
        t = pauli.commutation_phase(a, b)
        assert np.max(np.abs(ma @ mb - omega ** t * (mb @ ma))) < 1e-12


def test_compose_tracks_the_phase():
    # qubit: (XZ)(XZ) = -1
    xz = PauliLabel((1,), (1,), 2)
    result = pauli.compose(xz, xz)
    assert result.label.is_identity
    assert result.phase_exp == 1
    # matrix cross-check at D=3
    a = PauliLabel((1,), (2,), 3)
    b = PauliLabel((2,), (1,), 3)
    out = pauli.compose(a, b)
    omega = np.exp(2j * np.pi / 3)
    lhs = pauli.to_matrix(a) @ pauli.to_matrix(b)
    rhs = omega ** out.phase_exp * pauli.to_matrix(out.label)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        pauli.commutation_phase(PauliLabel.identity(2, 1), PauliLabel.identity(2, 2))
    with pytest.raises(ShapeMismatch):
        pauli.commutation_phase(PauliLabel.identity(2, 1), PauliLabel.identity(3, 1))


def test_label_rendering():
    label = PauliLabel((2, 0, 0), (1, 0, 3), 5)
    assert str(label) == "X2Z1@q0 * X0Z3@q2"
    assert str(PauliLabel.identity(5, 3)) == "I"
