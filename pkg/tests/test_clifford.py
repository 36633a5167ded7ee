import numpy as np
import pytest

from pauliprop import clifford
from pauliprop.clifford import CliffordAutomorphism, Direction
from pauliprop.errors import (
    DirectionMismatch,
    IllegalMultiplier,
    IndexOutOfRange,
    NotInvertible,
)
from pauliprop.pauli import PauliLabel, commutation_phase


def library_gates(D, n):
    gates = [clifford.fourier(0), clifford.pauli_gate(PauliLabel.single(D, n, 0, x=1, z=1))]
    gates += [clifford.multiply(l, 0) for l in range(1, D) if np.gcd(l, D) == 1]
    if n >= 2:
        gates += [
            clifford.cx(0, 1),
            clifford.cz(0, 1),
            clifford.cx(1, 0, power=D - 1),
            clifford.cz(1, 0, power=2 % D if D > 2 else 1),
            clifford.cpauli_sequence(0, range(1, n), [1] * (n - 1), [D - 1] * (n - 1)),
        ]
    return gates


def test_pauli_gate_is_the_identity_map():
    auto = clifford.automorphism_of(clifford.pauli_gate(PauliLabel((1,), (2,), 3)), 1, 3)
    assert auto.is_identity


def test_cz_propagates_x_into_xz():
    auto = clifford.automorphism_of(clifford.cz(0, 1), 2, 3)
    image = auto.apply(PauliLabel.single(3, 2, 0, x=1))
    assert image == PauliLabel((1, 0), (0, 1), 3)


def test_fourier_sends_x_to_z():
    auto = clifford.automorphism_of(clifford.fourier(0), 1, 5)
    assert auto.apply(PauliLabel((1,), (0,), 5)) == PauliLabel((0,), (1,), 5)


def test_compose_identity_and_inverse():
    auto = clifford.automorphism_of(clifford.cz(0, 1), 2, 5)
    ident = CliffordAutomorphism.identity(5, 2)
    assert clifford.compose(ident, auto) == auto
    assert clifford.compose(auto, auto.inverted()).is_identity


def test_fourier_fourth_power_is_identity():
    auto = clifford.automorphism_of(clifford.fourier(0), 1, 7)
    out = CliffordAutomorphism.identity(7, 1)
    for _ in range(4):
        out = clifford.compose(out, auto)
    assert out.is_identity
    # dense cross-check: F^4 proportional to the identity
    u = clifford.gate_unitary(clifford.fourier(0), 1, 7)
    u4 = np.linalg.matrix_power(u, 4)
    phase = u4[0, 0]
    assert np.max(np.abs(u4 - phase * np.eye(7))) < 1e-12


def test_direction_mismatch():
    auto = clifford.automorphism_of(clifford.fourier(0), 1, 5)
    flipped = CliffordAutomorphism(5, 1, auto.matrix, auto.inv_matrix, Direction.INVERSE)
    with pytest.raises(DirectionMismatch):
        clifford.compose(auto, flipped)


def test_gate_validation():
    with pytest.raises(IllegalMultiplier):
        clifford.automorphism_of(clifford.multiply(2, 0), 1, 4)
    with pytest.raises(IndexOutOfRange):
        clifford.automorphism_of(clifford.fourier(3), 2, 5)
    with pytest.raises(IndexOutOfRange):
        clifford.automorphism_of(clifford.cx(0, 0), 2, 5)


@pytest.mark.parametrize("D", [2, 3, 5])
def test_verify_conjugation_spot_checks(D):
    auto = clifford.automorphism_of(clifford.fourier(0), 1, D)
    assert clifford.verify_conjugation(clifford.fourier(0), auto, 1, D)
    if D == 5:
        gate = clifford.multiply(2, 0)
        assert clifford.verify_conjugation(gate, clifford.automorphism_of(gate, 1, 5), 1, 5)


def test_verify_conjugation_rejects_wrong_pairing():
    wrong = clifford.automorphism_of(clifford.cx(0, 1), 2, 2)
    assert not clifford.verify_conjugation(clifford.cz(0, 1), wrong, 2, 2)


@pytest.mark.parametrize("D", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [1, 2])
def test_symplectic_form_preserved(D, n):
    # commutation phases are a bilinear form; every library map must fix it
    form = np.zeros((2 * n, 2 * n), dtype=np.int64)
    form[:n, n:] = -np.eye(n, dtype=np.int64)
    form[n:, :n] = np.eye(n, dtype=np.int64)
    for gate in library_gates(D, n):
        if gate.kind == "PAULI" and gate.label.n != n:
            continue
        m = clifford.automorphism_of(gate, n, D).matrix
        assert np.array_equal((m.T @ form @ m) % D, form % D)


def test_symplectic_preservation_on_label_pairs():
    D, n = 4, 2
    rng = np.random.default_rng(9)
    for gate in library_gates(D, n):
        auto = clifford.automorphism_of(gate, n, D)
        for _ in range(40):
            a = PauliLabel.from_vector(rng.integers(0, D, 2 * n), D)
            b = PauliLabel.from_vector(rng.integers(0, D, 2 * n), D)
            assert commutation_phase(auto.apply(a), auto.apply(b)) == commutation_phase(a, b)


def test_automorphism_matrices_invertible():
    rng = np.random.default_rng(21)
    for D, n in ((2, 2), (3, 2), (4, 2), (5, 2)):
        gates = library_gates(D, n)
        auto = clifford.automorphism_of(gates[0], n, D)
        for _ in range(6):
            nxt = clifford.automorphism_of(gates[rng.integers(len(gates))], n, D)
            auto = clifford.compose(auto, nxt)
        eye = np.eye(2 * n, dtype=np.int64)
        assert np.array_equal((auto.matrix @ auto.inv_matrix) % D, eye)
        label = PauliLabel.from_vector(rng.integers(0, D, 2 * n), D)
        assert auto.apply_inverse(auto.apply(label)) == label


def test_from_matrix_inverts_exactly_over_composite_modulus():
    matrix = np.array([[2, 1], [3, 2]])  # determinant 1, no unit in column one
    auto = CliffordAutomorphism.from_matrix(matrix, 6)
    assert np.array_equal((auto.matrix @ auto.inv_matrix) % 6, np.eye(2, dtype=np.int64))
    with pytest.raises(NotInvertible):
        CliffordAutomorphism.from_matrix(np.array([[2, 0], [0, 1]]), 6)
