import numpy as np
import pytest

from pauliprop import modarith, qpcode
from pauliprop.errors import InvalidCode, TooFewPositions, UnsupportedFamily
from pauliprop.pauli import commutation_phase, to_matrix
from pauliprop.qpcode import QuantumPolynomialCode


def test_code_parameter_validation():
    code = QuantumPolynomialCode(5, 3)
    assert code.n == 5
    assert code.correctable_weight == 1
    assert code.is_maximal
    assert not QuantumPolynomialCode(13, 3).is_maximal
    with pytest.raises(InvalidCode):
        QuantumPolynomialCode(4, 2)  # composite dimension
    with pytest.raises(InvalidCode):
        QuantumPolynomialCode(5, 4)  # distance beyond (D+1)/2


def test_parity_check_rows():
    assert qpcode.parity_check_matrix(QuantumPolynomialCode(3, 2)).tolist() == [[1, 1, 1]]
    h = qpcode.parity_check_matrix(QuantumPolynomialCode(5, 3))
    assert h.tolist() == [[1, 1, 1, 1, 1], [0, 1, 2, 3, 4]]
    assert int(np.dot(h[0], h[1])) % 5 == 0  # 0+1+2+3+4 = 10 = 0 mod 5


@pytest.mark.parametrize("D", [3, 5, 7])
def test_maximal_family_structure(D):
    code = QuantumPolynomialCode(D, (D + 1) // 2)
    gens = qpcode.stabilizer_generators(code)
    assert len(gens) == 2 * (code.d - 1)
    x_logical, z_logical = qpcode.logical_operators(code)
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            assert commutation_phase(a, b) == 0
        assert commutation_phase(a, x_logical) == 0
        assert commutation_phase(a, z_logical) == 0
    assert commutation_phase(x_logical, z_logical) == D - 1
    # the defining vector squares to -1
    i_vec = np.array([pow(k, code.d - 1, D) for k in range(code.n)])
    assert int(np.dot(i_vec, i_vec)) % D == D - 1


def test_logical_vectors_match_hand_values():
    x3, _ = qpcode.logical_operators(QuantumPolynomialCode(3, 2))
    assert x3.x_exp == (0, 1, 2)
    x5, z5 = qpcode.logical_operators(QuantumPolynomialCode(5, 3))
    assert x5.x_exp == (0, 1, 4, 4, 1)
    assert z5.z_exp == tuple((-v) % 5 for v in (0, 1, 4, 4, 1))


def test_non_maximal_family_has_no_explicit_construction():
    code = QuantumPolynomialCode(13, 3)
    with pytest.raises(UnsupportedFamily):
        qpcode.stabilizer_generators(code)
    with pytest.raises(UnsupportedFamily):
        qpcode.logical_operators(code)


def test_codeword_state_d3():
    code = QuantumPolynomialCode(3, 2)
    state = qpcode.codeword_state(code, 0)
    expected = np.zeros(27)
    for idx in (0, 13, 26):  # |000>, |111>, |222>
        expected[idx] = 1 / np.sqrt(3)
    assert np.max(np.abs(state - expected)) < 1e-12
    assert abs(np.linalg.norm(qpcode.codeword_state(code, 1)) - 1.0) < 1e-12


def test_codeword_states_are_stabilized_and_orthogonal():
    code = QuantumPolynomialCode(3, 2)
    omega = np.exp(2j * np.pi / 3)
    states = [qpcode.codeword_state(code, a) for a in range(3)]
    for gen in qpcode.stabilizer_generators(code):
        m = to_matrix(gen)
        for s in states:
            assert np.max(np.abs(m @ s - s)) < 1e-12
    x_logical, z_logical = qpcode.logical_operators(code)
    xm, zm = to_matrix(x_logical), to_matrix(z_logical)
    for a, s in enumerate(states):
        assert np.max(np.abs(xm @ s - states[(a + 1) % 3])) < 1e-12
        assert np.max(np.abs(zm @ s - omega ** a * s)) < 1e-12
    gram = np.array([[np.vdot(u, v) for v in states] for u in states])
    assert np.max(np.abs(gram - np.eye(3))) < 1e-12


def test_erasure_recover_cases():
    code = QuantumPolynomialCode(5, 3)
    full = [modarith.poly_eval([0, 0, 1], k, 5) for k in range(5)]  # f(T) = T^2
    assert full == [0, 1, 4, 4, 1]
    rebuilt = qpcode.erasure_recover(code, [0, 1, 2], [0, 1, 4])
    assert rebuilt.tolist() == full
    assert qpcode.erasure_recover(code, range(5), full).tolist() == full
    with pytest.raises(TooFewPositions):
        qpcode.erasure_recover(code, [0, 1], [0, 1])


@pytest.mark.parametrize("D", [3, 5, 7])
def test_erasure_round_trip_random(D):
    code = QuantumPolynomialCode(D, (D + 1) // 2)
    rng = np.random.default_rng(D)
    for _ in range(1000):
        coeffs = rng.integers(0, D, code.d)
        evals = [modarith.poly_eval(coeffs, k, D) for k in range(code.n)]
        positions = rng.permutation(code.n)[: code.d]
        rebuilt = qpcode.erasure_recover(code, positions, [evals[p] for p in positions])
        assert rebuilt.tolist() == evals
