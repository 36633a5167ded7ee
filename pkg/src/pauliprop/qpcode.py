"""Polynomial quantum codes over prime fields.

A [[2d-1, 1, d]]_D code encodes one logical qudit into n = 2d-1 physical
qudits, D prime, by storing a degree-(d-1) polynomial in its evaluations at
the points 0..n-1.  Any d evaluations determine the polynomial, which is what
makes erasures recoverable.  For the maximal family d = (D+1)/2 (so n = D)
the construction yields an explicit stabilizer group generated by X^{h_j}
and Z^{h_j} for the power-sum rows h_j = (k^j)_k, with logical operators
X^i and Z^{-i} for i = (k^{d-1})_k.

Smaller-distance members are handled abstractly through their (n, 1, d)
parameters; the repeater analysis needs nothing more from them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidCode, OracleCapExceeded, TooFewPositions, UnsupportedFamily
from .modarith import is_prime, poly_eval, residues, vandermonde_solve
from .pauli import DEFAULT_ORACLE_CAP, PauliLabel


@dataclass(frozen=True)
class QuantumPolynomialCode:
    """Parameters of a [[2d-1, 1, d]]_D polynomial code."""

    D: int
    d: int

    def __post_init__(self):
        if not is_prime(self.D):
            raise InvalidCode(f"D={self.D} is not prime")
        if not 1 <= self.d <= (self.D + 1) // 2:
            raise InvalidCode(f"need 1 <= d <= (D+1)/2, got d={self.d} at D={self.D}")

    @property
    def n(self) -> int:
        return 2 * self.d - 1

    @property
    def correctable_weight(self) -> int:
        return (self.d - 1) // 2

    @property
    def is_maximal(self) -> bool:
        """Whether d = (D+1)/2, the family with explicit stabilizers."""
        return self.D >= 3 and 2 * self.d == self.D + 1


def parity_check_matrix(code: QuantumPolynomialCode) -> np.ndarray:
    """(d-1) x n matrix with rows h_j = (k^j) over the evaluation points."""
    return np.array(
        [[pow(k, j, code.D) for k in range(code.n)] for j in range(code.d - 1)],
        dtype=np.int64,
    )


def _require_maximal(code: QuantumPolynomialCode) -> None:
    if not code.is_maximal:
        raise UnsupportedFamily(
            f"explicit construction needs d=(D+1)/2; got d={code.d} at D={code.D}"
        )


def stabilizer_generators(code: QuantumPolynomialCode) -> list[PauliLabel]:
    """X^{h_j} and Z^{h_j} for every parity-check row, maximal family only."""
    _require_maximal(code)
    rows = parity_check_matrix(code)
    zeros = (0,) * code.n
    gens: list[PauliLabel] = []
    for row in rows:
        gens.append(PauliLabel(tuple(int(v) for v in row), zeros, code.D))
        gens.append(PauliLabel(zeros, tuple(int(v) for v in row), code.D))
    return gens


def logical_operators(code: QuantumPolynomialCode) -> tuple[PauliLabel, PauliLabel]:
    """Logical pair (X^i, Z^{-i}) with i = (k^{d-1})_k, maximal family only."""
    _require_maximal(code)
    i_vec = residues([pow(k, code.d - 1, code.D) for k in range(code.n)], code.D)
    zeros = (0,) * code.n
    x_logical = PauliLabel(tuple(int(v) for v in i_vec), zeros, code.D)
    z_logical = PauliLabel(zeros, tuple(int(v) for v in (-i_vec) % code.D), code.D)
    return x_logical, z_logical


def codeword_state(code: QuantumPolynomialCode, a: int, cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Logical basis state |a_L> as a normalized vector of dimension D^n.

    Equal superposition over the evaluation vectors of all polynomials with
    leading coefficient a.
    """
    D, d, n = code.D, code.d, code.n
    dim = D ** n
    if dim > cap:
        raise OracleCapExceeded(f"dimension {dim} exceeds oracle cap {cap}")
    a = int(a) % D
    state = np.zeros(dim, dtype=complex)
    amp = 1.0 / np.sqrt(D ** (d - 1))
    for flat in range(D ** (d - 1)):
        lower = np.unravel_index(flat, (D,) * (d - 1)) if d > 1 else ()
        coeffs = [int(v) for v in lower] + [a]
        evals = [poly_eval(coeffs, k, D) for k in range(n)]
        idx = int(np.ravel_multi_index(evals, (D,) * n))
        state[idx] += amp
    return state


def erasure_recover(code: QuantumPolynomialCode, known_positions, known_evals) -> np.ndarray:
    """Rebuild the full evaluation vector from >= d known positions."""
    positions = [int(p) for p in known_positions]
    values = [int(v) for v in known_evals]
    if len(positions) != len(values):
        raise TooFewPositions(
            f"{len(positions)} positions but {len(values)} values"
        )
    if len(positions) < code.d:
        raise TooFewPositions(
            f"need at least d={code.d} known positions, got {len(positions)}"
        )
    coeffs = vandermonde_solve(positions[: code.d], values[: code.d], code.D)
    return np.array([poly_eval(coeffs, k, code.D) for k in range(code.n)], dtype=np.int64)
