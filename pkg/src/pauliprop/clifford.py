"""Clifford gates as linear automorphisms of the Pauli label module.

Conjugating X^r Z^s by a Clifford unitary yields another Pauli operator up to
phase, so each gate induces an invertible linear map on (Z/DZ)^{2n}.  The
stored convention is FORWARD: the matrix sends the label of an error present
*before* the gate to the label it carries *after* the gate.  The inverse map
is carried alongside so that no modular matrix inversion is ever needed on
the hot path (and so composite D works without fuss).

Every automorphism produced here can be checked against dense matrix
conjugation with :func:`verify_conjugation`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import pauli
from .errors import (
    DirectionMismatch,
    IllegalMultiplier,
    IndexOutOfRange,
    NotInvertible,
    OracleCapExceeded,
    ShapeMismatch,
)
from .modarith import inverse as mod_inverse
from .modarith import is_unit
from .pauli import PauliLabel


class Direction(Enum):
    FORWARD = "forward"   # matrix maps pre-gate labels to post-gate labels
    INVERSE = "inverse"   # matrix maps post-gate labels to pre-gate labels


class CliffordAutomorphism:
    """Invertible linear map on the label module (Z/DZ)^{2n}.

    Rows/columns are ordered (r_1..r_n, s_1..s_n).  `matrix` and `inv_matrix`
    are exact inverses of each other mod D; both are kept read-only.
    """

    def __init__(self, D: int, n: int, matrix, inv_matrix, direction: Direction = Direction.FORWARD):
        self.D = D
        self.n = n
        self.matrix = np.asarray(matrix, dtype=np.int64) % D
        self.inv_matrix = np.asarray(inv_matrix, dtype=np.int64) % D
        self.direction = direction
        m = 2 * n
        if self.matrix.shape != (m, m) or self.inv_matrix.shape != (m, m):
            raise ShapeMismatch(f"automorphism matrices must be {m}x{m}")
        if not np.array_equal((self.matrix @ self.inv_matrix) % D, np.eye(m, dtype=np.int64)):
            raise NotInvertible("matrix and inv_matrix are not inverse mod D")
        self.matrix.flags.writeable = False
        self.inv_matrix.flags.writeable = False

    @classmethod
    def identity(cls, D: int, n: int, direction: Direction = Direction.FORWARD) -> "CliffordAutomorphism":
        eye = np.eye(2 * n, dtype=np.int64)
        return cls(D, n, eye, eye, direction)

    @classmethod
    def from_matrix(cls, matrix, D: int, direction: Direction = Direction.FORWARD) -> "CliffordAutomorphism":
        """Build from a single matrix, inverting it exactly mod D."""
        matrix = np.asarray(matrix, dtype=np.int64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise ShapeMismatch("need a square 2n x 2n matrix")
        return cls(D, matrix.shape[0] // 2, matrix, _invert_mod(matrix, D), direction)

    @property
    def is_identity(self) -> bool:
        return np.array_equal(self.matrix, np.eye(2 * self.n, dtype=np.int64))

    def apply(self, label: PauliLabel) -> PauliLabel:
        if label.D != self.D or label.n != self.n:
            raise ShapeMismatch("label does not match automorphism shape")
        return PauliLabel.from_vector((self.matrix @ label.vector()) % self.D, self.D)

    def apply_inverse(self, label: PauliLabel) -> PauliLabel:
        if label.D != self.D or label.n != self.n:
            raise ShapeMismatch("label does not match automorphism shape")
        return PauliLabel.from_vector((self.inv_matrix @ label.vector()) % self.D, self.D)

    def inverted(self) -> "CliffordAutomorphism":
        return CliffordAutomorphism(self.D, self.n, self.inv_matrix, self.matrix, self.direction)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CliffordAutomorphism)
            and self.D == other.D
            and self.n == other.n
            and self.direction == other.direction
            and np.array_equal(self.matrix, other.matrix)
        )

    def __repr__(self) -> str:
        return f"CliffordAutomorphism(D={self.D}, n={self.n}, {self.direction.value})"


def compose(first: CliffordAutomorphism, second: CliffordAutomorphism) -> CliffordAutomorphism:
    """Automorphism of applying `first` and then `second`."""
    if first.D != second.D or first.n != second.n:
        raise ShapeMismatch("automorphisms act on different label modules")
    if first.direction != second.direction:
        raise DirectionMismatch("cannot compose forward with inverse maps")
    return CliffordAutomorphism(
        first.D,
        first.n,
        (second.matrix @ first.matrix) % first.D,
        (first.inv_matrix @ second.inv_matrix) % first.D,
        first.direction,
    )


def _invert_mod(matrix: np.ndarray, D: int) -> np.ndarray:
    """Exact inverse mod D via rational adjugate; works for composite D."""
    m = matrix.shape[0]
    a = [[Fraction(int(matrix[i, j])) for j in range(m)] for i in range(m)]
    aug = [row + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(a)]
    det = Fraction(1)
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise NotInvertible("matrix is singular over the integers")
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
            det = -det
        det *= aug[col][col]
        inv_p = 1 / aug[col][col]
        aug[col] = [v * inv_p for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    det_int = int(det)  # determinant of an integer matrix is an integer
    if not is_unit(det_int, D):
        raise NotInvertible(f"determinant {det_int} is not a unit mod {D}")
    adj = np.array(
        [[int(aug[i][m + j] * det) for j in range(m)] for i in range(m)], dtype=object
    )
    inv = (adj * mod_inverse(det_int, D)) % D
    return inv.astype(np.int64)


# -- gate specifications -------------------------------------------------------

@dataclass(frozen=True)
class GateSpec:
    """One ideal gate from the library.

    kind is one of "F", "M", "PAULI", "C".  For "C" (a controlled-Pauli
    sequence) `x_powers`/`z_powers` give, per target, the powers of the
    controlled-X and controlled-Z factors.
    """

    kind: str
    qudits: tuple[int, ...]
    multiplier: int = 1
    label: PauliLabel | None = None
    x_powers: tuple[int, ...] = field(default=())
    z_powers: tuple[int, ...] = field(default=())


def fourier(qudit: int) -> GateSpec:
    return GateSpec("F", (qudit,))


def multiply(l: int, qudit: int) -> GateSpec:
    return GateSpec("M", (qudit,), multiplier=l)


def pauli_gate(label: PauliLabel) -> GateSpec:
    return GateSpec("PAULI", tuple(range(label.n)), label=label)


def cpauli_sequence(control: int, targets, x_powers, z_powers) -> GateSpec:
    targets = tuple(targets)
    x_powers = tuple(int(v) for v in x_powers)
    z_powers = tuple(int(v) for v in z_powers)
    if len(targets) != len(x_powers) or len(targets) != len(z_powers):
        raise ShapeMismatch("one X and one Z power needed per target")
    return GateSpec("C", (control,) + targets, x_powers=x_powers, z_powers=z_powers)


def cx(control: int, target: int, power: int = 1) -> GateSpec:
    return cpauli_sequence(control, (target,), (power,), (0,))


def cz(control: int, target: int, power: int = 1) -> GateSpec:
    return cpauli_sequence(control, (target,), (0,), (power,))


def automorphism_of(gate: GateSpec, n: int, D: int) -> CliffordAutomorphism:
    """Forward label map of an ideal gate, identity on untouched qudits.

    Propagation rules:
      F:      (r, s) -> (-s, r)          on the touched qudit
      M(l):   (r, s) -> (l r, l^-1 s)
      PAULI:  identity (Paulis commute up to phase)
      C:      control (j, k), targets (l_i, m_i):
              k += sum_i (l_i b_i - m_i a_i) + j sum_i a_i b_i
              l_i += j a_i;  m_i += j b_i
    The cross term j sum_i a_i b_i on the control's Z exponent comes from
    the per-target ordering (controlled-X first, then controlled-Z): the two
    factors on one target do not commute, and the dense conjugation oracle
    confirms the term is required whenever a_i b_i != 0.
    """
    for q in gate.qudits:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"qudit {q} outside register of size {n}")
    if len(set(gate.qudits)) != len(gate.qudits):
        raise IndexOutOfRange(f"repeated qudit in {gate.qudits}")
    fwd = np.eye(2 * n, dtype=np.int64)
    inv = np.eye(2 * n, dtype=np.int64)

    def r(q):
        return q

    def s(q):
        return n + q

    if gate.kind == "F":
        (q,) = gate.qudits
        for mat, sign in ((fwd, -1), (inv, 1)):
            mat[r(q), r(q)] = 0
            mat[s(q), s(q)] = 0
            mat[r(q), s(q)] = sign % D
            mat[s(q), r(q)] = (-sign) % D
    elif gate.kind == "M":
        (q,) = gate.qudits
        if not is_unit(gate.multiplier, D):
            raise IllegalMultiplier(f"multiplier {gate.multiplier} not a unit mod {D}")
        l = gate.multiplier % D
        linv = mod_inverse(l, D)
        fwd[r(q), r(q)] = l
        fwd[s(q), s(q)] = linv
        inv[r(q), r(q)] = linv
        inv[s(q), s(q)] = l
    elif gate.kind == "PAULI":
        pass
    elif gate.kind == "C":
        c = gate.qudits[0]
        targets = gate.qudits[1:]
        cross = sum(a * b for a, b in zip(gate.x_powers, gate.z_powers))
        for mat, sign in ((fwd, 1), (inv, -1)):
            for t, a, b in zip(targets, gate.x_powers, gate.z_powers):
                mat[r(t), r(c)] = (sign * a) % D
                mat[s(t), r(c)] = (sign * b) % D
                mat[s(c), r(t)] = (sign * b) % D
                mat[s(c), s(t)] = (-sign * a) % D
            mat[s(c), r(c)] = (sign * cross) % D
    else:
        raise ValueError(f"unknown gate kind {gate.kind!r}")
    return CliffordAutomorphism(D, n, fwd % D, inv % D)


# -- dense unitary oracle -------------------------------------------------------

@lru_cache(maxsize=32)
def _fourier_matrix(D: int) -> np.ndarray:
    j, k = np.indices((D, D))
    m = np.exp(2j * np.pi * j * k / D) / np.sqrt(D)
    m.flags.writeable = False
    return m


def gate_unitary(gate: GateSpec, n: int, D: int, cap: int = pauli.DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Dense unitary of an ideal gate on the full D^n-dimensional space."""
    dim = D ** n
    if dim > cap:
        raise OracleCapExceeded(f"dimension {dim} exceeds oracle cap {cap}")
    if gate.kind == "F":
        return _embed_single(_fourier_matrix(D), gate.qudits[0], n, D)
    if gate.kind == "M":
        if not is_unit(gate.multiplier, D):
            raise IllegalMultiplier(f"multiplier {gate.multiplier} not a unit mod {D}")
        m = np.zeros((D, D), dtype=complex)
        for k in range(D):
            m[(k * gate.multiplier) % D, k] = 1.0
        return _embed_single(m, gate.qudits[0], n, D)
    if gate.kind == "PAULI":
        if gate.label.n != n:
            raise ShapeMismatch("Pauli gate label must cover the full register")
        return pauli.to_matrix(gate.label, cap=cap)
    if gate.kind == "C":
        omega = np.exp(2j * np.pi / D)
        c = gate.qudits[0]
        targets = gate.qudits[1:]
        cols = np.arange(dim)
        digits = np.array(np.unravel_index(cols, (D,) * n))
        dc = digits[c]
        phase_exp = np.zeros(dim, dtype=np.int64)
        new_digits = digits.copy()
        for t, a, b in zip(targets, gate.x_powers, gate.z_powers):
            # per target: controlled-X first, then controlled-Z
            new_digits[t] = (digits[t] + a * dc) % D
            phase_exp = (phase_exp + b * dc * new_digits[t]) % D
        rows = np.ravel_multi_index(tuple(new_digits), (D,) * n)
        u = np.zeros((dim, dim), dtype=complex)
        u[rows, cols] = omega ** phase_exp
        return u
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def _embed_single(m: np.ndarray, qudit: int, n: int, D: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for q in range(n):
        out = np.kron(out, m if q == qudit else np.eye(D))
    return out


def verify_conjugation(
    gate: GateSpec,
    auto: CliffordAutomorphism,
    n: int,
    D: int,
    tol: float = 1e-10,
    cap: int = pauli.DEFAULT_ORACLE_CAP,
) -> bool:
    """Check U M_L U^dag = phase * M_{auto(L)} for every label L.

    The comparison is up to a unit-modulus phase, consistent with the label
    calculus being phase-blind.
    """
    dim = D ** n
    if dim > cap:
        raise OracleCapExceeded(f"dimension {dim} exceeds oracle cap {cap}")
    u = gate_unitary(gate, n, D, cap=cap)
    udag = u.conj().T
    for flat in range(D ** (2 * n)):
        vec = np.array(np.unravel_index(flat, (D,) * (2 * n)), dtype=np.int64)
        label = PauliLabel.from_vector(vec, D)
        conj = u @ pauli.to_matrix(label, cap=cap) @ udag
        target = pauli.to_matrix(auto.apply(label), cap=cap)
        phase = np.trace(target.conj().T @ conj) / dim
        if abs(abs(phase) - 1.0) > tol:
            return False
        if np.max(np.abs(conj - phase * target)) > tol:
            return False
    return True
