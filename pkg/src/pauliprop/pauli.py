"""Generalized Pauli operators on n qudits as exponent labels.

A label (r, s) stands for the operator X^r Z^s = sum_k w^{k.s} |k+r><k| with
w = exp(2*pi*i/D), up to a global phase.  Labels form the module (Z/DZ)^{2n};
composition adds exponents and produces a power of w that this module tracks
where needed.  A dense complex matrix realization serves as the correctness
oracle for everything built on top of the label calculus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import OracleCapExceeded, ShapeMismatch
from .modarith import check_modulus

DEFAULT_ORACLE_CAP = 4096


@dataclass(frozen=True)
class PauliLabel:
    """Exponent pair identifying X^x_exp Z^z_exp up to phase."""

    x_exp: tuple[int, ...]
    z_exp: tuple[int, ...]
    D: int

    def __post_init__(self):
        check_modulus(self.D)
        if len(self.x_exp) != len(self.z_exp):
            raise ShapeMismatch(
                f"x/z exponent lengths differ: {len(self.x_exp)} vs {len(self.z_exp)}"
            )
        object.__setattr__(self, "x_exp", tuple(int(v) % self.D for v in self.x_exp))
        object.__setattr__(self, "z_exp", tuple(int(v) % self.D for v in self.z_exp))

    @property
    def n(self) -> int:
        return len(self.x_exp)

    @property
    def is_identity(self) -> bool:
        return not any(self.x_exp) and not any(self.z_exp)

    def vector(self) -> np.ndarray:
        """Concatenated (x_exp, z_exp) as a length-2n integer vector."""
        return np.asarray(self.x_exp + self.z_exp, dtype=np.int64)

    @classmethod
    def from_vector(cls, vec, D: int) -> "PauliLabel":
        vec = np.asarray(vec, dtype=np.int64)
        if vec.size % 2:
            raise ShapeMismatch(f"label vector length {vec.size} is odd")
        n = vec.size // 2
        return cls(tuple(vec[:n] % D), tuple(vec[n:] % D), D)

    @classmethod
    def identity(cls, D: int, n: int) -> "PauliLabel":
        return cls((0,) * n, (0,) * n, D)

    @classmethod
    def single(cls, D: int, n: int, qudit: int, x: int = 0, z: int = 0) -> "PauliLabel":
        """Label acting as X^x Z^z on one qudit and trivially elsewhere."""
        xs = [0] * n
        zs = [0] * n
        xs[qudit] = x
        zs[qudit] = z
        return cls(tuple(xs), tuple(zs), D)

    def __str__(self) -> str:
        return format_label(self)


@dataclass(frozen=True)
class PhasedPauli:
    """A Pauli label together with a power of w = exp(2*pi*i/D)."""

    label: PauliLabel
    phase_exp: int

    def __post_init__(self):
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % self.label.D)


def _check_compatible(a: PauliLabel, b: PauliLabel) -> None:
    if a.D != b.D or a.n != b.n:
        raise ShapeMismatch(
            f"incompatible labels: D={a.D},n={a.n} vs D={b.D},n={b.n}"
        )


def commutation_phase(a: PauliLabel, b: PauliLabel) -> int:
    """Exponent t with  A B = w^t B A  for A, B the labeled operators.

    With a = (r, s) and b = (r', s') the exponent is r'.s - r.s' mod D.
    """
    _check_compatible(a, b)
    D = a.D
    t = (np.dot(b.x_exp, a.z_exp) - np.dot(a.x_exp, b.z_exp)) % D
    return int(t)


def compose(a: PauliLabel, b: PauliLabel) -> PhasedPauli:
    """Product of the labeled operators: A B = w^{s_a . r_b} X^{r_a+r_b} Z^{s_a+s_b}."""
    _check_compatible(a, b)
    D = a.D
    phase = int(np.dot(a.z_exp, b.x_exp) % D)
    label = PauliLabel.from_vector(a.vector() + b.vector(), D)
    return PhasedPauli(label, phase)


@lru_cache(maxsize=64)
def _single_qudit_matrix(D: int, x: int, z: int) -> np.ndarray:
    omega = np.exp(2j * np.pi / D)
    m = np.zeros((D, D), dtype=complex)
    for k in range(D):
        m[(k + x) % D, k] = omega ** ((k * z) % D)
    m.flags.writeable = False
    return m


def to_matrix(label: PauliLabel, cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Dense matrix sum_k w^{k.s} |k+r><k| of dimension D^n."""
    dim = label.D ** label.n
    if dim > cap:
        raise OracleCapExceeded(f"dimension {dim} exceeds oracle cap {cap}")
    out = np.array([[1.0 + 0j]])
    for x, z in zip(label.x_exp, label.z_exp):
        out = np.kron(out, _single_qudit_matrix(label.D, x, z))
    return out


def format_label(label: PauliLabel) -> str:
    """Render e.g. "X2Z1@q0 * X0Z3@q2"; the identity renders as "I"."""
    parts = [
        f"X{x}Z{z}@q{i}"
        for i, (x, z) in enumerate(zip(label.x_exp, label.z_exp))
        if x or z
    ]
    return " * ".join(parts) if parts else "I"
