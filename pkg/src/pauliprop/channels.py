"""Generalized Pauli channels as coefficient tables over (Z/DZ)^{2n}.

A channel is a probability table f_{r,s}; applying it to a state applies
X^r Z^s with probability f_{r,s}.  Tables are stored as dense arrays with one
axis per exponent (r_1..r_n, s_1..s_n) while they fit under the configured
cap, and as sparse label->probability maps otherwise.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .ept_caps import dense_cap
from .errors import (
    DenseCapExceeded,
    IndexOutOfRange,
    ModulusMismatch,
    OracleCapExceeded,
    OutOfRange,
    ShapeMismatch,
)
from .pauli import DEFAULT_ORACLE_CAP, PauliLabel, to_matrix

_SUM_TOL = 1e-12


class Axis(Enum):
    X_ONLY = "x"
    Z_ONLY = "z"


class PauliChannelTable:
    """Coefficient table of a generalized Pauli channel on n qudits."""

    def __init__(self, D: int, n: int, dense: np.ndarray | None = None,
                 sparse: dict[tuple[int, ...], float] | None = None):
        if (dense is None) == (sparse is None):
            raise ValueError("exactly one of dense/sparse must be given")
        self.D = D
        self.n = n
        self.dense = dense
        self.sparse = sparse
        self._validate()

    def _validate(self):
        if self.dense is not None:
            if self.dense.shape != (self.D,) * (2 * self.n):
                raise ShapeMismatch(f"dense table must have shape {(self.D,)*(2*self.n)}")
            total = float(self.dense.sum())
            if self.dense.min() < -_SUM_TOL:
                raise OutOfRange("channel coefficients must be nonnegative")
        else:
            if any(len(k) != 2 * self.n for k in self.sparse):
                raise ShapeMismatch("sparse keys must have length 2n")
            total = float(sum(self.sparse.values()))
            if self.sparse and min(self.sparse.values()) < -_SUM_TOL:
                raise OutOfRange("channel coefficients must be nonnegative")
        if abs(total - 1.0) > 1e-9:
            raise OutOfRange(f"channel coefficients sum to {total}, not 1")

    @property
    def is_dense(self) -> bool:
        return self.dense is not None

    @classmethod
    def from_dense(cls, array, D: int, n: int) -> "PauliChannelTable":
        return cls(D, n, dense=np.asarray(array, dtype=float))

    @classmethod
    def from_map(cls, mapping, D: int, n: int) -> "PauliChannelTable":
        size = D ** (2 * n)
        mapping = {tuple(int(v) % D for v in k): float(p) for k, p in mapping.items() if p != 0.0}
        if size <= dense_cap() and len(mapping) * 2 >= size:
            dense = np.zeros((D,) * (2 * n))
            for k, p in mapping.items():
                dense[k] = p
            return cls(D, n, dense=dense)
        return cls(D, n, sparse=mapping)

    @classmethod
    def delta(cls, D: int, n: int) -> "PauliChannelTable":
        """The identity channel: all weight on the trivial label."""
        return cls.from_map({(0,) * (2 * n): 1.0}, D, n)

    def support_items(self):
        """Yield (label vector tuple, probability) over nonzero entries, sorted."""
        if self.is_dense:
            flat = self.dense.reshape(-1)
            for idx in np.nonzero(flat)[0]:
                yield tuple(int(v) for v in np.unravel_index(idx, self.dense.shape)), float(flat[idx])
        else:
            for k in sorted(self.sparse):
                yield k, self.sparse[k]

    def probability(self, key) -> float:
        key = tuple(int(v) % self.D for v in key)
        if self.is_dense:
            return float(self.dense[key])
        return self.sparse.get(key, 0.0)

    def x_marginal(self) -> np.ndarray:
        """Distribution of the X exponents, summed over Z exponents."""
        out = np.zeros((self.D,) * self.n)
        for key, p in self.support_items():
            out[key[: self.n]] += p
        return out

    def z_marginal(self) -> np.ndarray:
        out = np.zeros((self.D,) * self.n)
        for key, p in self.support_items():
            out[key[self.n:]] += p
        return out


def depolarizing(f: float, D: int, n: int) -> PauliChannelTable:
    """Uniform mixing channel: weight 1 - f + f/D^{2n} on the identity,
    f/D^{2n} on every other label."""
    if not 0.0 <= f <= 1.0:
        raise OutOfRange(f"depolarizing strength {f} outside [0, 1]")
    size = D ** (2 * n)
    if size > dense_cap():
        raise DenseCapExceeded(f"depolarizing table of size {size} exceeds cap")
    table = np.full((D,) * (2 * n), f / size)
    table[(0,) * (2 * n)] += 1.0 - f
    return PauliChannelTable(D, n, dense=table)


def axis_depolarizing(f: float, axis: Axis, D: int) -> PauliChannelTable:
    """Single-qudit channel mixing along only the X or only the Z direction."""
    if not 0.0 <= f <= 1.0:
        raise OutOfRange(f"depolarizing strength {f} outside [0, 1]")
    table = np.zeros((D, D))
    if axis is Axis.X_ONLY:
        table[:, 0] = f / D
    else:
        table[0, :] = f / D
    table[0, 0] += 1.0 - f
    return PauliChannelTable(D, 1, dense=table)


def tensor_product(a: PauliChannelTable, b: PauliChannelTable) -> PauliChannelTable:
    """Independent channels on disjoint registers, a's qudits first."""
    if a.D != b.D:
        raise ModulusMismatch(f"cannot combine D={a.D} with D={b.D}")
    D, n = a.D, a.n + b.n
    if a.is_dense and b.is_dense and D ** (2 * n) <= dense_cap():
        outer = np.multiply.outer(a.dense, b.dense)
        # outer axes: (r_a, s_a, r_b, s_b); reorder to (r_a, r_b, s_a, s_b)
        order = (
            list(range(a.n))
            + list(range(2 * a.n, 2 * a.n + b.n))
            + list(range(a.n, 2 * a.n))
            + list(range(2 * a.n + b.n, 2 * n))
        )
        return PauliChannelTable(D, n, dense=np.transpose(outer, order))
    combined: dict[tuple[int, ...], float] = {}
    for ka, pa in a.support_items():
        for kb, pb in b.support_items():
            key = ka[: a.n] + kb[: b.n] + ka[a.n:] + kb[b.n:]
            combined[key] = pa * pb
    return PauliChannelTable.from_map(combined, D, n)


def embed(channel: PauliChannelTable, n: int, qudits) -> PauliChannelTable:
    """Place a k-qudit channel at the given positions of an n-qudit register."""
    qudits = tuple(qudits)
    if len(qudits) != channel.n:
        raise ShapeMismatch(f"channel acts on {channel.n} qudits, got {len(qudits)} positions")
    if len(set(qudits)) != len(qudits) or any(not 0 <= q < n for q in qudits):
        raise IndexOutOfRange(f"bad qudit positions {qudits} for register of size {n}")
    mapping: dict[tuple[int, ...], float] = {}
    for key, p in channel.support_items():
        full = [0] * (2 * n)
        for i, q in enumerate(qudits):
            full[q] = key[i]
            full[n + q] = key[channel.n + i]
        mapping[tuple(full)] = p
    return PauliChannelTable.from_map(mapping, channel.D, n)


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state: random spectrum conjugated by a Haar-ish unitary."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    q = q @ np.diag(np.exp(1j * np.angle(np.diag(r))))
    probs = rng.random(dim)
    probs /= probs.sum()
    return q @ np.diag(probs) @ q.conj().T


def verify_depolarizing_discretization(
    D: int,
    n: int,
    trials: int = 10,
    tol: float = 1e-10,
    cap: int = DEFAULT_ORACLE_CAP,
    seed: int = 7,
) -> bool:
    """Check that the uniform Pauli mixture sends every state to 1/D^n.

    For each random density matrix rho, averages (X^r Z^s) rho (X^r Z^s)^dag
    over all D^{2n} labels and compares with the maximally mixed state.
    """
    dim = D ** n
    if dim > cap:
        raise OracleCapExceeded(f"dimension {dim} exceeds oracle cap {cap}")
    rng = np.random.default_rng(seed)
    mats = [
        to_matrix(PauliLabel.from_vector(np.unravel_index(i, (D,) * (2 * n)), D), cap=cap)
        for i in range(D ** (2 * n))
    ]
    target = np.eye(dim) / dim
    for _ in range(trials):
        rho = random_density_matrix(dim, rng)
        mix = sum(m @ rho @ m.conj().T for m in mats) / D ** (2 * n)
        if np.max(np.abs(mix - target)) > tol:
            return False
    return True
