"""The error probability tensor and its update/contraction rules.

The tensor P = (p_{r,s}) assigns to every Pauli label (r, s) in (Z/DZ)^{2n}
the probability that the register carries the error X^r Z^s.  Four rules
drive an analysis:

  * ideal Clifford gates permute the entries along the gate's label
    automorphism,
  * Pauli channels convolve the tensor with the channel table over the
    label group,
  * measuring a qudit sums out its Z exponent and turns its X exponent into
    a classical digit-flip index on the outcome,
  * discarding qudits marginalizes their indices.

Finally, probabilities of errors equivalent modulo a stabilizer group can be
summed into one table entry per coset (`coset_reduce`).

All operations are pure: the input tensor is never mutated.  Dense storage
(one axis per exponent, ordered r_1..r_n, s_1..s_n) is used while the table
fits under the configured cap, sparse maps otherwise; sparse tables densify
automatically once their support covers more than half the space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import PauliChannelTable
from .clifford import CliffordAutomorphism, Direction
from .ept_caps import dense_cap
from .errors import (
    IndexOutOfRange,
    NonCommutingGenerators,
    OracleCapExceeded,
    ShapeMismatch,
    SpanTooLarge,
)
from .pauli import DEFAULT_ORACLE_CAP, PauliLabel, commutation_phase, to_matrix

_SUM_TOL = 1e-12
_SPAN_CAP = 1 << 20


@lru_cache(maxsize=32)
def _all_label_vectors(D: int, m: int) -> np.ndarray:
    """(m, D^m) matrix whose columns enumerate (Z/DZ)^m in lexicographic order."""
    out = np.array(np.unravel_index(np.arange(D ** m), (D,) * m), dtype=np.int64)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=256)
def _forward_permutation(D: int, n: int, matrix_bytes: bytes) -> np.ndarray:
    matrix = np.frombuffer(matrix_bytes, dtype=np.int64).reshape(2 * n, 2 * n)
    labels = _all_label_vectors(D, 2 * n)
    image = (matrix @ labels) % D
    perm = np.ravel_multi_index(tuple(image), (D,) * (2 * n))
    perm.flags.writeable = False
    return perm


class ErrorProbabilityTensor:
    """Probability table over Pauli labels of an n-qudit register."""

    def __init__(self, D: int, n: int, dense: np.ndarray | None = None,
                 sparse: dict[tuple[int, ...], float] | None = None):
        if (dense is None) == (sparse is None):
            raise ValueError("exactly one of dense/sparse must be given")
        self.D = D
        self.n = n
        self.dense = dense
        self.sparse = sparse
        self._validate()

    # -- construction ----------------------------------------------------------

    @classmethod
    def identity(cls, D: int, n: int) -> "ErrorProbabilityTensor":
        """Tensor of the identity channel: all probability on the trivial label."""
        if D < 2 or n < 1:
            raise ValueError(f"need D >= 2 and n >= 1, got D={D}, n={n}")
        return cls.from_map({(0,) * (2 * n): 1.0}, D, n)

    @classmethod
    def from_dense(cls, array, D: int, n: int) -> "ErrorProbabilityTensor":
        return cls(D, n, dense=np.asarray(array, dtype=float))

    @classmethod
    def from_map(cls, mapping, D: int, n: int) -> "ErrorProbabilityTensor":
        size = D ** (2 * n)
        mapping = {tuple(int(v) % D for v in k): float(p)
                   for k, p in mapping.items() if p != 0.0}
        if size <= dense_cap() and len(mapping) * 2 >= size:
            dense = np.zeros((D,) * (2 * n))
            for k, p in mapping.items():
                dense[k] = p
            return cls(D, n, dense=dense)
        return cls(D, n, sparse=mapping)

    def _validate(self):
        shape = (self.D,) * (2 * self.n)
        if self.dense is not None:
            if self.dense.shape != shape:
                raise ShapeMismatch(f"dense tensor must have shape {shape}")
            total = float(self.dense.sum())
        else:
            if any(len(k) != 2 * self.n for k in self.sparse):
                raise ShapeMismatch("sparse keys must have length 2n")
            total = float(sum(self.sparse.values()))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, not 1")

    # -- basic access ------------------------------------------------------------

    @property
    def is_dense(self) -> bool:
        return self.dense is not None

    @property
    def size(self) -> int:
        return self.D ** (2 * self.n)

    def total(self) -> float:
        if self.is_dense:
            return float(self.dense.sum())
        return float(sum(self.sparse.values()))

    def probability(self, label) -> float:
        if isinstance(label, PauliLabel):
            key = tuple(label.vector())
        else:
            key = tuple(int(v) % self.D for v in label)
        if self.is_dense:
            return float(self.dense[key])
        return self.sparse.get(key, 0.0)

    def support_items(self):
        """Yield (label vector tuple, probability) over nonzero entries, sorted."""
        if self.is_dense:
            flat = self.dense.reshape(-1)
            for idx in np.nonzero(flat)[0]:
                yield tuple(int(v) for v in np.unravel_index(idx, self.dense.shape)), float(flat[idx])
        else:
            for k in sorted(self.sparse):
                yield k, self.sparse[k]

    def to_dense_array(self) -> np.ndarray:
        if self.is_dense:
            return self.dense.copy()
        out = np.zeros((self.D,) * (2 * self.n))
        for k, p in self.sparse.items():
            out[k] = p
        return out

    def allclose(self, other: "ErrorProbabilityTensor", tol: float = 1e-12) -> bool:
        if self.D != other.D or self.n != other.n:
            return False
        return np.max(np.abs(self.to_dense_array() - other.to_dense_array())) <= tol

    # -- update rules ------------------------------------------------------------

    def apply_clifford(self, auto: CliffordAutomorphism) -> "ErrorProbabilityTensor":
        """Permute entries along the gate automorphism.

        For a FORWARD map the new tensor satisfies p'_{auto(L)} = p_L: the
        probability mass travels with the propagating error.  For an INVERSE
        map the matrix is read the other way around.
        """
        if auto.D != self.D or auto.n != self.n:
            raise ShapeMismatch("automorphism does not match tensor shape")
        matrix = auto.matrix if auto.direction is Direction.FORWARD else auto.inv_matrix
        if self.is_dense:
            perm = _forward_permutation(self.D, self.n, matrix.tobytes())
            out = np.empty_like(self.dense)
            out.reshape(-1)[perm] = self.dense.reshape(-1)
            return ErrorProbabilityTensor(self.D, self.n, dense=out)
        moved = {}
        for key, p in self.sparse.items():
            image = tuple((matrix @ np.asarray(key, dtype=np.int64)) % self.D)
            moved[image] = p
        return ErrorProbabilityTensor.from_map(moved, self.D, self.n)

    def apply_channel(self, channel: PauliChannelTable) -> "ErrorProbabilityTensor":
        """Convolve with a channel table over the label group (Z/DZ)^{2n}."""
        if channel.D != self.D or channel.n != self.n:
            raise ShapeMismatch("channel does not match tensor shape")
        if self.is_dense:
            out = np.zeros_like(self.dense)
            for key, p in channel.support_items():
                out += p * np.roll(self.dense, shift=key, axis=range(2 * self.n))
            return ErrorProbabilityTensor(self.D, self.n, dense=out)
        if channel.is_dense and channel.dense.size <= dense_cap():
            out = np.zeros_like(channel.dense)
            for key, p in self.support_items():
                out += p * np.roll(channel.dense, shift=key, axis=range(2 * self.n))
            return ErrorProbabilityTensor(self.D, self.n, dense=out)
        combined: dict[tuple[int, ...], float] = {}
        for key_p, p in self.support_items():
            kp = np.asarray(key_p, dtype=np.int64)
            for key_f, f in channel.support_items():
                key = tuple((kp + np.asarray(key_f, dtype=np.int64)) % self.D)
                combined[key] = combined.get(key, 0.0) + p * f
        return ErrorProbabilityTensor.from_map(combined, self.D, self.n)

    def measure(self, qudit: int) -> "MeasuredTensor":
        """Computational-basis measurement of one qudit.

        Z exponents of the measured qudit become irrelevant and are summed
        out; its X exponent survives as a classical flip index: outcome c is
        reported as c + flip.
        """
        if not 0 <= qudit < self.n:
            raise IndexOutOfRange(f"qudit {qudit} outside register of size {self.n}")
        n_rest = self.n - 1
        if self.is_dense:
            summed = self.dense.sum(axis=self.n + qudit)
            joint = np.moveaxis(summed, qudit, -1)
            return MeasuredTensor(self.D, n_rest, dense=np.ascontiguousarray(joint))
        joint_map: dict[tuple[int, ...], float] = {}
        for key, p in self.sparse.items():
            r = key[: self.n]
            s = key[self.n:]
            rest = (
                r[:qudit] + r[qudit + 1:]
                + s[:qudit] + s[qudit + 1:]
                + (r[qudit],)
            )
            joint_map[rest] = joint_map.get(rest, 0.0) + p
        return MeasuredTensor(self.D, n_rest, sparse=joint_map)

    def marginalize(self, drop) -> "ErrorProbabilityTensor":
        """Sum out both exponents of the listed qudits."""
        drop = sorted(set(int(q) for q in drop))
        for q in drop:
            if not 0 <= q < self.n:
                raise IndexOutOfRange(f"qudit {q} outside register of size {self.n}")
        if not drop:
            return self
        keep = [q for q in range(self.n) if q not in drop]
        n_new = len(keep)
        if self.is_dense:
            axes = tuple(q for q in drop) + tuple(self.n + q for q in drop)
            return ErrorProbabilityTensor(self.D, n_new, dense=self.dense.sum(axis=axes))
        out: dict[tuple[int, ...], float] = {}
        for key, p in self.sparse.items():
            new = tuple(key[q] for q in keep) + tuple(key[self.n + q] for q in keep)
            out[new] = out.get(new, 0.0) + p
        return ErrorProbabilityTensor.from_map(out, self.D, n_new)

    def discard_keep_first(self, n_keep: int) -> "ErrorProbabilityTensor":
        """Marginal over qudits n_keep..n-1, keeping the leading block."""
        if not 0 <= n_keep <= self.n:
            raise IndexOutOfRange(f"cannot keep {n_keep} of {self.n} qudits")
        if n_keep == self.n:
            return self
        return self.marginalize(range(n_keep, self.n))

    def tensor(self, other: "ErrorProbabilityTensor") -> "ErrorProbabilityTensor":
        """Independent registers side by side, self's qudits first."""
        if other.D != self.D:
            raise ShapeMismatch(f"cannot combine D={self.D} with D={other.D}")
        D, na, nb = self.D, self.n, other.n
        n = na + nb
        if self.is_dense and other.is_dense and D ** (2 * n) <= dense_cap():
            outer = np.multiply.outer(self.dense, other.dense)
            order = (
                list(range(na))
                + list(range(2 * na, 2 * na + nb))
                + list(range(na, 2 * na))
                + list(range(2 * na + nb, 2 * n))
            )
            return ErrorProbabilityTensor(D, n, dense=np.ascontiguousarray(np.transpose(outer, order)))
        combined: dict[tuple[int, ...], float] = {}
        for ka, pa in self.support_items():
            for kb, pb in other.support_items():
                key = ka[:na] + kb[:nb] + ka[na:] + kb[nb:]
                combined[key] = pa * pb
        return ErrorProbabilityTensor.from_map(combined, D, n)

    def extend(self, extra: int) -> "ErrorProbabilityTensor":
        """Append `extra` fresh error-free qudits."""
        return self.tensor(ErrorProbabilityTensor.identity(self.D, extra))

    # -- dense oracle ------------------------------------------------------------

    def channel_action(self, rho: np.ndarray, cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
        """Apply the channel sum_L p_L M_L rho M_L^dag by dense summation."""
        dim = self.D ** self.n
        if dim > cap:
            raise OracleCapExceeded(f"dimension {dim} exceeds oracle cap {cap}")
        if rho.shape != (dim, dim):
            raise ShapeMismatch(f"state must be {dim}x{dim}")
        out = np.zeros_like(rho, dtype=complex)
        for key, p in self.support_items():
            m = to_matrix(PauliLabel.from_vector(key, self.D), cap=cap)
            out += p * (m @ rho @ m.conj().T)
        return out


identity_tensor = ErrorProbabilityTensor.identity


@dataclass
class MeasuredTensor:
    """Joint table after a measurement: remaining labels plus a flip index.

    The last axis (dense) or last key slot (sparse) is the classical flip:
    the probability that the reported outcome is shifted by that amount,
    jointly with the residual error on the unmeasured qudits.
    """

    D: int
    n: int
    dense: np.ndarray | None = None
    sparse: dict[tuple[int, ...], float] | None = None

    def tensor(self) -> ErrorProbabilityTensor:
        """Residual tensor on the unmeasured qudits, flip marginalized."""
        if self.dense is not None:
            return ErrorProbabilityTensor(self.D, self.n, dense=self.dense.sum(axis=-1))
        out: dict[tuple[int, ...], float] = {}
        for key, p in self.sparse.items():
            out[key[:-1]] = out.get(key[:-1], 0.0) + p
        return ErrorProbabilityTensor.from_map(out, self.D, self.n)

    def flip_marginal(self) -> np.ndarray:
        """Distribution of the outcome flip alone."""
        if self.dense is not None:
            return self.dense.reshape(-1, self.D).sum(axis=0)
        out = np.zeros(self.D)
        for key, p in self.sparse.items():
            out[key[-1]] += p
        return out


# -- stabilizer coset reduction --------------------------------------------------

@dataclass(frozen=True)
class StabilizerBasis:
    """Commuting Pauli labels spanning a stabilizer exponent submodule."""

    generators: tuple[PauliLabel, ...]
    D: int
    n: int

    def __post_init__(self):
        for g in self.generators:
            if g.D != self.D or g.n != self.n:
                raise ShapeMismatch("generator does not match basis shape")
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                if commutation_phase(a, b) != 0:
                    raise NonCommutingGenerators(f"{a} and {b} do not commute")

    def span(self) -> np.ndarray:
        """All distinct Z/DZ-combinations of the generators, as label vectors."""
        g = len(self.generators)
        if self.D ** g > _SPAN_CAP:
            raise SpanTooLarge(f"span enumeration {self.D}^{g} exceeds cap {_SPAN_CAP}")
        if g == 0:
            return np.zeros((1, 2 * self.n), dtype=np.int64)
        gen_matrix = np.stack([lab.vector() for lab in self.generators])
        coeffs = _all_label_vectors(self.D, g).T
        elements = (coeffs @ gen_matrix) % self.D
        return np.unique(elements, axis=0)


def bell_stabilizer(D: int) -> StabilizerBasis:
    """Stabilizer of the two-qudit maximally entangled state: X(x)Z and Z(x)X."""
    return StabilizerBasis(
        (PauliLabel((1, 0), (0, 1), D), PauliLabel((0, 1), (1, 0), D)), D, 2
    )


class CosetReduction:
    """Probabilities summed over cosets of a stabilizer span.

    Cosets are indexed by their lexicographically smallest member.
    """

    def __init__(self, tensor: ErrorProbabilityTensor, basis: StabilizerBasis):
        if tensor.D != basis.D or tensor.n != basis.n:
            raise ShapeMismatch("stabilizer basis does not match tensor shape")
        self.D = tensor.D
        self.n = tensor.n
        self.basis = basis
        self._span = basis.span()
        self.table: dict[tuple[int, ...], float] = {}
        if tensor.is_dense:
            shape = (self.D,) * (2 * self.n)
            labels = _all_label_vectors(self.D, 2 * self.n)
            canon = np.arange(tensor.size)
            for w in self._span:
                cand = np.ravel_multi_index(tuple((labels + w[:, None]) % self.D), shape)
                np.minimum(canon, cand, out=canon)
            sums = np.bincount(canon, weights=tensor.dense.reshape(-1), minlength=tensor.size)
            for rep in np.unique(canon):
                self.table[tuple(int(v) for v in np.unravel_index(rep, shape))] = float(sums[rep])
        else:
            for key, p in tensor.sparse.items():
                rep = self.canonical(key)
                self.table[rep] = self.table.get(rep, 0.0) + p

    def canonical(self, label) -> tuple[int, ...]:
        """Lexicographically smallest member of the label's coset."""
        vec = np.asarray(label, dtype=np.int64) % self.D
        cands = (self._span + vec) % self.D
        flat = np.ravel_multi_index(tuple(cands.T), (self.D,) * (2 * self.n))
        best = cands[int(np.argmin(flat))]
        return tuple(int(v) for v in best)

    def probability(self, label) -> float:
        return self.table.get(self.canonical(label), 0.0)

    def items(self):
        for rep in sorted(self.table):
            yield rep, self.table[rep]

    def total(self) -> float:
        return float(sum(self.table.values()))

    def bell_table(self) -> np.ndarray:
        """For the two-qudit Bell stabilizer: D x D table over (r, s).

        Entry (r, s) is the probability of the coset of an X^r Z^s error on
        the second qudit.
        """
        expected = bell_stabilizer(self.D).span()
        if self.n != 2 or not np.array_equal(self._span, expected):
            raise ShapeMismatch("reduction was not taken over the Bell stabilizer")
        out = np.zeros((self.D, self.D))
        for r in range(self.D):
            for s in range(self.D):
                out[r, s] = self.probability((0, r, 0, s))
        return out


def coset_reduce(tensor: ErrorProbabilityTensor, basis: StabilizerBasis) -> CosetReduction:
    """Sum probabilities of stabilizer-equivalent errors into one entry per coset."""
    return CosetReduction(tensor, basis)
