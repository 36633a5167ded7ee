"""Entanglement metrics of the distributed Bell-diagonal pair.

The distributed state is a mixture of one-sided Pauli rotations of the
maximally entangled state |Psi> = (1/D) sum_{j,k} w^{jk} |j,k>, with mixture
weights given by the coset table.  This module computes the Uhlmann
fidelity, the explicit density matrix at small D, and the logarithmic
negativity log2 of the trace norm of the partial transpose.

Fast negativity path
--------------------
In the Fourier basis on both qudits, the partial transpose of a
Bell-diagonal state block-diagonalizes into D sectors of fixed total
momentum; sector matrices are assembled directly from the discrete Fourier
transform of the weight table, so the spectrum costs O(D^3) instead of
diagonalizing the full D^2 x D^2 operator.  For odd D all sectors are
unitarily equivalent; for even D the even- and odd-momentum sectors differ.
The construction is purely numerical and is pinned against the dense
partial-transpose diagonalization in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DenseCapExceeded, OutOfRange

DENSE_NEGATIVITY_CAP_D = 31


@dataclass(frozen=True)
class BellDiagonalState:
    """Mixture weights p_{r,s} over one-sided X^r Z^s rotations of |Psi>."""

    D: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.D, self.D):
            raise OutOfRange(f"weights must be {self.D}x{self.D}")
        if w.min() < -1e-12 or abs(w.sum() - 1.0) > 1e-9:
            raise OutOfRange("weights are not a probability distribution")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_cosets(cls, stats) -> "BellDiagonalState":
        return cls(stats.D, stats.table)


def fidelity(state: BellDiagonalState) -> float:
    """Uhlmann fidelity with the ideal pair: sqrt of the no-error weight."""
    return float(np.sqrt(state.weights[0, 0]))


@lru_cache(maxsize=16)
def _psi_matrix(D: int) -> np.ndarray:
    j, k = np.indices((D, D))
    m = np.exp(2j * np.pi * j * k / D) / D
    m.flags.writeable = False
    return m


def maximally_entangled_vector(D: int) -> np.ndarray:
    """|Psi> = (1/D) sum_{j,k} w^{jk} |j,k> as a length-D^2 vector."""
    return _psi_matrix(D).reshape(-1).copy()


def density_matrix(state: BellDiagonalState, cap: int = DENSE_NEGATIVITY_CAP_D) -> np.ndarray:
    """Explicit D^2 x D^2 density matrix of the mixture."""
    D = state.D
    if D > cap:
        raise DenseCapExceeded(f"D={D} exceeds dense cap {cap}")
    psi = _psi_matrix(D)
    omega = np.exp(2j * np.pi / D)
    rho = np.zeros((D * D, D * D), dtype=complex)
    for r in range(D):
        for s in range(D):
            p = state.weights[r, s]
            if p == 0.0:
                continue
            op = np.zeros((D, D), dtype=complex)
            for k in range(D):
                op[(k + r) % D, k] = omega ** ((k * s) % D)
            vec = (psi @ op.T).reshape(-1)
            rho += p * np.outer(vec, vec.conj())
    return rho


def _dense_pt_spectrum(state: BellDiagonalState) -> np.ndarray:
    D = state.D
    rho = density_matrix(state)
    pt = (
        rho.reshape(D, D, D, D)
        .transpose(2, 1, 0, 3)
        .reshape(D * D, D * D)
    )
    return np.linalg.eigvalsh((pt + pt.conj().T) / 2)


def _fast_pt_sector_spectra(state: BellDiagonalState) -> list[np.ndarray]:
    """Eigenvalues of the momentum-sector matrices of the partial transpose."""
    D = state.D
    p = state.weights
    # relabel into the standard Bell basis: q[a, b] = p[(-b) mod D, a]
    rows = (-np.arange(D)[None, :]) % D
    cols = np.arange(D)[:, None]
    q = p[rows, cols]
    # qhat[u, b] = sum_a q[a, b] w^{ua}
    qhat = D * np.fft.ifft(q, axis=0)
    p_out, p_in = np.indices((D, D))
    sectors = range(1) if D % 2 else range(2)
    spectra = []
    for c in sectors:
        m = qhat[(p_out - p_in) % D, (c - p_in - p_out) % D] / D
        spectra.append(np.linalg.eigvalsh((m + m.conj().T) / 2))
    return spectra


def log_negativity(state: BellDiagonalState, force_dense: bool = False) -> float:
    """log2 of the trace norm of the partial transpose; 0 for unentangled
    (PPT) states, log2(D) for the pure maximally entangled pair."""
    D = state.D
    if force_dense:
        if D > DENSE_NEGATIVITY_CAP_D:
            raise DenseCapExceeded(f"D={D} exceeds dense cap")
        trace_norm = float(np.abs(_dense_pt_spectrum(state)).sum())
    else:
        spectra = _fast_pt_sector_spectra(state)
        copies = D if D % 2 else D // 2
        trace_norm = copies * float(sum(np.abs(s).sum() for s in spectra))
    return max(0.0, float(np.log2(trace_norm)))
