"""Exact arithmetic in Z/DZ: units, inverses, polynomials, interpolation.

The modulus is carried explicitly by every call so that a single process can
work with many dimensions at once.  Values are plain ints (or integer numpy
arrays) normalized into [0, D).  By convention 0**0 == 1, which Python's
built-in ``pow`` already satisfies.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DuplicatePoint, NonPrimeModulus, NotInvertible, ShapeMismatch


def check_modulus(modulus: int) -> None:
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def is_unit(x: int, modulus: int) -> bool:
    return math.gcd(x % modulus, modulus) == 1


def inverse(x: int, modulus: int) -> int:
    """Multiplicative inverse of x mod modulus."""
    check_modulus(modulus)
    x = x % modulus
    if math.gcd(x, modulus) != 1:
        raise NotInvertible(f"{x} is not invertible mod {modulus}")
    return pow(x, -1, modulus)


def residues(values, modulus: int) -> np.ndarray:
    """Normalize a sequence of integers into a vector over Z/DZ."""
    check_modulus(modulus)
    return np.asarray(values, dtype=np.int64) % modulus


def vec_dot(a, b, modulus: int) -> int:
    a = residues(a, modulus)
    b = residues(b, modulus)
    if a.shape != b.shape:
        raise ShapeMismatch(f"vector lengths differ: {a.shape} vs {b.shape}")
    return int(np.dot(a, b) % modulus)


# -- polynomials over Z/DZ (coefficient lists, lowest degree first) -----------

def poly_eval(coeffs, x: int, modulus: int) -> int:
    y = 0
    for c in reversed(list(coeffs)):
        y = (y * x + int(c)) % modulus
    return y


def poly_add(a, b, modulus: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = (out[i] + int(c)) % modulus
    for i, c in enumerate(b):
        out[i] = (out[i] + int(c)) % modulus
    return out


def poly_mul(a, b, modulus: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + int(ai) * int(bj)) % modulus
    return out


def poly_scale(a, s: int, modulus: int) -> list[int]:
    return [(int(c) * s) % modulus for c in a]


def vandermonde_solve(points, evals, modulus: int) -> np.ndarray:
    """Coefficients of the unique polynomial of degree < d through d points.

    Solves f(points[i]) = evals[i] over the field F_D via Lagrange
    interpolation; the result is equivalent to inverting the Vandermonde
    system of the nodes.
    """
    if not is_prime(modulus):
        raise NonPrimeModulus(f"{modulus} is not prime")
    pts = [int(p) % modulus for p in points]
    ys = [int(y) % modulus for y in evals]
    if len(pts) != len(ys):
        raise ShapeMismatch(f"{len(pts)} points vs {len(ys)} values")
    if len(set(pts)) != len(pts):
        raise DuplicatePoint(f"interpolation nodes repeat: {pts}")
    d = len(pts)
    coeffs = [0] * d
    for i in range(d):
        num = [1]
        denom = 1
        for j in range(d):
            if j == i:
                continue
            num = poly_mul(num, [(-pts[j]) % modulus, 1], modulus)
            denom = (denom * (pts[i] - pts[j])) % modulus
        scale = (ys[i] * inverse(denom, modulus)) % modulus
        coeffs = poly_add(coeffs, poly_scale(num, scale, modulus), modulus)
    coeffs = (coeffs + [0] * d)[:d]
    return np.asarray(coeffs, dtype=np.int64)
