import numpy as np
import pytest

from pauliprop import modarith
from pauliprop.errors import DuplicatePoint, NonPrimeModulus, NotInvertible, ShapeMismatch


def brute_force_inverse(x, modulus):
    for y in range(modulus):
        if (x * y) % modulus == 1:
            return y
    return None


def test_inverse_identity():
    assert modarith.inverse(1, 5) == 1


def test_inverse_matches_exhaustive_search():
    assert modarith.inverse(2, 5) == brute_force_inverse(2, 5) == 3


def test_inverse_rejects_non_units():
    with pytest.raises(NotInvertible):
        modarith.inverse(2, 4)


@pytest.mark.parametrize("modulus", [2, 3, 4, 5, 6, 7, 9, 12, 13])
def test_inverse_is_an_involution(modulus):
    for x in range(1, modulus):
        if modarith.is_unit(x, modulus):
            assert modarith.inverse(modarith.inverse(x, modulus), modulus) == x
            assert modarith.inverse(x, modulus) == brute_force_inverse(x, modulus)


def test_is_prime_small_values():
    primes = [n for n in range(2, 60) if modarith.is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]


def test_vandermonde_constant_polynomial():
    for c in range(3):
        coeffs = modarith.vandermonde_solve([0, 1], [c, c], 3)
        assert list(coeffs) == [c, 0]


def test_vandermonde_matches_brute_force_over_f3():
    points, evals = [0, 1, 2], [1, 2, 0]
    solutions = [
        (a, b, c)
        for a in range(3) for b in range(3) for c in range(3)
        if all(modarith.poly_eval([a, b, c], x, 3) == y for x, y in zip(points, evals))
    ]
    assert len(solutions) == 1
    assert tuple(modarith.vandermonde_solve(points, evals, 3)) == solutions[0]


def test_vandermonde_rejects_duplicates_and_composites():
    with pytest.raises(DuplicatePoint):
        modarith.vandermonde_solve([0, 0], [1, 2], 5)
    with pytest.raises(NonPrimeModulus):
        modarith.vandermonde_solve([0, 1], [1, 2], 4)
    with pytest.raises(ShapeMismatch):
        modarith.vandermonde_solve([0, 1], [1], 5)


@pytest.mark.parametrize("modulus,degree", [(3, 2), (5, 3), (7, 4)])
def test_vandermonde_left_inverse_of_evaluation(modulus, degree):
    rng = np.random.default_rng(17 * modulus + degree)
    for _ in range(1000):
        points = rng.permutation(modulus)[:degree]
        evals = rng.integers(0, modulus, size=degree)
        coeffs = modarith.vandermonde_solve(points, evals, modulus)
        back = [modarith.poly_eval(coeffs, int(x), modulus) for x in points]
        assert back == [int(v) for v in evals]
