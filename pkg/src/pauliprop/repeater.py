"""Analytic error statistics of one-way qudit repeater lines.

The protocol: Alice entangles a stored qudit A with a flying qudit; each of
N stations (Bob acts as station N) entangles the incoming qudit with a fresh
one via a controlled-Z, measures the incoming qudit in the X basis and
forwards the outcome; Bob finally applies a Pauli frame correction computed
from all outcomes.  Noise enters as depolarizing channels: per transmission
(f_T), per qudit after each CZ (f_G), before each measurement (f_M), and N
storage channels on Alice's qudit (f_S).

This module derives the distributed pair's error statistics, reduced over
the Bell stabilizer to a D x D table indexed by the residual X^r Z^s error
on Bob's side:

  * closed-form pipeline for bare qudits (`unencoded_final_statistics`),
  * the same pipeline on the logical level for [[n, 1, d]]_D block codes
    with transversal CZ and independent X/Z correction
    (`encoded_final_statistics`), optionally with an abort-on-too-many-
    losses strategy,
  * loss bookkeeping: the probability of not aborting is an exact
    polynomial in the absorption rate whose coefficients come from an
    exhaustive count of accepted loss configurations
    (`count_accepted_configurations`, `distribution_probability`),
  * an independent cross-check that walks the full circuit gate by gate
    with the error probability tensor (`stepwise_oracle_statistics`).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, exp

import numpy as np

from . import channels, clifford, ept
from .errors import (
    BruteForceCapExceeded,
    NoEncoding,
    OddN,
    OutOfRange,
    ThresholdExceedsDistance,
)
from .qpcode import QuantumPolynomialCode

FLAT_ENUMERATION_CAP = 2 ** 28
_DP_STATE_CAP = 2 ** 16


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name}={value} outside [0, 1]")


@dataclass(frozen=True)
class Encoding:
    """Block-code layer of a scenario: [[n, 1, d]]_D parameters plus the
    loss model (absorption probability and optional abort threshold)."""

    n: int
    d: int
    k_max: int | None = None
    f_abs: float = 0.0

    def __post_init__(self):
        if self.d < 1 or self.n < 2 * self.d - 1:
            raise OutOfRange(f"no [[{self.n},1,{self.d}]] code: need n >= 2d-1")
        if self.k_max is not None:
            if self.k_max < 0:
                raise OutOfRange(f"k_max={self.k_max} negative")
            if self.k_max >= self.d:
                raise ThresholdExceedsDistance(
                    f"k_max={self.k_max} must stay below d={self.d}"
                )
        _check_probability("f_abs", self.f_abs)

    @classmethod
    def from_code(cls, code: QuantumPolynomialCode, k_max: int | None = None,
                  f_abs: float = 0.0) -> "Encoding":
        return cls(code.n, code.d, k_max, f_abs)


def absorption_probability(f_C: float, gamma: float) -> float:
    """Photon loss per hop: coupling loss plus fiber damping, 1-(1-f_C)e^-gamma."""
    _check_probability("f_C", f_C)
    if gamma < 0:
        raise OutOfRange(f"gamma={gamma} negative")
    return 1.0 - (1.0 - f_C) * exp(-gamma)


@dataclass(frozen=True)
class RepeaterScenario:
    """Dimension, station count, per-instance error rates, optional encoding."""

    D: int
    N: int
    f_T: float = 0.0
    f_G: float = 0.0
    f_M: float = 0.0
    f_S: float = 0.0
    encoding: Encoding | None = None

    def __post_init__(self):
        if self.D < 2:
            raise OutOfRange(f"D={self.D} must be >= 2")
        if self.N < 0 or self.N % 2:
            raise OddN(f"station count N={self.N} must be even and >= 0")
        for name in ("f_T", "f_G", "f_M", "f_S"):
            _check_probability(name, getattr(self, name))

    def require_encoding(self) -> Encoding:
        if self.encoding is None:
            raise NoEncoding("scenario has no encoding")
        return self.encoding


@dataclass(frozen=True)
class CosetStatistics:
    """D x D table over (r, s): probability of an X^r Z^s error class on
    the distributed pair (referred to Bob's qudit)."""

    D: int
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.shape != (self.D, self.D):
            raise OutOfRange(f"table must be {self.D}x{self.D}")
        if table.min() < -1e-12 or abs(table.sum() - 1.0) > 1e-9:
            raise OutOfRange("coset table is not a probability distribution")
        object.__setattr__(self, "table", table)

    def probability(self, r: int, s: int) -> float:
        return float(self.table[r % self.D, s % self.D])

    @property
    def p00(self) -> float:
        return float(self.table[0, 0])


# -- small distribution helpers -------------------------------------------------

def axis_distribution(b: float, D: int) -> np.ndarray:
    """Length-D distribution ((1+(D-1)b)/D, (1-b)/D, ...): the fixed-point
    family of uniform mixing, parameterized by the bias b."""
    out = np.full(D, (1.0 - b) / D)
    out[0] += b
    return out


def cyclic_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Convolution of two distributions over Z/DZ."""
    D = len(a)
    idx = (np.arange(D)[:, None] - np.arange(D)[None, :]) % D
    return a[idx] @ b


def signed_distribution(dist: np.ndarray, sign: int) -> np.ndarray:
    """Distribution of sign * X for X ~ dist, sign in {+1, -1}."""
    D = len(dist)
    return dist[(sign * np.arange(D)) % D]


# -- per-station measurement statistics ------------------------------------------

@dataclass(frozen=True)
class StationStats:
    """Per-digit outcome-error distribution of one station's measurement."""

    D: int
    p_zero: float
    p_err: float

    @property
    def bias(self) -> float:
        return self.p_zero - self.p_err

    def distribution(self) -> np.ndarray:
        out = np.full(self.D, self.p_err)
        out[0] = self.p_zero
        return out


def station_measurement_stats(scenario: RepeaterScenario, first_station: bool = False) -> StationStats:
    """Outcome-error statistics of a single measured digit.

    Intermediate stations (and Bob) see two transmissions, three gates and
    one measurement worth of relevant noise; the first station sees one
    transmission and two gates because Alice's qudit is fresh at her CZ.
    """
    D = scenario.D
    gT, gG, gM = 1.0 - scenario.f_T, 1.0 - scenario.f_G, 1.0 - scenario.f_M
    if first_station:
        b = gT * gG ** 2 * gM
    else:
        b = gT ** 2 * gG ** 3 * gM
    return StationStats(D, (1.0 + (D - 1) * b) / D, (1.0 - b) / D)


def _station_signs(N: int) -> tuple[dict[int, int], dict[int, int]]:
    """Per-station sign of its outcome error in the frame correction.

    Even stations feed the X part of the correction with sign (-1)^{j/2};
    odd stations feed the Z part, where the applied Z power is negated, so
    the effective sign is -(-1)^{(N+1-j)/2}.
    """
    even = {j: (-1) ** (j // 2) for j in range(2, N + 1, 2)}
    odd = {j: -((-1) ** ((N + 1 - j) // 2)) for j in range(1, N, 2)}
    return even, odd


def frame_error_channels(
    scenario: RepeaterScenario,
    first_stats: StationStats,
    station_stats: StationStats,
) -> tuple[np.ndarray, np.ndarray]:
    """Distributions of the X- and Z-frame correction errors.

    Convolves the signed per-station outcome-error distributions of the even
    stations (into the X part) and the odd stations (into the Z part).  The
    caller chooses the statistics level by passing physical or logical
    per-station stats.
    """
    if scenario.N % 2:
        raise OddN(f"N={scenario.N} must be even")
    D = scenario.D
    even_signs, odd_signs = _station_signs(scenario.N)
    f_even = axis_distribution(1.0, D)
    f_odd = axis_distribution(1.0, D)
    for sign in even_signs.values():
        f_even = cyclic_convolve(f_even, signed_distribution(station_stats.distribution(), sign))
    for station, sign in odd_signs.items():
        stats = first_stats if station == 1 else station_stats
        f_odd = cyclic_convolve(f_odd, signed_distribution(stats.distribution(), sign))
    return f_even, f_odd


def frame_channel_closed_form(scenario: RepeaterScenario) -> tuple[np.ndarray, np.ndarray]:
    """Closed forms of the unencoded frame-error distributions.

    The even chain collects N transmissions, 3N/2 gates and N/2 measurements
    worth of bias; the odd chain one transmission and one gate fewer.
    """
    if scenario.N % 2:
        raise OddN(f"N={scenario.N} must be even")
    D, N = scenario.D, scenario.N
    gT, gG, gM = 1.0 - scenario.f_T, 1.0 - scenario.f_G, 1.0 - scenario.f_M
    b_even = gG ** (3 * N // 2) * gT ** N * gM ** (N // 2)
    b_odd = gG ** (3 * N // 2 - 1) * gT ** (N - 1) * gM ** (N // 2) if N else 1.0
    return axis_distribution(b_even, D), axis_distribution(b_odd, D)


# -- frame recovery -------------------------------------------------------------

def pauli_frame_targets(outcomes, D: int) -> tuple[int, int]:
    """Alternating-sign digit sums (c_A, c_B) of the station outcomes; Bob's
    recovery gate is X^{c_A} Z^{-c_B}."""
    outcomes = [int(c) for c in outcomes]
    N = len(outcomes)
    if N % 2 or N == 0:
        raise OddN(f"need an even, positive number of outcomes, got {N}")
    c_a = sum((-1) ** i * outcomes[2 * i - 1] for i in range(1, N // 2 + 1))
    c_b = sum((-1) ** i * outcomes[N - 2 * i] for i in range(1, N // 2 + 1))
    return c_a % D, c_b % D


# -- unencoded pipeline ----------------------------------------------------------

def local_mixing_strength(scenario: RepeaterScenario) -> float:
    """Combined strength of the noise acting locally on the distributed pair:
    one gate on each of Alice's and Bob's qudits plus N storage channels."""
    return 1.0 - (1.0 - scenario.f_G) ** 2 * (1.0 - scenario.f_S) ** scenario.N


def _quotient_uniform_table(f: float, D: int) -> np.ndarray:
    """Coset-level table of uniform mixing with strength f on the pair."""
    table = np.full((D, D), f / D ** 2)
    table[0, 0] += 1.0 - f
    return table


def _convolve_2d(kernel: np.ndarray, base: np.ndarray) -> np.ndarray:
    """Cyclic convolution of two D x D tables over (Z/DZ)^2."""
    D = kernel.shape[0]
    out = np.zeros_like(kernel)
    for a in range(D):
        for b in range(D):
            if base[a, b]:
                out += base[a, b] * np.roll(np.roll(kernel, a, axis=0), b, axis=1)
    return out


def unencoded_final_statistics(scenario: RepeaterScenario) -> CosetStatistics:
    """Error statistics of the distributed pair for bare (unencoded) qudits.

    Assembles the coset table from three independent pieces: the X-side
    frame errors, the Z-side frame errors convolved with the one-gate/one-
    transmission propagation channel onto Bob's qudit, and the local mixing
    of the pair itself.
    """
    D = scenario.D
    first = station_measurement_stats(scenario, first_station=True)
    inter = station_measurement_stats(scenario, first_station=False)
    f_even, f_odd = frame_error_channels(scenario, first, inter)
    prop = axis_distribution((1.0 - scenario.f_G) * (1.0 - scenario.f_T), D)
    f_x = f_even
    f_z = cyclic_convolve(prop, f_odd)
    base = np.outer(f_x, f_z)
    local = _quotient_uniform_table(local_mixing_strength(scenario), D)
    return CosetStatistics(D, _convolve_2d(local, base))


# -- encoded pipeline ------------------------------------------------------------

def correction_success(p_zero: float, p_err: float, n: int, d: int, D: int) -> float:
    """Probability that at most floor((d-1)/2) of n digits are wrong, each
    digit independently carrying any of the D-1 errors with weight p_err."""
    t = (d - 1) // 2
    return float(sum(
        (D - 1) ** j * comb(n, j) * p_zero ** (n - j) * p_err ** j
        for j in range(t + 1)
    ))


def encoded_station_success(scenario: RepeaterScenario, first_station: bool = False) -> tuple[float, float]:
    """Per-station logical outcome statistics (p_succ, p_guess).

    Correct iff the digit-error weight is correctable; otherwise the logical
    outcome is a uniform random guess, right with probability 1/D.
    """
    enc = scenario.require_encoding()
    stats = station_measurement_stats(scenario, first_station)
    p_cor = correction_success(stats.p_zero, stats.p_err, enc.n, enc.d, scenario.D)
    p_guess = (1.0 - p_cor) / scenario.D
    return p_cor + p_guess, p_guess


@dataclass(frozen=True)
class AbortionStationProbabilities:
    """Loss counts at one station: P(k losses) for the first station, for a
    later station, and the correction success with k outcomes discarded."""

    p_unknown_first: float
    p_unknown: float
    p_cor_given_k: float


def abortion_station_probabilities(
    scenario: RepeaterScenario, k: int, first_station: bool = False
) -> AbortionStationProbabilities:
    """Probabilities of exactly k '?'-marked outcomes and the matching
    reduced-code correction success.

    A later station marks an outcome when its own photon or the previous
    hop's photon was absorbed, hence the squared survival factor.  With k
    outcomes discarded the remaining digits form an [n-k, 1, d-k] code.
    """
    enc = scenario.require_encoding()
    if k >= enc.d:
        raise ThresholdExceedsDistance(f"k={k} reaches the code distance d={enc.d}")
    if k < 0 or (enc.k_max is not None and k > enc.k_max):
        raise OutOfRange(f"k={k} outside 0..k_max")
    f = enc.f_abs
    p_first = comb(enc.n, k) * f ** k * (1.0 - f) ** (enc.n - k)
    survive2 = (1.0 - f) ** 2
    p_later = comb(enc.n, k) * (1.0 - survive2) ** k * survive2 ** (enc.n - k)
    stats = station_measurement_stats(scenario, first_station)
    p_cor = correction_success(stats.p_zero, stats.p_err, enc.n - k, enc.d - k, scenario.D)
    return AbortionStationProbabilities(p_first, p_later, p_cor)


def conditional_station_correction(scenario: RepeaterScenario, first_station: bool = False) -> float:
    """Correction success of a station conditioned on not aborting: the
    P(k)-weighted mixture of the reduced-code successes for k <= k_max."""
    enc = scenario.require_encoding()
    if enc.k_max is None:
        raise NoEncoding("scenario has no abortion threshold")
    weights = []
    cors = []
    for k in range(enc.k_max + 1):
        probs = abortion_station_probabilities(scenario, k, first_station)
        weights.append(probs.p_unknown_first if first_station else probs.p_unknown)
        cors.append(probs.p_cor_given_k)
    total = sum(weights)
    return float(sum(w * c for w, c in zip(weights, cors)) / total)


def _station_correction(scenario: RepeaterScenario, first_station: bool) -> float:
    enc = scenario.require_encoding()
    if enc.k_max is not None:
        return conditional_station_correction(scenario, first_station)
    stats = station_measurement_stats(scenario, first_station)
    return correction_success(stats.p_zero, stats.p_err, enc.n, enc.d, scenario.D)


def encoded_final_statistics(scenario: RepeaterScenario) -> CosetStatistics:
    """Error statistics of the distributed logical pair.

    Each station's measurement is lifted to a logical digit with the
    correct/guess strategy; the frame-error convolution then runs on the
    logical level.  Bob's own block is cleaned by a perfect stabilizer
    readout after local noise of two gates, N storage channels, and one
    transmission on the Z side, with X and Z errors corrected independently.
    """
    enc = scenario.require_encoding()
    D = scenario.D
    p_cor_first = _station_correction(scenario, first_station=True)
    p_cor_inter = _station_correction(scenario, first_station=False)
    logical_first = StationStats(
        D, (1.0 + (D - 1) * p_cor_first) / D, (1.0 - p_cor_first) / D
    )
    logical_inter = StationStats(
        D, (1.0 + (D - 1) * p_cor_inter) / D, (1.0 - p_cor_inter) / D
    )
    f_even, f_odd = frame_error_channels(scenario, logical_first, logical_inter)

    b_x = (1.0 - scenario.f_G) ** 2 * (1.0 - scenario.f_S) ** scenario.N
    b_z = b_x * (1.0 - scenario.f_T)
    base_parts = []
    for b in (b_x, b_z):
        digit = axis_distribution(b, D)
        p_cor = correction_success(digit[0], digit[1], enc.n, enc.d, D)
        base_parts.append(axis_distribution(p_cor, D))
    base = np.outer(base_parts[0], base_parts[1])

    # separable frame convolution: X part along rows, Z part along columns
    idx = (np.arange(D)[:, None] - np.arange(D)[None, :]) % D
    table = f_even[idx] @ base @ f_odd[idx].T
    return CosetStatistics(D, table)


def final_statistics(scenario: RepeaterScenario) -> CosetStatistics:
    if scenario.encoding is None:
        return unencoded_final_statistics(scenario)
    return encoded_final_statistics(scenario)


# -- loss configuration counting --------------------------------------------------

def _popcounts(size: int) -> np.ndarray:
    out = np.zeros(size, dtype=np.int64)
    for i in range(1, size):
        out[i] = out[i >> 1] + (i & 1)
    return out


def _alpha_two_rows(n: int, k_max: int) -> np.ndarray:
    """Exhaustive count over all 2^{2n} two-row patterns, vectorized over
    the second row."""
    size = 1 << n
    pc = _popcounts(size)
    rows = np.arange(size)
    zeros = n - pc
    counts = np.zeros(2 * n + 1, dtype=np.int64)
    for a1 in np.nonzero(zeros <= k_max)[0]:
        unknown2 = n - pc[a1 & rows]
        ok = unknown2 <= k_max
        m = zeros[a1] + zeros[ok]
        np.add.at(counts, m, 1)
    return counts


def _alpha_flat(N: int, n: int, k_max: int) -> np.ndarray:
    """Reference enumeration over all 2^{N n} patterns (small sizes only)."""
    mask = (1 << n) - 1
    counts = np.zeros(N * n + 1, dtype=np.int64)
    for x in range(1 << (N * n)):
        prev = mask
        m = 0
        ok = True
        for i in range(N):
            row = (x >> (i * n)) & mask
            if n - bin(row & prev).count("1") > k_max:
                ok = False
                break
            m += n - bin(row).count("1")
            prev = row
        if ok:
            counts[m] += 1
    return counts


def _alpha_dp(N: int, n: int, k_max: int) -> np.ndarray:
    """Row-by-row dynamic programming over the previous-row pattern."""
    size = 1 << n
    pc = _popcounts(size)
    zeros = n - pc
    rows = np.arange(size)
    width = N * n + 1
    dp = np.zeros((size, width), dtype=np.int64)
    for a in np.nonzero(zeros <= k_max)[0]:
        dp[a, zeros[a]] = 1
    for _ in range(N - 1):
        new = np.zeros_like(dp)
        for a in range(size):
            ok = (n - pc[a & rows]) <= k_max
            if not ok.any():
                continue
            acc = dp[ok].sum(axis=0)
            z = zeros[a]
            if z:
                new[a, z:] = acc[:width - z]
            else:
                new[a] = acc
        dp = new
    return dp.sum(axis=0)


def count_accepted_configurations(
    N: int, n: int, k_max: int, flat_cap: int = FLAT_ENUMERATION_CAP
) -> np.ndarray:
    """Counts alpha(N, n, k_max; m) of loss patterns with exactly m absorbed
    photons for which no station marks more than k_max outcomes.

    A pattern is an N x n binary matrix (0 = absorbed); station i marks
    outcome j when a_{i,j} a_{i-1,j} = 0, with a virtual all-ones row 0.
    """
    if N < 1 or n < 1 or k_max < 0:
        raise OutOfRange(f"bad arguments N={N}, n={n}, k_max={k_max}")
    if k_max >= n:
        k_max = n
    if N == 2 and (1 << (2 * n)) <= flat_cap:
        return _alpha_two_rows(n, k_max)
    if N * n <= 22:
        return _alpha_flat(N, n, k_max)
    if (1 << n) <= _DP_STATE_CAP and N * n <= 62:
        return _alpha_dp(N, n, k_max)
    raise BruteForceCapExceeded(
        f"no feasible enumeration for N={N}, n={n} under cap {flat_cap}"
    )


def distribution_probability(scenario: RepeaterScenario) -> float:
    """Probability of never aborting: sum_m alpha_m f^m (1-f)^{Nn-m}."""
    enc = scenario.require_encoding()
    if enc.k_max is None:
        return 1.0
    alpha = count_accepted_configurations(scenario.N, enc.n, enc.k_max)
    f = enc.f_abs
    total = scenario.N * enc.n
    return float(sum(
        int(a) * f ** m * (1.0 - f) ** (total - m)
        for m, a in enumerate(alpha) if a
    ))


# -- step-by-step tensor oracle ----------------------------------------------------

def stepwise_oracle_statistics(scenario: RepeaterScenario) -> CosetStatistics:
    """Walk the full unencoded repeater circuit with the error probability
    tensor and reduce over the Bell stabilizer.

    The window holds Alice's qudit, two virtual classical accumulator
    qudits that collect the signed outcome flips feeding the frame
    correction, and the live chain qudit(s).  Each station: transmit,
    entangle with a fresh qudit, add gate and measurement noise, rotate to
    the computational basis, copy the flip into the accumulator with an
    ideal controlled-X, and trace the consumed qudit out.  At the end the
    accumulators are folded onto Bob's qudit exactly as the frame gate's
    mis-correction would act.

    Noise model: gate and transmission noise on the chain qudits mixes the
    X and Z directions independently (X-axis composed with Z-axis mixing of
    equal strength); the closed form multiplies per-digit statistics of
    neighboring stations, which is exact precisely under that independence.
    A single noise instance feeds two outcomes (its Z part this station's,
    its X part the next one's), so plain uniform mixing, whose X and Z
    parts are correlated, would couple neighboring digits.  The end qudits
    feed no measurements and carry plain uniform mixing.

    Agreement with `unencoded_final_statistics` holds to float precision and
    is enforced in the test suite.
    """
    if scenario.encoding is not None:
        raise NoEncoding("stepwise oracle covers unencoded scenarios only")
    if scenario.N < 2 or scenario.N % 2:
        raise OddN(f"N={scenario.N} must be even and >= 2")
    D, N = scenario.D, scenario.N
    even_signs, odd_signs = _station_signs(N)

    def dep_on(tensor, f, qudit):
        if f == 0.0:
            return tensor
        one = channels.depolarizing(f, D, 1)
        return tensor.apply_channel(channels.embed(one, tensor.n, [qudit]))

    def axes_dep_on(tensor, f, qudit):
        if f == 0.0:
            return tensor
        for axis in (channels.Axis.X_ONLY, channels.Axis.Z_ONLY):
            one = channels.axis_depolarizing(f, axis, D)
            tensor = tensor.apply_channel(channels.embed(one, tensor.n, [qudit]))
        return tensor

    def gate(tensor, spec):
        return tensor.apply_clifford(clifford.automorphism_of(spec, tensor.n, D))

    # window: 0 = A, 1 = X-frame accumulator, 2 = Z-frame accumulator, 3.. chain
    state = ept.ErrorProbabilityTensor.identity(D, 4)
    state = gate(state, clifford.cz(0, 3))
    state = dep_on(state, scenario.f_G, 0)
    state = axes_dep_on(state, scenario.f_G, 3)
    for _ in range(N):
        state = dep_on(state, scenario.f_S, 0)

    for station in range(1, N + 1):
        state = axes_dep_on(state, scenario.f_T, 3)
        state = state.extend(1)  # fresh partner (next chain qudit, or Bob's)
        state = gate(state, clifford.cz(3, 4))
        state = axes_dep_on(state, scenario.f_G, 3)
        if station < N:
            state = axes_dep_on(state, scenario.f_G, 4)
        else:
            state = dep_on(state, scenario.f_G, 4)  # Bob's qudit: local noise
        state = axes_dep_on(state, scenario.f_M, 3)
        state = gate(state, clifford.fourier(3))
        if station % 2 == 0:
            sign, accumulator = even_signs[station], 1
        else:
            sign, accumulator = odd_signs[station], 2
        state = gate(state, clifford.cx(3, accumulator, power=sign % D))
        state = state.marginalize([3])

    # fold the accumulated frame mis-correction onto Bob's qudit (index 3)
    state = gate(state, clifford.cx(1, 3, power=1))
    state = gate(state, clifford.cz(2, 3, power=1))
    state = state.marginalize([1, 2])

    reduction = ept.coset_reduce(state, ept.bell_stabilizer(D))
    return CosetStatistics(D, reduction.bell_table())
