import math

import numpy as np
import pytest

from pauliprop import repeater
from pauliprop.errors import (
    NoEncoding,
    OddN,
    OutOfRange,
    ThresholdExceedsDistance,
)
from pauliprop.repeater import Encoding, RepeaterScenario

BENCH = dict(f_T=0.05, f_G=0.001, f_M=0.01, f_S=0.0001)


def scenario(D=5, N=2, encoding=None, **rates):
    return RepeaterScenario(D=D, N=N, encoding=encoding, **rates)


# -- scenario plumbing ---------------------------------------------------------

def test_scenario_validation():
    with pytest.raises(OddN):
        scenario(N=3)
    with pytest.raises(OutOfRange):
        scenario(f_T=1.2)
    with pytest.raises(ThresholdExceedsDistance):
        Encoding(5, 3, k_max=3)
    with pytest.raises(OutOfRange):
        Encoding(4, 3)  # no [[4,1,3]] code
    with pytest.raises(NoEncoding):
        repeater.encoded_final_statistics(scenario())


def test_absorption_probability():
    assert repeater.absorption_probability(0.0, 0.0) == 0.0
    assert repeater.absorption_probability(1.0, 2.0) == 1.0
    assert abs(repeater.absorption_probability(0.0, math.log(2)) - 0.5) < 1e-15


def test_pauli_frame_targets():
    assert repeater.pauli_frame_targets([0, 0, 0, 0], 7) == (0, 0)
    # N = 2 reduces to plain negation of the cross outcome
    for c1 in range(5):
        for c2 in range(5):
            assert repeater.pauli_frame_targets([c1, c2], 5) == ((-c2) % 5, (-c1) % 5)
    assert repeater.pauli_frame_targets([1, 2, 3, 4], 5) == (2, 3)
    with pytest.raises(OddN):
        repeater.pauli_frame_targets([1, 2, 3], 5)


# -- station statistics ----------------------------------------------------------

def test_station_stats_limits():
    perfect = repeater.station_measurement_stats(scenario())
    assert perfect.p_zero == 1.0
    noisy = repeater.station_measurement_stats(scenario(f_M=1.0))
    assert abs(noisy.p_zero - 1 / 5) < 1e-15
    assert abs(noisy.p_err - 1 / 5) < 1e-15


def test_station_stats_hand_value():
    sc = scenario(D=5, f_T=0.05, f_G=0.001, f_M=0.01)
    bias = 0.95 ** 2 * 0.999 ** 3 * 0.99
    stats = repeater.station_measurement_stats(sc)
    assert abs(stats.p_zero - (1 + 4 * bias) / 5) < 1e-15
    first = repeater.station_measurement_stats(sc, first_station=True)
    bias_first = 0.95 * 0.999 ** 2 * 0.99
    assert abs(first.p_zero - (1 + 4 * bias_first) / 5) < 1e-15


def test_frame_channels_trivial_and_two_stations():
    sc = scenario(D=3, N=2)
    f_even, f_odd = repeater.frame_error_channels(
        sc,
        repeater.station_measurement_stats(sc, True),
        repeater.station_measurement_stats(sc, False),
    )
    assert f_even[0] == 1.0 and f_odd[0] == 1.0
    noisy = scenario(D=3, N=2, f_M=0.3, f_T=0.1, f_G=0.05)
    first = repeater.station_measurement_stats(noisy, True)
    inter = repeater.station_measurement_stats(noisy, False)
    f_even, f_odd = repeater.frame_error_channels(noisy, first, inter)
    assert np.allclose(f_even, inter.distribution())
    assert np.allclose(f_odd, first.distribution())


@pytest.mark.parametrize("D", [2, 3, 5, 13])
@pytest.mark.parametrize("N", [2, 4, 6, 50])
def test_frame_channels_match_closed_forms(D, N):
    sc = scenario(D=D, N=N, f_T=0.03, f_G=0.007, f_M=0.02, f_S=0.001)
    first = repeater.station_measurement_stats(sc, True)
    inter = repeater.station_measurement_stats(sc, False)
    f_even, f_odd = repeater.frame_error_channels(sc, first, inter)
    closed_even, closed_odd = repeater.frame_channel_closed_form(sc)
    assert np.max(np.abs(f_even - closed_even)) < 1e-13
    assert np.max(np.abs(f_odd - closed_odd)) < 1e-13


# -- unencoded pipeline -----------------------------------------------------------

def test_unencoded_limits():
    perfect = repeater.unencoded_final_statistics(scenario(D=3, N=4))
    assert perfect.p00 == 1.0
    ruined = repeater.unencoded_final_statistics(
        scenario(D=3, N=2, f_T=1.0, f_G=1.0, f_M=1.0, f_S=1.0))
    assert np.max(np.abs(ruined.table - 1 / 9)) < 1e-12


def test_unencoded_equilibrates_for_long_lines():
    sc = scenario(D=5, N=200, **BENCH)
    table = repeater.unencoded_final_statistics(sc).table
    assert np.max(np.abs(table - 0.04)) < 1e-3


# -- encoded pipeline --------------------------------------------------------------

def test_encoded_station_success_cases():
    enc = Encoding(5, 3)
    p_succ, p_guess = repeater.encoded_station_success(scenario(encoding=enc))
    assert p_succ == 1.0 and p_guess == 0.0

    # d = 1: only the zero error is correctable, p_cor = p0^n
    sc = scenario(D=5, N=2, encoding=Encoding(3, 1), f_M=0.2)
    stats = repeater.station_measurement_stats(sc)
    p_succ, p_guess = repeater.encoded_station_success(sc)
    p_cor = stats.p_zero ** 3
    assert abs(p_succ - (1 + 4 * p_cor) / 5) < 1e-15

    # [[5,1,3]]: two-term hand expansion
    sc = scenario(D=5, N=2, encoding=Encoding(5, 3), **BENCH)
    stats = repeater.station_measurement_stats(sc)
    expected = stats.p_zero ** 5 + 4 * 5 * stats.p_zero ** 4 * stats.p_err
    p_succ, _ = repeater.encoded_station_success(sc)
    assert abs(p_succ - (1 + 4 * expected) / 5) < 1e-14


def test_encoded_limits_and_equilibration():
    enc = Encoding(5, 3)
    perfect = repeater.encoded_final_statistics(scenario(D=5, N=2, encoding=enc))
    assert perfect.p00 == 1.0
    long = repeater.encoded_final_statistics(scenario(D=5, N=200, encoding=enc, **BENCH))
    assert np.max(np.abs(long.table - 0.04)) < 1e-3


def test_trivial_encoding_documents_the_decoding_model_difference():
    # A [[1,1,1]] "encoding" is not identical to the bare pipeline: failed
    # blocks get a uniformly guessed outcome and Bob's block is cleaned by a
    # separate perfect stabilizer readout, neither of which the bare
    # analysis contains.  The gap is linear in the rates.
    diffs = []
    for scale in (1.0, 0.01):
        rates = {k: v * scale for k, v in BENCH.items()}
        enc = repeater.encoded_final_statistics(
            scenario(D=5, N=2, encoding=Encoding(1, 1), **rates))
        bare = repeater.unencoded_final_statistics(scenario(D=5, N=2, **rates))
        diffs.append(float(np.max(np.abs(enc.table - bare.table))))
    assert diffs[0] == pytest.approx(0.031730718782787, abs=1e-12)
    assert diffs[1] < 4e-4
    both_perfect_enc = repeater.encoded_final_statistics(
        scenario(D=5, N=2, encoding=Encoding(1, 1)))
    both_perfect_bare = repeater.unencoded_final_statistics(scenario(D=5, N=2))
    assert np.array_equal(both_perfect_enc.table, both_perfect_bare.table)


# -- abortion strategy ---------------------------------------------------------------

def test_abortion_probabilities_cases():
    enc = Encoding(13, 7, k_max=4, f_abs=0.0)
    sc = scenario(D=13, N=2, encoding=enc, **BENCH)
    probs = repeater.abortion_station_probabilities(sc, 0)
    assert probs.p_unknown == 1.0 and probs.p_unknown_first == 1.0
    stats = repeater.station_measurement_stats(sc)
    plain = repeater.correction_success(stats.p_zero, stats.p_err, 13, 7, 13)
    assert probs.p_cor_given_k == pytest.approx(plain, abs=1e-15)
    with pytest.raises(ThresholdExceedsDistance):
        repeater.abortion_station_probabilities(
            scenario(D=13, N=2, encoding=Encoding(13, 7, k_max=6, f_abs=0.1)), 8)


def test_reduced_code_correction_counts():
    # with k digits dropped the remaining block corrects floor((d-k-1)/2)
    sc = scenario(D=13, N=2, encoding=Encoding(13, 7, k_max=4, f_abs=0.05), **BENCH)
    p1 = repeater.abortion_station_probabilities(sc, 1)
    p2 = repeater.abortion_station_probabilities(sc, 2)
    stats = repeater.station_measurement_stats(sc)
    assert p1.p_cor_given_k == pytest.approx(
        repeater.correction_success(stats.p_zero, stats.p_err, 12, 6, 13), abs=1e-15)
    assert p2.p_cor_given_k == pytest.approx(
        repeater.correction_success(stats.p_zero, stats.p_err, 11, 5, 13), abs=1e-15)
    # same correctable weight: floor((7-2-1)/2) == floor((6-1)/2) == 2
    assert (7 - 2 - 1) // 2 == (7 - 1 - 1) // 2 == 2


def test_conditional_correction_limits():
    no_loss = scenario(D=13, N=2, encoding=Encoding(13, 7, k_max=3, f_abs=0.0), **BENCH)
    stats = repeater.station_measurement_stats(no_loss)
    plain = repeater.correction_success(stats.p_zero, stats.p_err, 13, 7, 13)
    assert repeater.conditional_station_correction(no_loss) == pytest.approx(plain, abs=1e-15)
    zero_threshold = scenario(D=13, N=2, encoding=Encoding(13, 7, k_max=0, f_abs=0.4), **BENCH)
    assert repeater.conditional_station_correction(zero_threshold) == pytest.approx(plain, abs=1e-15)
    # three-term mixture expanded by hand
    sc = scenario(D=13, N=2, encoding=Encoding(13, 7, k_max=2, f_abs=0.05), **BENCH)
    f = 0.05
    q = 1 - (1 - f) ** 2
    weights = [math.comb(13, k) * q ** k * (1 - q) ** (13 - k) for k in range(3)]
    cors = [repeater.correction_success(stats.p_zero, stats.p_err, 13 - k, 7 - k, 13)
            for k in range(3)]
    expected = sum(w * c for w, c in zip(weights, cors)) / sum(weights)
    assert repeater.conditional_station_correction(sc) == pytest.approx(expected, abs=1e-15)


# -- loss-configuration counting -------------------------------------------------------

def test_alpha_small_rows():
    alpha0 = repeater.count_accepted_configurations(2, 13, 0)
    assert alpha0[0] == 1 and not alpha0[1:].any()
    alpha1 = repeater.count_accepted_configurations(2, 13, 1)
    assert list(alpha1[:4]) == [1, 26, 13, 0]


def test_alpha_accepts_everything_when_threshold_is_full():
    for N, n in ((2, 3), (3, 2), (2, 5)):
        alpha = repeater.count_accepted_configurations(N, n, n)
        assert int(alpha.sum()) == 2 ** (N * n)


def test_alpha_dp_matches_flat_enumeration():
    from pauliprop.repeater import _alpha_dp, _alpha_flat
    for N, n in ((2, 4), (3, 3), (3, 4), (4, 3)):
        for k_max in range(n + 1):
            assert _alpha_dp(N, n, k_max).tolist() == _alpha_flat(N, n, k_max).tolist()


def test_distribution_probability_polynomials():
    def sc(k_max, f):
        return scenario(D=13, N=2, encoding=Encoding(13, 7, k_max=k_max, f_abs=f), **BENCH)

    assert repeater.distribution_probability(sc(4, 0.0)) == 1.0
    for f in (0.05, 0.2, 0.6):
        assert repeater.distribution_probability(sc(0, f)) == pytest.approx(
            (1 - f) ** 26, abs=1e-15)
        expected = (1 - f) ** 26 + 26 * f * (1 - f) ** 25 + 13 * f ** 2 * (1 - f) ** 24
        assert repeater.distribution_probability(sc(1, f)) == pytest.approx(expected, abs=1e-15)


# -- stepwise tensor oracle --------------------------------------------------------------

def test_stepwise_oracle_trivial():
    stats = repeater.stepwise_oracle_statistics(scenario(D=2, N=2))
    assert stats.p00 == 1.0


def test_stepwise_oracle_matches_closed_form_quick():
    rng = np.random.default_rng(42)
    for D, N in ((2, 2), (3, 2), (2, 4), (3, 4)):
        for _ in range(3):
            f_t, f_g, f_m, f_s = rng.random(4) * 0.3
            sc = scenario(D=D, N=N, f_T=f_t, f_G=f_g, f_M=f_m, f_S=f_s)
            closed = repeater.unencoded_final_statistics(sc).table
            walked = repeater.stepwise_oracle_statistics(sc).table
            assert np.max(np.abs(closed - walked)) < 1e-12


def test_stepwise_oracle_guards():
    with pytest.raises(NoEncoding):
        repeater.stepwise_oracle_statistics(scenario(encoding=Encoding(5, 3)))
