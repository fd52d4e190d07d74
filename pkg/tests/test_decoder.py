import numpy as np
import pytest

from polar.channel import bsc
from polar.circuit import build_circuit, encode, optimal_width
from polar.decoder import (
    Code, ConeContractor, effective_channel_oracle, oracle_sc_decode, sc_decode, sc_decode_batch,
    window_likelihood,
)
from polar.errors import LengthMismatch, OutOfRange, TooLarge, WidthTooSmall
from polar.kernel import CNOT, G3, pattern_bits

ORACLE_CASES = [
    (CNOT, 1, 2), (CNOT, 1, 3), (CNOT, 1, 4),
    (CNOT, 2, 2), (CNOT, 2, 3), (CNOT, 2, 4),
    (CNOT, 3, 2), (CNOT, 3, 3), (CNOT, 3, 4),
    (G3, 1, 2), (G3, 2, 2),
]


def bsc_likelihood(p, y, x):
    return 1.0 - p if y == x else p


def bad_channel(p, y, u1):
    """W(y1, y2 | u1) of the first input of a CNOT pair, up to the factor 1/2"""
    return sum(bsc_likelihood(p, y[0], u1 ^ u2) * bsc_likelihood(p, y[1], u2) for u2 in (0, 1))


def good_channel(p, y, u1, u2):
    return bsc_likelihood(p, y[0], u1 ^ u2) * bsc_likelihood(p, y[1], u2)


def normalized(values):
    values = np.asarray(values, dtype=float)
    return values / values.sum()


@pytest.fixture
def pair():
    return Code(build_circuit(CNOT, 1, 1))


def test_first_bit_sees_bad_channel(pair):
    vector = window_likelihood(pair, bsc(0.25), [0, 0], [], 0, 1)
    np.testing.assert_allclose(vector.table, [0.625, 0.375], atol=1e-12)


def test_second_bit_sees_good_channel(pair):
    vector = window_likelihood(pair, bsc(0.25), [0, 0], [0], 1, 1)
    np.testing.assert_allclose(vector.table, [0.9, 0.1], atol=1e-12)


@pytest.mark.parametrize('p', [0.1, 0.25])
@pytest.mark.parametrize('y', [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_pair_matches_closed_forms(pair, p, y):
    first = window_likelihood(pair, bsc(p), y, [], 0, 1)
    np.testing.assert_allclose(first.table, normalized([bad_channel(p, y, 0), bad_channel(p, y, 1)]), atol=1e-12)
    for u1 in (0, 1):
        second = window_likelihood(pair, bsc(p), y, [u1], 1, 1)
        expected = normalized([good_channel(p, y, u1, 0), good_channel(p, y, u1, 1)])
        np.testing.assert_allclose(second.table, expected, atol=1e-12)


def test_noiseless_pair(pair):
    first = window_likelihood(pair, bsc(0.0), [0, 0], [], 0, 1)
    second = window_likelihood(pair, bsc(0.0), [0, 0], [0], 1, 1)
    np.testing.assert_allclose(first.table, [1.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(second.table, [1.0, 0.0], atol=1e-12)


def test_joint_window_of_pair(pair):
    vector = window_likelihood(pair, bsc(0.25), [0, 0], [], 0, 2)
    expected = [good_channel(0.25, (0, 0), u1, u2) for u2 in (0, 1) for u1 in (0, 1)]
    np.testing.assert_allclose(vector.table, normalized(expected), atol=1e-12)


@pytest.mark.parametrize('kernel, depth, steps', ORACLE_CASES)
def test_cone_contraction_matches_oracle(kernel, depth, steps, rng):
    circuit = build_circuit(kernel, depth, steps)
    size = circuit.block_length
    channel = bsc(0.2)
    code = Code(circuit, frozenset(int(i) for i in np.flatnonzero(rng.random(size) < 0.3)))
    for _ in range(100):
        y = rng.integers(0, 2, size=size, dtype=np.uint8)
        result = sc_decode(code, channel, y)
        for window, vector in zip(result.windows, result.window_likelihoods):
            prefix = result.u_hat[:window.start]
            expected = effective_channel_oracle(circuit, channel, y, prefix, window.start, len(window))
            np.testing.assert_allclose(vector.table, expected.table, rtol=0, atol=1e-9)


@pytest.mark.parametrize('kernel, depth, steps', [(CNOT, 2, 4), (G3, 2, 2)])
def test_fresh_windows_match_oracle_at_every_position(kernel, depth, steps, rng):
    circuit = build_circuit(kernel, depth, steps)
    code = Code(circuit)
    channel = bsc(0.15)
    width = optimal_width(kernel.breadth, depth)
    y = rng.integers(0, 2, size=circuit.block_length, dtype=np.uint8)
    u = rng.integers(0, 2, size=circuit.block_length, dtype=np.uint8)
    for start in range(circuit.block_length):
        w = min(width, circuit.block_length - start)
        vector = window_likelihood(code, channel, y, u[:start], start, w, check_width=False)
        expected = effective_channel_oracle(circuit, channel, y, u[:start], start, w)
        np.testing.assert_allclose(vector.table, expected.table, rtol=0, atol=1e-9)


def test_narrow_window_needs_width_check_off(cp22, rng):
    code = Code(cp22)
    y = rng.integers(0, 2, size=16, dtype=np.uint8)
    with pytest.raises(WidthTooSmall):
        window_likelihood(code, bsc(0.1), y, [], 0, 1)
    with pytest.raises(WidthTooSmall):
        sc_decode(code, bsc(0.1), y, w=1)
    vector = window_likelihood(code, bsc(0.1), y, [], 0, 1, check_width=False)
    expected = effective_channel_oracle(cp22, bsc(0.1), y, [], 0, 1)
    np.testing.assert_allclose(vector.table, expected.table, atol=1e-9)


def test_contraction_stays_within_width_bound(cp22, rng):
    width = optimal_width(2, 2)
    priors = bsc(0.1).transition_prior(rng.integers(0, 2, size=(4, 16), dtype=np.uint8))
    contractor = ConeContractor(cp22, priors, width_limit=2 * width)
    for start in range(0, 16, width):
        contractor.window(np.zeros((4, start), dtype=np.uint8), start, min(width, 16 - start))
    assert 0 < contractor.max_width <= 2 * width
    assert contractor.contractions > 0


def test_decoding_is_deterministic(cp22, rng):
    code = Code(cp22, frozenset(range(6)))
    y = rng.integers(0, 2, size=16, dtype=np.uint8)
    first = sc_decode(code, bsc(0.1), y)
    second = sc_decode(code, bsc(0.1), y)
    fresh = sc_decode(code, bsc(0.1), y, memoize=False)
    np.testing.assert_array_equal(first.u_hat, second.u_hat)
    np.testing.assert_array_equal(first.u_hat, fresh.u_hat)
    for memo, plain in zip(first.window_likelihoods, fresh.window_likelihoods):
        np.testing.assert_allclose(memo.table, plain.table, atol=1e-12)


def test_frozen_positions_decode_to_zero(cp22, rng):
    frozen = frozenset(range(0, 16, 2))
    code = Code(cp22, frozen)
    for _ in range(5):
        y = rng.integers(0, 2, size=16, dtype=np.uint8)
        u_hat = sc_decode(code, bsc(0.3), y).u_hat
        assert not u_hat[sorted(frozen)].any()


def test_batch_matches_single_words(cp22, rng):
    code = Code(cp22, frozenset(range(5)))
    words = rng.integers(0, 2, size=(6, 16), dtype=np.uint8)
    decided = sc_decode_batch(code, bsc(0.1), words)
    for y, row in zip(words, decided):
        np.testing.assert_array_equal(sc_decode(code, bsc(0.1), y).u_hat, row)


def test_noiseless_codeword_decodes_to_message(cp22, rng):
    frozen = frozenset({0, 1, 2, 4, 8})
    code = Code(cp22, frozen)
    channel = bsc(1e-9)
    for _ in range(5):
        u = rng.integers(0, 2, size=16, dtype=np.uint8)
        u[sorted(frozen)] = 0
        np.testing.assert_array_equal(sc_decode(code, channel, encode(cp22, u)).u_hat, u)


def test_zero_word_decodes_to_zero(cp22):
    result = sc_decode(Code(cp22), bsc(0.25), np.zeros(16, dtype=np.uint8))
    assert not result.u_hat.any()


def _clear_margins(result, frozen):
    """True when every window decision beats the runner-up by more than rounding"""
    for window, vector in zip(result.windows, result.window_likelihoods):
        patterns = pattern_bits(len(window), lsb_first=False)
        allowed = ~patterns[:, frozen[window.start:window.stop]].astype(bool).any(axis=1)
        ranked = np.sort(vector.wire_order()[allowed])[::-1]
        if ranked.size > 1 and ranked[0] - ranked[1] < 1e-9:
            return False
    return True


def test_sc_matches_oracle_sc(cp22, rng):
    code = Code(cp22, frozenset({0, 1, 2, 3, 4, 5, 8}))
    channel = bsc(0.25)
    compared = 0
    for _ in range(40):
        y = rng.integers(0, 2, size=16, dtype=np.uint8)
        expected = oracle_sc_decode(code, channel, y)
        if not _clear_margins(expected, code.frozen_mask):
            continue
        np.testing.assert_array_equal(sc_decode(code, channel, y).u_hat, expected.u_hat)
        compared += 1
    assert compared > 0


def test_code_validation(cp22):
    with pytest.raises(OutOfRange):
        Code(cp22, {16})
    code = Code(cp22, {0, 3})
    assert code.info_count == 14
    assert list(code.info_positions[:3]) == [1, 2, 4]
    assert code.to_dict()['frozen'] == [0, 3]


def test_oracle_refuses_long_blocks():
    circuit = build_circuit(CNOT, 1, 5)
    with pytest.raises(TooLarge):
        effective_channel_oracle(circuit, bsc(0.1), np.zeros(32, dtype=np.uint8), [], 0, 1)


def test_window_arguments_are_checked(cp22):
    code = Code(cp22)
    y = np.zeros(16, dtype=np.uint8)
    with pytest.raises(LengthMismatch):
        window_likelihood(code, bsc(0.1), y, [0, 0], 3, 3)
    with pytest.raises(OutOfRange):
        window_likelihood(code, bsc(0.1), y, [0] * 15, 15, 3)
    with pytest.raises(LengthMismatch):
        sc_decode(code, bsc(0.1), np.zeros(15, dtype=np.uint8))


def test_confidences_of_pair(pair):
    result = sc_decode(pair, bsc(0.25), [0, 0])
    assert result.confidences() == pytest.approx([0.625, 0.9])


def test_confidences_are_probabilities(cp22, rng):
    code = Code(cp22, frozenset({0, 1, 2, 4, 8}))
    for _ in range(5):
        result = sc_decode(code, bsc(0.2), rng.integers(0, 2, size=16, dtype=np.uint8))
        confidences = result.confidences()
        assert len(confidences) == len(result.windows)
        assert all(0.0 <= value <= 1.0 for value in confidences)
