"""
Successive cancellation decoding.
The effective channel of a window of inputs is evaluated by contracting only
the causal cone of that window in every polarization step. Decoded bits enter
as basis vectors, undecided bits as uniform vectors, and channel likelihoods
enter at the leaves of the recursion. A brute-force oracle evaluates the same
quantity by enumeration on short blocks.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .circuit import apply_layer, encode, layer_shifts, optimal_width
from .errors import InvalidParameter, LengthMismatch, OutOfRange, TooLarge, WidthTooSmall
from .kernel import pattern_bits, pattern_index
from .channel import ProbVector

logger = logging.getLogger(__name__)

MAX_ORACLE_LENGTH = 24
ORACLE_CHUNK = 1 << 16
_LETTERS = 'abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXY'


@dataclass(frozen=True)
class Code:
    """A circuit with a frozen input set (frozen inputs carry 0)"""
    circuit: object
    frozen: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        frozen = frozenset(int(i) for i in self.frozen)
        outside = [i for i in frozen if not 0 <= i < self.block_length]
        if outside:
            raise OutOfRange(f'Frozen positions {sorted(outside)} outside 0..{self.block_length - 1}')
        object.__setattr__(self, 'frozen', frozen)

    @property
    def block_length(self):
        return self.circuit.block_length

    @property
    def info_count(self):
        return self.block_length - len(self.frozen)

    @property
    def frozen_mask(self):
        mask = np.zeros(self.block_length, dtype=bool)
        mask[list(self.frozen)] = True
        return mask

    @property
    def info_positions(self):
        return np.flatnonzero(~self.frozen_mask)

    def to_dict(self):
        return {
            **self.circuit.to_dict(),
            'N': self.block_length,
            'K': self.info_count,
            'frozen': sorted(self.frozen),
        }


@dataclass
class DecodeResult:
    u_hat: np.ndarray
    window_likelihoods: list
    windows: list

    def confidences(self):
        """Posterior weight of the decided bits in every window, 0 where the window had no support"""
        return [vector.probability(self.u_hat[window.start:window.stop]) if vector.is_normalized() else 0.0
                for window, vector in zip(self.windows, self.window_likelihoods)]


class ConeContractor:
    """Causal-cone contraction of effective channels for a batch of received words.

    `priors` holds W(y_j | x) with shape (batch, N, 2). Tables are kept flat with
    the first wire of a window as the most significant bit, one row per word,
    and are renormalized after every contraction; the removed scale is
    accumulated in a log so absolute values stay recoverable.

    With `memoize` the sub-block results are reused across calls. That is only
    valid while each block keeps the same decoded prefix, which holds for
    successive cancellation on one batch.
    """

    def __init__(self, circuit, priors, width_limit=None, memoize=True):
        self.circuit = circuit
        priors = np.asarray(priors, dtype=float)
        self.priors = priors[None] if priors.ndim == 2 else priors
        if self.priors.shape[1:] != (circuit.block_length, 2):
            raise LengthMismatch(f'Priors must have shape (batch, {circuit.block_length}, 2), got {priors.shape}')
        self.batch = self.priors.shape[0]
        self.width_limit = width_limit
        self.memoize = memoize
        self.max_width = 0
        self.contractions = 0
        self._memo = {}
        self._rows = np.arange(self.batch)

    def window(self, prefix, start, width):
        """(table, log_scale) of inputs start..start+width-1 given the prefix bits"""
        prefix = np.asarray(prefix, dtype=np.uint8).reshape(self.batch, start)
        return self._block(0, 0, prefix, start, width)

    def _block(self, step, offset, prefix, start, width):
        key = (step, offset, start, width)
        if self.memoize and key in self._memo:
            return self._memo[key]
        if step == self.circuit.steps:
            result = self._normalize(self.priors[:, offset, :], np.zeros(self.batch))
        else:
            result = self._contract(step, offset, prefix, start, width)
        if self.memoize:
            self._memo[key] = result
        return result

    def _contract(self, step, offset, prefix, start, width):
        circuit = self.circuit
        breadth = circuit.breadth
        intervals, layer_starts = circuit.cone(step, start, width)
        low, high = intervals[-1]
        if self.width_limit is not None and high - low + 1 > self.width_limit:
            raise WidthTooSmall(
                f'Cone of window [{start}, {start + width}) at step {step} has {high - low + 1} '
                f'output wires, more than {self.width_limit}'
            )
        self.contractions += 1

        states = self._known_states(step, prefix, start)
        table, log_scale = self._sub_block_product(step, offset, low, high, states[-1])

        for layer in reversed(range(circuit.depth)):
            after_low, after_high = intervals[layer + 1]
            before_low, before_high = intervals[layer]
            size = after_high - after_low + 1
            for gate in layer_starts[layer]:
                table = self._pull_back(table, size, gate - after_low)
            if before_low > after_low:
                table = self._fix_leading(table, size, states[layer][:, after_low:before_low])
                size -= before_low - after_low
            if after_high > before_high:
                table = table.reshape(self.batch, 2 ** (size - (after_high - before_high)), -1).sum(axis=2)
            table, log_scale = self._normalize(table, log_scale)

        return table, log_scale

    def _known_states(self, step, prefix, start):
        """Step state after every layer with only the prefix set.

        Wires left of the cone depend on the prefix alone; the state is
        truncated past the reach of the prefix.
        """
        circuit = self.circuit
        size = min(circuit.block_size(step), start + circuit.depth * circuit.breadth)
        state = np.zeros((self.batch, size, 1), dtype=np.uint8)
        state[:, :start, 0] = prefix
        states = [state[:, :, 0].copy()]
        for shift in layer_shifts(circuit.depth):
            gates = (size - shift) // circuit.breadth if size - shift >= circuit.breadth else 0
            apply_layer(state, circuit.kernel, shift, gates)
            states.append(state[:, :, 0].copy())
        return states

    def _sub_block_product(self, step, offset, low, high, state):
        """Joint table over output wires low..high from the b sub-block effective channels"""
        breadth = self.circuit.breadth
        stride = breadth ** step
        operands, labels = [], []
        log_scale = np.zeros(self.batch)
        for residue in range(breadth):
            first = -(-(low - residue) // breadth)
            last = (high - residue) // breadth
            if first > last:
                continue
            sub_prefix = state[:, residue::breadth][:, :first]
            table, sub_log = self._block(step + 1, offset + residue * stride, sub_prefix, first, last - first + 1)
            wires = [residue + breadth * t - low for t in range(first, last + 1)]
            operands.append(table.reshape((self.batch,) + (2,) * len(wires)))
            labels.append('Z' + ''.join(_LETTERS[w] for w in wires))
            log_scale = log_scale + sub_log

        size = high - low + 1
        self.max_width = max(self.max_width, size)
        output = 'Z' + _LETTERS[:size]
        joint = np.einsum(','.join(labels) + '->' + output, *operands)
        return self._normalize(joint.reshape(self.batch, -1), log_scale)

    def _pull_back(self, table, size, position):
        """Contract a gate on wires position..position+b-1 from its output side"""
        breadth = self.circuit.breadth
        shaped = table.reshape(self.batch, 2 ** position, 2 ** breadth, 2 ** (size - position - breadth))
        return shaped[:, :, self.circuit.kernel.wire_table, :].reshape(self.batch, -1)

    def _fix_leading(self, table, size, bits):
        """Slice the leading wires at their known per-word values"""
        count = bits.shape[1]
        shaped = table.reshape(self.batch, 2 ** count, 2 ** (size - count))
        return shaped[self._rows, pattern_index(bits, lsb_first=False)]

    def _normalize(self, table, log_scale):
        total = table.sum(axis=1)
        safe = np.where(total > 0, total, 1.0)
        with np.errstate(divide='ignore'):
            log_total = np.log(total)
        return table / safe[:, None], log_scale + log_total


def _check_window(circuit, prefix_length, start, width):
    size = circuit.block_length
    if width < 1:
        raise InvalidParameter(f'Window width must be >= 1, got {width}')
    if start < 0 or start + width > size:
        raise OutOfRange(f'Window [{start}, {start + width}) outside 0..{size - 1}')
    if prefix_length != start:
        raise LengthMismatch(f'Prefix must hold the {start} bits before the window, got {prefix_length}')


def _received(circuit, y):
    y = np.asarray(y, dtype=np.uint8)
    if y.shape[-1:] != (circuit.block_length,):
        raise LengthMismatch(f'Received word must have {circuit.block_length} bits, got shape {y.shape}')
    return y


def effective_channel_oracle(circuit, channel, y, prefix, i, w):
    """Window likelihood by enumerating every completion of the undecided inputs"""
    size = circuit.block_length
    if size > MAX_ORACLE_LENGTH:
        raise TooLarge(f'Oracle limited to N <= {MAX_ORACLE_LENGTH}, got {size}')
    y = _received(circuit, y)
    prefix = np.asarray(prefix, dtype=np.uint8).reshape(-1)
    _check_window(circuit, prefix.size, i, w)

    priors = channel.transition_prior(y)
    rest = size - i - w
    completions = pattern_bits(rest)
    values = np.zeros(2 ** w)
    for index, window in enumerate(pattern_bits(w)):
        for chunk in range(0, completions.shape[0], ORACLE_CHUNK):
            tail = completions[chunk:chunk + ORACLE_CHUNK]
            words = np.empty((tail.shape[0], size), dtype=np.uint8)
            words[:, :i] = prefix
            words[:, i:i + w] = window
            words[:, i + w:] = tail
            x = encode(circuit, words)
            values[index] += priors[np.arange(size), x].prod(axis=1).sum()
    return ProbVector.normalized(values, w)


def window_likelihood(code, channel, y, prefix, i, w, check_width=True):
    """Effective channel of inputs i..i+w-1 by fresh causal-cone contraction"""
    circuit = code.circuit
    y = _received(circuit, y)
    prefix = np.asarray(prefix, dtype=np.uint8).reshape(-1)
    _check_window(circuit, prefix.size, i, w)
    limit = circuit.breadth * w if check_width else None
    contractor = ConeContractor(circuit, channel.transition_prior(y), width_limit=limit, memoize=False)
    table, _ = contractor.window(prefix[None], i, w)
    return ProbVector.from_wire_order(table[0], w)


def _decide(table, frozen):
    """Argmax over patterns with frozen positions at 0; ties go to the lexicographically smallest"""
    patterns = pattern_bits(frozen.size, lsb_first=False)
    allowed = ~patterns[:, frozen].astype(bool).any(axis=1)
    scores = np.where(allowed, table, -1.0)
    return patterns[scores.argmax(axis=1)]


def _decoding_width(code, w):
    if w is None:
        return optimal_width(code.circuit.breadth, code.circuit.depth)
    if int(w) != w or w < 1:
        raise InvalidParameter(f'Decoding width must be a positive integer, got {w}')
    return int(w)


def _successive_cancellation(code, channel, y, w, memoize, record):
    circuit = code.circuit
    size = circuit.block_length
    contractor = ConeContractor(
        circuit, channel.transition_prior(y), width_limit=circuit.breadth * w, memoize=memoize
    )
    frozen = code.frozen_mask
    u_hat = np.zeros((contractor.batch, size), dtype=np.uint8)
    windows, likelihoods = [], []

    for start in range(0, size, w):
        width = min(w, size - start)
        table, _ = contractor.window(u_hat[:, :start], start, width)
        u_hat[:, start:start + width] = _decide(table, frozen[start:start + width])
        if record:
            windows.append(range(start, start + width))
            likelihoods.append(ProbVector.from_wire_order(table[0], width))

    logger.debug('Decoded %d word(s) with %d cone contractions, widest table %d wires',
                 contractor.batch, contractor.contractions, contractor.max_width)
    return u_hat, windows, likelihoods


def sc_decode(code, channel, y, w=None, memoize=True):
    """Successive cancellation decoding of one received word with window width w"""
    y = _received(code.circuit, y).reshape(-1)
    w = _decoding_width(code, w)
    u_hat, windows, likelihoods = _successive_cancellation(code, channel, y[None], w, memoize, True)
    return DecodeResult(u_hat[0], likelihoods, windows)


def sc_decode_batch(code, channel, y_batch, w=None, memoize=True):
    """Decode every row of a (batch, N) array; returns the (batch, N) decisions"""
    y_batch = np.atleast_2d(_received(code.circuit, y_batch))
    w = _decoding_width(code, w)
    return _successive_cancellation(code, channel, y_batch, w, memoize, False)[0]


def oracle_sc_decode(code, channel, y, w=None):
    """Successive cancellation driven by the brute-force effective channel"""
    y = _received(code.circuit, y).reshape(-1)
    w = _decoding_width(code, w)
    size = code.block_length
    frozen = code.frozen_mask
    u_hat = np.zeros(size, dtype=np.uint8)
    windows, likelihoods = [], []
    for start in range(0, size, w):
        width = min(w, size - start)
        vector = effective_channel_oracle(code.circuit, channel, y, u_hat[:start], start, width)
        u_hat[start:start + width] = _decide(vector.wire_order()[None], frozen[start:start + width])[0]
        windows.append(range(start, start + width))
        likelihoods.append(vector)
    return DecodeResult(u_hat, likelihoods, windows)
