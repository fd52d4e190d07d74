"""
Frozen-set selection by undetected-error probability.
P_U(i) is the probability that input position i is the first flipped input
under the all-zero codeword: the mass of channel error patterns e = v·G with
v_j = 0 for j < i and v_i = 1. It is the unnormalized effective channel of
position i with a zero prefix and the all-zero received word.
"""
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .channel import bsc
from .circuit import encode, optimal_width
from .decoder import ConeContractor
from .errors import InvalidK, OutOfRange, TooLarge
from .kernel import pattern_bits

MAX_ORACLE_LENGTH = 20


@dataclass(frozen=True)
class ErrorProfile:
    circuit_id: str
    flip_probability: float
    values: np.ndarray

    @property
    def block_length(self):
        return len(self.values)

    def total(self):
        return math.fsum(self.values)

    def to_frame(self):
        return pd.DataFrame({'i': np.arange(self.block_length), 'p_u': self.values})

    def export_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format='%.12g')


def pu_profile(circuit, p, w=None):
    """P_U(i) for every input position by causal-cone contraction"""
    channel = bsc(p)
    size = circuit.block_length
    w = w or optimal_width(circuit.breadth, circuit.depth)
    priors = channel.transition_prior(np.zeros(size, dtype=np.uint8))
    contractor = ConeContractor(circuit, priors, memoize=True)

    values = np.zeros(size)
    for start in range(0, size, w):
        width = min(w, size - start)
        table, log_scale = contractor.window(np.zeros((1, start), dtype=np.uint8), start, width)
        with np.errstate(divide='ignore'):
            masses = np.exp(np.log(table[0]) + log_scale[0]).reshape((2,) * width)
        for offset in range(width):
            values[start + offset] = masses[(0,) * offset + (1,)].sum()

    return ErrorProfile(circuit.describe(), channel.flip_probability, values)


def pu_oracle(circuit, p, i):
    """P_U(i) by enumerating every input word with first one at position i"""
    channel = bsc(p)
    size = circuit.block_length
    if size > MAX_ORACLE_LENGTH:
        raise TooLarge(f'Undetected-error oracle limited to N <= {MAX_ORACLE_LENGTH}, got {size}')
    if not 0 <= i < size:
        raise OutOfRange(f'Position {i} outside 0..{size - 1}')

    tails = pattern_bits(size - i - 1)
    words = np.zeros((tails.shape[0], size), dtype=np.uint8)
    words[:, i] = 1
    words[:, i + 1:] = tails
    weights = encode(circuit, words).sum(axis=1, dtype=np.int64)
    counts = np.bincount(weights, minlength=size + 1)
    flip = channel.flip_probability
    return math.fsum(
        count * flip ** weight * (1.0 - flip) ** (size - weight)
        for weight, count in enumerate(counts) if count
    )


def select_frozen(profile, K):
    """Freeze the N-K positions with the largest P_U; ties freeze the smaller index"""
    size = profile.block_length
    if int(K) != K or not 0 <= K <= size:
        raise InvalidK(f'K must be an integer in [0, {size}], got {K}')
    order = np.lexsort((np.arange(size), -np.asarray(profile.values)))
    return frozenset(int(i) for i in order[:size - int(K)])


def total_undetected(profile, frozen):
    """Undetected-error probability of a frozen set: sum of P_U over the information positions"""
    return math.fsum(value for i, value in enumerate(profile.values) if i not in frozen)
