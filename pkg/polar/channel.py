"""
Memoryless binary channels and probability vectors.
Only the binary symmetric channel is provided; ChannelModel holds a general
2×2 table W[y][x] so other memoryless binary channels fit the same interface.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidParameter, InvalidProbability, LengthMismatch
from .kernel import pattern_index

NORMALIZATION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ProbVector:
    """Nonnegative table over the 2^width patterns of `width` bits (little-endian index)"""
    width: int
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.shape != (2 ** self.width,):
            raise LengthMismatch(f'ProbVector of width {self.width} needs {2 ** self.width} entries, got {table.shape}')
        if (table < 0).any():
            raise InvalidParameter('ProbVector entries must be nonnegative')
        table.setflags(write=False)
        object.__setattr__(self, 'table', table)

    @classmethod
    def normalized(cls, values, width=None):
        """Scale a nonnegative table to unit sum; an all-zero table is kept as is"""
        values = np.asarray(values, dtype=float)
        if width is None:
            width = int(np.log2(values.size))
        total = values.sum()
        return cls(width, values / total if total > 0 else values)

    @classmethod
    def from_wire_order(cls, values, width):
        """Build from a table whose first bit is the most significant"""
        values = np.asarray(values, dtype=float).reshape((2,) * width)
        return cls.normalized(values.transpose(tuple(reversed(range(width)))).reshape(-1), width)

    def wire_order(self):
        """Table with the first bit as most significant (lexicographic order)"""
        values = self.table.reshape((2,) * self.width)
        return values.transpose(tuple(reversed(range(self.width)))).reshape(-1)

    def probability(self, bits):
        if len(bits) != self.width:
            raise LengthMismatch(f'Expected {self.width} bits, got {len(bits)}')
        return float(self.table[pattern_index(bits)])

    def total(self):
        return float(self.table.sum())

    def is_normalized(self):
        return abs(self.total() - 1.0) <= NORMALIZATION_TOLERANCE


@dataclass(frozen=True)
class ChannelModel:
    """W(y|x) as a 2×2 table, rows indexed by output y and columns by input x"""
    likelihood: tuple
    flip_probability: float
    name: str = 'bsc'

    @property
    def array(self):
        return np.array(self.likelihood, dtype=float)

    def transition_prior(self, received):
        """W(y_j | x) for x = 0, 1 at every received bit; shape (..., N, 2)"""
        received = np.asarray(received, dtype=np.int64)
        if not np.isin(received, (0, 1)).all():
            raise InvalidParameter('Received words must be binary')
        return self.array[received]

    def describe(self):
        return f'{self.name}:{self.flip_probability:g}'


def bsc(p):
    """Binary symmetric channel flipping each bit with probability p"""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise InvalidProbability(f'Flip probability must be a number, got {p!r}') from None
    if not 0.0 <= p <= 0.5:
        raise InvalidProbability(f'Flip probability must lie in [0, 1/2], got {p}')
    return ChannelModel(((1.0 - p, p), (p, 1.0 - p)), p, 'bsc')


def parse_channel(text):
    """Parse 'bsc:<p>' where p is a decimal or a fraction such as 1/20"""
    kind, _, value = str(text).partition(':')
    if kind.strip().lower() != 'bsc' or not value:
        raise InvalidParameter(f"Channel must look like 'bsc:<p>', got {text!r}")
    try:
        p = float(Fraction(value.strip()))
    except (ValueError, ZeroDivisionError):
        raise InvalidProbability(f'Cannot read flip probability from {value!r}') from None
    return bsc(p)


def likelihood_prior(channel, y):
    """(W(y|0), W(y|1)) normalized, as a width-1 ProbVector"""
    if y not in (0, 1):
        raise InvalidParameter(f'Received bit must be 0 or 1, got {y!r}')
    return ProbVector.normalized(channel.array[y], 1)


def trial_stream(seed, trial):
    """Random stream of Monte Carlo trial `trial`.

    The stream is PCG64 seeded by SeedSequence(seed, spawn_key=(trial,)), so a
    trial's noise never depends on which worker or batch runs it.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(trial),))))


def sample_noise(channel, length, stream):
    """Independent flips with the channel's flip probability"""
    return (stream.random(int(length)) < channel.flip_probability).astype(np.uint8)
