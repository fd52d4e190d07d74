"""
Polar and convolutional polar encoding circuits.
A circuit of breadth b, depth d and l steps acts on N = b^l wires. Step 1
applies d shifted gate layers to the whole block; its wires are then split into
b interleaved sub-blocks (wire j joins sub-block j mod b) and every sub-block
receives the remaining l-1 steps. Layers are numbered from the input side;
layer s (0-based) places complete gates at local positions d-1-s, d-1-s+b,
..., so the last layer is unshifted and feeds the sub-blocks. Wires not
covered pass through.
Wire and input positions are 0-based.
"""
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import count

import numpy as np

from .errors import InvalidParameter, LengthMismatch, NotAPower, OutOfRange, TooLarge
from .kernel import GF2, pattern_bits, pattern_index

MAX_PERMUTATION_LENGTH = 20


@dataclass(frozen=True)
class GatePlacement:
    """One kernel gate; wires are consecutive in the local numbering of its block"""
    kernel: object
    wires: tuple
    step: int = 0
    layer: int = 0

    @property
    def first_wire(self):
        return self.wires[0]


@dataclass(frozen=True)
class CausalCone:
    """Gates and wires of one polarization step that depend on an input window"""
    window: range
    layer_starts: tuple
    intervals: tuple
    breadth: int

    @property
    def gates(self):
        return [
            [tuple(range(start, start + self.breadth)) for start in starts]
            for starts in self.layer_starts
        ]

    @property
    def layer_counts(self):
        """Gate count m_s of every layer, top to bottom"""
        return [len(starts) for starts in self.layer_starts]

    @property
    def gate_count(self):
        return sum(self.layer_counts)

    @property
    def output_wires(self):
        low, high = self.intervals[-1]
        return range(low, high + 1)


@dataclass(frozen=True)
class ComplexityEstimate:
    w_star: int
    m_gates: int
    c_total: float
    breadth: int = 2
    depth: int = 1
    block_length: int = 2
    steps: int = 1

    @property
    def m_bound(self):
        return cone_gate_bound(self.depth, self.breadth, self.w_star)

    @property
    def w_bound(self):
        return math.ceil(self.breadth * self.depth / (self.breadth - 1))

    def to_dict(self):
        return {
            'b': self.breadth,
            'd': self.depth,
            'N': self.block_length,
            'w_star': self.w_star,
            'm_gates': self.m_gates,
            'm_bound': self.m_bound,
            'w_bound': self.w_bound,
            'c_total': self.c_total,
        }


def layer_shifts(depth):
    """Offset of the first gate of every layer, input side first"""
    return range(depth - 1, -1, -1)


@lru_cache(maxsize=None)
def step_pattern(breadth, depth, size):
    """Local gate start positions of every layer of one step on `size` wires"""
    return tuple(tuple(range(shift, size - breadth + 1, breadth)) for shift in layer_shifts(depth))


@lru_cache(maxsize=65536)
def cone_walk(breadth, depth, size, start, width):
    """Forward dependency walk of a window through one step.

    Returns (intervals, layer_starts): intervals[s] is the dependent wire
    interval before layer s (intervals[0] is the window itself) and
    layer_starts[s] the starts of the layer-s gates it touches.
    """
    low, high = start, start + width - 1
    intervals = [(low, high)]
    layer_starts = []
    for shift in layer_shifts(depth):
        gates = (size - shift) // breadth if size - shift >= breadth else 0
        first = max(0, -(-(low - shift - breadth + 1) // breadth))
        last = min(gates - 1, (high - shift) // breadth)
        if first <= last:
            starts = tuple(range(shift + breadth * first, shift + breadth * last + 1, breadth))
            low = min(low, starts[0])
            high = max(high, starts[-1] + breadth - 1)
        else:
            starts = ()
        layer_starts.append(starts)
        intervals.append((low, high))
    return tuple(intervals), tuple(layer_starts)


def apply_layer(blocks, kernel, shift, gates):
    """Apply `gates` kernel gates starting at `shift` to every block in place.

    `blocks` has shape (batch, size, blocks_per_word); position t of block o is
    blocks[:, t, o].
    """
    if gates <= 0:
        return blocks
    batch, _, width = blocks.shape
    stop = shift + kernel.breadth * gates
    segment = blocks[:, shift:stop, :].reshape(batch, gates, kernel.breadth, width)
    mixed = np.einsum('gcis,ij->gcjs', segment.astype(np.int64), kernel.array.astype(np.int64)) % 2
    blocks[:, shift:stop, :] = mixed.reshape(batch, stop - shift, width)
    return blocks


@dataclass(frozen=True)
class Circuit:
    """Encoding circuit of a polar (depth 1) or convolutional polar code"""
    kernel: object
    depth: int
    steps: int

    @property
    def breadth(self):
        return self.kernel.breadth

    @property
    def block_length(self):
        return self.breadth ** self.steps

    def block_size(self, step):
        """Wires in each block that polarization step `step` (0-based) acts on"""
        return self.breadth ** (self.steps - step)

    def layers(self, step):
        return step_pattern(self.breadth, self.depth, self.block_size(step))

    def cone(self, step, start, width):
        return cone_walk(self.breadth, self.depth, self.block_size(step), start, width)

    @cached_property
    def step_layers(self):
        """Per step, per layer, the GatePlacements with global wire indices"""
        placed = []
        for step in range(self.steps):
            stride = self.breadth ** step
            step_gates = []
            for layer, starts in enumerate(self.layers(step)):
                layer_gates = [
                    GatePlacement(
                        self.kernel,
                        tuple(offset + stride * (start + j) for j in range(self.breadth)),
                        step,
                        layer,
                    )
                    for offset in range(stride)
                    for start in starts
                ]
                layer_gates.sort(key=lambda gate: gate.wires)
                step_gates.append(layer_gates)
            placed.append(step_gates)
        return placed

    def gate_counts(self):
        """Number of gates in each polarization step"""
        return [sum(len(layer) for layer in step) for step in self.step_layers]

    def gate_count(self):
        return sum(self.gate_counts())

    def describe(self):
        return f'{self.kernel.name}-d{self.depth}-l{self.steps}'

    def dump_gates(self):
        """One 'step layer first_wire' line per gate, in construction order"""
        lines = []
        for step in self.step_layers:
            for layer in step:
                lines.extend(f'{gate.step} {gate.layer} {gate.first_wire}' for gate in layer)
        return '\n'.join(lines)

    def generator_matrix(self):
        """N×N matrix G over GF(2) with encode(u) = u·G, composed gate by gate"""
        size = self.block_length
        generator = GF2(np.eye(size, dtype=np.uint8))
        for step in self.step_layers:
            for layer in step:
                for gate in layer:
                    factor = GF2(np.eye(size, dtype=np.uint8))
                    factor[np.ix_(gate.wires, gate.wires)] = GF2(self.kernel.array)
                    generator = generator @ factor
        return generator

    def to_dict(self):
        return {'kernel': self.kernel.to_dict(), 'depth': self.depth, 'steps': self.steps}


def build_circuit(kernel, depth, steps):
    """Recursive construction of a CP(b, d) circuit with `steps` steps"""
    if int(depth) != depth or depth < 1:
        raise InvalidParameter(f'Depth must be a positive integer, got {depth}')
    if int(steps) != steps or steps < 1:
        raise InvalidParameter(f'Steps must be a positive integer, got {steps}')
    return Circuit(kernel, int(depth), int(steps))


def _as_words(circuit, words):
    array = np.array(words, dtype=np.uint8)
    if array.shape[-1:] != (circuit.block_length,) or array.ndim > 2:
        raise LengthMismatch(f'Expected words of {circuit.block_length} bits, got shape {array.shape}')
    return array


def encode(circuit, u):
    """x = G u over F2; accepts one word or a (batch, N) array of words"""
    words = _as_words(circuit, u)
    single = words.ndim == 1
    words = np.atleast_2d(words).copy()
    batch, size = words.shape

    for step in range(circuit.steps):
        stride = circuit.breadth ** step
        blocks = words.reshape(batch, size // stride, stride)
        for shift, starts in zip(layer_shifts(circuit.depth), circuit.layers(step)):
            apply_layer(blocks, circuit.kernel, shift, len(starts))

    return words[0] if single else words


def circuit_as_permutation(circuit):
    """Basis-pattern permutation of the whole circuit (little-endian indices)"""
    size = circuit.block_length
    if size > MAX_PERMUTATION_LENGTH:
        raise TooLarge(f'Permutation table limited to N <= {MAX_PERMUTATION_LENGTH}, got {size}')
    return pattern_index(encode(circuit, pattern_bits(size)))


def causal_cone(circuit, step, start, width):
    """Causal cone of inputs start..start+width-1 of polarization step `step`"""
    if not 0 <= step < circuit.steps:
        raise OutOfRange(f'Step {step} outside 0..{circuit.steps - 1}')
    size = circuit.block_size(step)
    if width < 1 or start < 0 or start + width > size:
        raise OutOfRange(f'Window [{start}, {start + width}) outside block of {size} wires')
    intervals, layer_starts = circuit.cone(step, start, width)
    return CausalCone(range(start, start + width), layer_starts, intervals, circuit.breadth)


def _survey_size(breadth, depth, width):
    return breadth * (width + 2 * depth + 4)


@lru_cache(maxsize=None)
def max_cone(breadth, depth, width):
    """Worst (gates, output wires) over every width-w window of a wide step"""
    size = _survey_size(breadth, depth, width)
    worst_gates = worst_outputs = 0
    for start in range(size - width + 1):
        intervals, layer_starts = cone_walk(breadth, depth, size, start, width)
        low, high = intervals[-1]
        worst_gates = max(worst_gates, sum(len(starts) for starts in layer_starts))
        worst_outputs = max(worst_outputs, high - low + 1)
    return worst_gates, worst_outputs


def _check_structure(breadth, depth):
    if breadth < 2 or depth < 1:
        raise InvalidParameter(f'Need breadth >= 2 and depth >= 1, got b={breadth}, d={depth}')


def optimal_width(breadth, depth):
    """Smallest w whose every window cone has at most b·w output wires"""
    _check_structure(breadth, depth)
    for width in count(1):
        if max_cone(breadth, depth, width)[1] <= breadth * width:
            return width


def cone_gate_bound(depth, breadth, width):
    """Upper bound d·ceil((w-1)/b) + d(d+1)/2 on cone gates per step"""
    if min(depth, breadth, width) < 1:
        raise InvalidParameter('Cone bound parameters must all be >= 1')
    return depth * (-(-(width - 1) // breadth)) + depth * (depth + 1) // 2


def steps_for_length(breadth, length):
    """l with b^l == N, or NotAPower"""
    steps, size = 0, 1
    while size < length:
        size *= breadth
        steps += 1
    if size != length or steps < 1:
        raise NotAPower(f'N={length} is not a positive power of b={breadth}')
    return steps


def complexity_estimate(breadth, depth, length):
    """Decoding cost model 2^b · (m/w*) · N · log_b N"""
    _check_structure(breadth, depth)
    steps = steps_for_length(breadth, length)
    width = optimal_width(breadth, depth)
    gates = max_cone(breadth, depth, width)[0]
    total = 2 ** breadth * (gates / width) * length * steps
    return ComplexityEstimate(width, gates, total, breadth, depth, length, steps)
