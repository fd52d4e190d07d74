"""
Polarization kernels.
A kernel of breadth b is an invertible F2-linear map on b bits. Row i of the
kernel matrix lists the output bits that input bit i feeds, so a word u is
mapped to u·M over F2. Bit patterns are indexed little-endian: pattern
(v1, ..., vk) has index v1 + 2·v2 + ... + 2^(k-1)·vk.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache

import galois
import numpy as np

from .errors import InvalidParameter, LengthMismatch, SingularMatrix

GF2 = galois.GF(2)


@lru_cache(maxsize=None)
def pattern_bits(width, lsb_first=True):
    """All 2^width bit patterns as a (2^width, width) uint8 array.

    With lsb_first the row index is the little-endian pattern index; otherwise
    the first bit is the most significant (lexicographic order).
    """
    index = np.arange(2 ** width, dtype=np.int64)[:, None]
    shifts = np.arange(width) if lsb_first else np.arange(width)[::-1]
    bits = ((index >> shifts) & 1).astype(np.uint8)
    bits.setflags(write=False)
    return bits


def pattern_index(bits, lsb_first=True):
    """Inverse of pattern_bits for one pattern or a stack of patterns"""
    bits = np.asarray(bits, dtype=np.int64)
    width = bits.shape[-1]
    weights = 1 << (np.arange(width) if lsb_first else np.arange(width)[::-1])
    return bits @ weights


@dataclass(frozen=True)
class Kernel:
    """Invertible b×b bit matrix with a short label"""
    matrix: tuple
    name: str = 'kernel'

    @property
    def breadth(self):
        return len(self.matrix)

    @cached_property
    def array(self):
        array = np.array(self.matrix, dtype=np.uint8)
        array.setflags(write=False)
        return array

    @cached_property
    def table(self):
        """Output pattern index for every input pattern index (little-endian)"""
        outputs = (pattern_bits(self.breadth).astype(np.int64) @ self.array) % 2
        return pattern_index(outputs)

    @cached_property
    def wire_table(self):
        """Same permutation with the first wire as most significant bit"""
        inputs = pattern_bits(self.breadth, lsb_first=False).astype(np.int64)
        return pattern_index((inputs @ self.array) % 2, lsb_first=False)

    def to_dict(self):
        return {'name': self.name, 'matrix': [list(row) for row in self.matrix]}

    @classmethod
    def from_dict(cls, data):
        return make_kernel(data['matrix'], data.get('name', 'kernel'))

    def __repr__(self):
        return f'<Kernel {self.name} b={self.breadth}>'


def make_kernel(matrix, name='kernel'):
    """Validate a square 0/1 matrix and wrap it as a Kernel"""
    try:
        array = np.array(matrix, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f'Kernel matrix is not a bit matrix: {exc}') from exc

    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 2:
        raise InvalidParameter(f'Kernel matrix must be square with breadth >= 2, got shape {array.shape}')
    if not np.isin(array, (0, 1)).all():
        raise InvalidParameter('Kernel matrix entries must be 0 or 1')

    breadth = array.shape[0]
    if np.linalg.matrix_rank(GF2(array.astype(np.uint8))) != breadth:
        raise SingularMatrix(f'Kernel {name!r} is not invertible over F2')

    return Kernel(tuple(tuple(int(bit) for bit in row) for row in array), name)


def apply_kernel(kernel, word):
    """Map a b-bit word through the kernel"""
    bits = np.asarray(word, dtype=np.int64)
    if bits.shape != (kernel.breadth,):
        raise LengthMismatch(f'Kernel {kernel.name} takes {kernel.breadth} bits, got {bits.shape}')
    return tuple(int(bit) for bit in (bits @ kernel.array) % 2)


def is_polarizing(kernel):
    """True unless the kernel only permutes wires"""
    array = kernel.array
    is_permutation = (array.sum(axis=0) == 1).all() and (array.sum(axis=1) == 1).all()
    return not is_permutation


def kernel_tensor(kernel):
    """The 2^b × 2^b 0/1 matrix sending basis pattern u to apply_kernel(u)"""
    size = 2 ** kernel.breadth
    tensor = np.zeros((size, size), dtype=np.uint8)
    tensor[kernel.table, np.arange(size)] = 1
    return tensor


CNOT = make_kernel([[1, 0], [1, 1]], 'cnot')
G3 = make_kernel([[1, 0, 0], [1, 1, 0], [0, 1, 1]], 'g3')
G4 = make_kernel([[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]], 'g4')

KERNELS = {kernel.name: kernel for kernel in (CNOT, G3, G4)}


def kernel_by_name(name):
    """Look up a built-in kernel by label (case-insensitive)"""
    try:
        return KERNELS[name.lower()]
    except KeyError:
        raise InvalidParameter(f"Unknown kernel {name!r}; expected one of {', '.join(KERNELS)}") from None
