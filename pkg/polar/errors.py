"""
Error types raised by the polar coding library.
Every error is a ValueError so callers that only care about bad input can
catch the base class.
"""


class PolarError(ValueError):
    """Base class for all library errors"""


class SingularMatrix(PolarError):
    """Kernel matrix is not invertible over F2"""


class LengthMismatch(PolarError):
    """A bit word does not have the expected length"""


class InvalidParameter(PolarError):
    """A structural parameter (breadth, depth, steps, width, rate) is out of range"""


class TooLarge(PolarError):
    """An exhaustive computation was requested on a block that is too long"""


class OutOfRange(PolarError):
    """A position or window lies outside the block"""


class NotAPower(PolarError):
    """Block length is not a power of the kernel breadth"""


class InvalidProbability(PolarError):
    """Channel flip probability outside [0, 1/2]"""


class WidthTooSmall(PolarError):
    """Decoding width too small for the causal cone of a polarization step"""


class InvalidK(PolarError):
    """Information bit count outside [0, N]"""


class InvalidTrials(PolarError):
    """Monte Carlo trial count below one"""


class CodeSpecError(PolarError):
    """Malformed or unsupported code-spec document"""
