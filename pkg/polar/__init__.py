"""
Polar and convolutional polar codes.
Encoding circuits, successive cancellation decoding by causal-cone
contraction, frozen-set selection by undetected-error probability and Monte
Carlo evaluation over the binary symmetric channel.
"""
from .channel import ChannelModel, ProbVector, bsc, parse_channel
from .circuit import Circuit, build_circuit, causal_cone, complexity_estimate, encode, optimal_width
from .decoder import Code, ConeContractor, sc_decode, sc_decode_batch, window_likelihood
from .errors import PolarError
from .harness import SimRecord, SweepSpec, correction_sweep, detection_sweep, run_montecarlo
from .kernel import CNOT, G3, G4, KERNELS, Kernel, apply_kernel, kernel_by_name, make_kernel
from .selection import ErrorProfile, pu_profile, select_frozen, total_undetected

__all__ = [
    'CNOT', 'G3', 'G4', 'KERNELS', 'Kernel', 'apply_kernel', 'kernel_by_name', 'make_kernel',
    'Circuit', 'build_circuit', 'causal_cone', 'complexity_estimate', 'encode', 'optimal_width',
    'ChannelModel', 'ProbVector', 'bsc', 'parse_channel',
    'Code', 'ConeContractor', 'sc_decode', 'sc_decode_batch', 'window_likelihood',
    'ErrorProfile', 'pu_profile', 'select_frozen', 'total_undetected',
    'SimRecord', 'SweepSpec', 'correction_sweep', 'detection_sweep', 'run_montecarlo',
    'PolarError',
]
