"""
Monte Carlo error-correction runs, detection sweeps and result tables.
Tables are pandas DataFrames with fixed column order; CSV output uses 12
significant digits so reruns can be diffed.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd
from tqdm import tqdm

from .channel import bsc, sample_noise, trial_stream
from .circuit import build_circuit, complexity_estimate
from .codespec import load_kernel_file
from .decoder import Code, sc_decode_batch
from .errors import InvalidParameter, InvalidTrials
from .kernel import kernel_by_name
from .selection import pu_profile, select_frozen, total_undetected

logger = logging.getLogger(__name__)

DEFAULT_BATCH_SIZE = 512
FLOAT_FORMAT = '%.12g'

DETECTION_COLUMNS = ['b', 'd', 'l', 'N', 'p', 'rate', 'P_U', 'c_total']
CORRECTION_COLUMNS = ['b', 'd', 'l', 'N', 'p', 'rate', 'trials', 'ber', 'fer', 'ci95', 'c_total']
COMPLEXITY_COLUMNS = ['b', 'd', 'N', 'w_star', 'm_gates', 'm_bound', 'w_bound', 'c_total']


def wilson_interval(successes, total, z=1.96):
    """Wilson score interval for Bernoulli outcomes"""
    if total <= 0:
        return (0.0, 1.0)
    p = successes / total
    z2 = z * z
    denom = 1.0 + z2 / total
    center = (p + z2 / (2.0 * total)) / denom
    margin = (z * ((p * (1.0 - p) / total + z2 / (4.0 * total * total)) ** 0.5)) / denom
    return (max(0.0, center - margin), min(1.0, center + margin))


@dataclass(frozen=True)
class SimRecord:
    trials: int
    bit_errors: int
    frame_errors: int
    N: int
    K: int
    b: int
    d: int
    l: int
    p: float
    seed: int

    @property
    def ber(self):
        return self.bit_errors / (self.trials * self.K) if self.K else 0.0

    @property
    def fer(self):
        return self.frame_errors / self.trials

    @property
    def fer_interval(self):
        return wilson_interval(self.frame_errors, self.trials)

    @property
    def ci95_halfwidth(self):
        low, high = self.fer_interval
        return (high - low) / 2.0

    def to_dict(self):
        return {
            'trials': self.trials, 'bit_errors': self.bit_errors, 'frame_errors': self.frame_errors,
            'N': self.N, 'K': self.K, 'b': self.b, 'd': self.d, 'l': self.l, 'p': self.p,
            'seed': self.seed, 'ber': self.ber, 'fer': self.fer, 'ci95': self.ci95_halfwidth,
        }


def parse_rate(text):
    """Code rate from '1/3', '0.5' or a number; must lie in (0, 1]"""
    try:
        rate = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidParameter(f'Cannot read rate from {text!r}') from None
    if not 0 < rate <= 1:
        raise InvalidParameter(f'Rate must lie in (0, 1], got {rate}')
    return rate


def info_count_for_rate(length, rate):
    return round(Fraction(rate) * length)


def resolve_kernel(text):
    """Kernel from 'cnot', 'g3', 'g4' or 'file:<path>'"""
    if isinstance(text, str) and text.startswith('file:'):
        return load_kernel_file(text[len('file:'):])
    return kernel_by_name(str(text))


@dataclass(frozen=True)
class SweepSpec:
    codes: tuple
    p: float
    rate: Fraction
    trials: int = 0
    seed: int = 0
    width: int = None

    def __post_init__(self):
        object.__setattr__(self, 'rate', parse_rate(self.rate))
        bsc(self.p)
        for kernel, depth, steps in self.codes:
            build_circuit(kernel, depth, steps)
        if self.width is not None and (int(self.width) != self.width or self.width < 1):
            raise InvalidParameter(f'Decoding width must be a positive integer, got {self.width}')


def select_frozen_for_rate(profile, rate):
    return select_frozen(profile, info_count_for_rate(profile.block_length, rate))


def build_code(kernel, depth, steps, p, rate):
    """Circuit plus the detection-selected frozen set at (p, rate); returns (code, profile)"""
    circuit = build_circuit(kernel, depth, steps)
    profile = pu_profile(circuit, p)
    return Code(circuit, select_frozen_for_rate(profile, rate)), profile


def _run_batch(code, channel, w, seed, trials):
    size = code.block_length
    noise = np.stack([sample_noise(channel, size, trial_stream(seed, t)) for t in trials])
    # all-zero codeword: the received word is the noise and any decided one is an error
    decided = sc_decode_batch(code, channel, noise, w)
    errors = decided[:, code.info_positions]
    return int(errors.sum(dtype=np.int64)), int(errors.any(axis=1).sum())


def run_montecarlo(code, channel, trials, seed, w=None, batch_size=None, workers=1, progress=False):
    """Transmit the all-zero codeword `trials` times and count SC decoding errors"""
    if int(trials) != trials or trials < 1:
        raise InvalidTrials(f'Trials must be a positive integer, got {trials}')
    batch_size = batch_size or DEFAULT_BATCH_SIZE
    batches = [range(start, min(start + batch_size, trials)) for start in range(0, trials, batch_size)]
    circuit = code.circuit

    logger.info('Monte Carlo %s K=%d %s: %d trials in %d batches',
                circuit.describe(), code.info_count, channel.describe(), trials, len(batches))

    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_batch, code, channel, w, seed, batch) for batch in batches]
            results = [future.result() for future in tqdm(futures, disable=not progress, desc='batches')]
    else:
        results = [_run_batch(code, channel, w, seed, batch)
                   for batch in tqdm(batches, disable=not progress, desc='batches')]

    return SimRecord(
        trials=int(trials),
        bit_errors=sum(bits for bits, _ in results),
        frame_errors=sum(frames for _, frames in results),
        N=code.block_length,
        K=code.info_count,
        b=circuit.breadth,
        d=circuit.depth,
        l=circuit.steps,
        p=channel.flip_probability,
        seed=int(seed),
    )


def detection_sweep(spec):
    """P_U of every (kernel, d, l) at the sweep's channel and rate"""
    rows = []
    for kernel, depth, steps in spec.codes:
        code, profile = build_code(kernel, depth, steps, spec.p, spec.rate)
        estimate = complexity_estimate(kernel.breadth, depth, code.block_length)
        rows.append({
            'b': kernel.breadth, 'd': depth, 'l': steps, 'N': code.block_length, 'p': spec.p,
            'rate': float(spec.rate), 'P_U': total_undetected(profile, code.frozen),
            'c_total': estimate.c_total,
        })
        logger.info('Detection %s: P_U=%.6g', code.circuit.describe(), rows[-1]['P_U'])
    return pd.DataFrame(rows, columns=DETECTION_COLUMNS)


def correction_sweep(spec, batch_size=None, workers=1, progress=False):
    """Monte Carlo BER/FER of every (kernel, d, l) with detection-selected frozen sets"""
    if spec.codes and spec.trials < 1:
        raise InvalidTrials('A correction sweep needs at least one trial')
    channel = bsc(spec.p)
    rows = []
    for kernel, depth, steps in spec.codes:
        code, _ = build_code(kernel, depth, steps, spec.p, spec.rate)
        record = run_montecarlo(code, channel, spec.trials, spec.seed, spec.width, batch_size, workers, progress)
        estimate = complexity_estimate(kernel.breadth, depth, code.block_length)
        rows.append({
            'b': kernel.breadth, 'd': depth, 'l': steps, 'N': code.block_length, 'p': spec.p,
            'rate': float(spec.rate), 'trials': record.trials, 'ber': record.ber, 'fer': record.fer,
            'ci95': record.ci95_halfwidth, 'c_total': estimate.c_total,
        })
    return pd.DataFrame(rows, columns=CORRECTION_COLUMNS)


def complexity_table(pairs, length_for=None):
    """Rows of the cone/complexity model for (b, d) pairs; N is b^l from `length_for(b)`"""
    length_for = length_for or (lambda breadth: breadth ** 4)
    rows = [complexity_estimate(breadth, depth, length_for(breadth)).to_dict() for breadth, depth in pairs]
    return pd.DataFrame(rows, columns=COMPLEXITY_COLUMNS)


def format_table(frame):
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def write_table(frame, path):
    """Write a table as CSV, or as an Excel workbook for .xlsx paths"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() == '.xlsx':
        with pd.ExcelWriter(path, engine='openpyxl') as writer:
            frame.to_excel(writer, sheet_name='results', index=False)
            autosize_columns(writer.sheets['results'])
    else:
        path.write_text(format_table(frame), encoding='utf-8')
    return path


def autosize_columns(worksheet):
    """Widen every column to its longest cell, capped at 50 characters"""
    for column in worksheet.columns:
        longest = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
        worksheet.column_dimensions[column[0].column_letter].width = min(longest + 2, 50)


def sweep_lengths(breadth, target):
    """Steps l with b^l closest to `target` (used for equal-size comparisons)"""
    steps = max(1, round(math.log(target, breadth)))
    return steps
