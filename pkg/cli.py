#!/usr/bin/env python3
"""
Command line for the polar code toolkit.

    python cli.py build --kernel cnot --depth 2 --steps 4 --channel bsc:0.25 --rate 1/3 --out code.json
    python cli.py profile --kernel g3 --depth 1 --steps 3 --channel bsc:0.25
    python cli.py detect --kernel cnot --depth 1 --depth 2 --steps 4 --steps 5 --channel bsc:0.25
    python cli.py detect --kernel cnot --kernel g3 --kernel g4 --depth 1 --depth 2 --size 1000 --channel bsc:1/4
    python cli.py simulate --kernel cnot --depth 2 --steps 8 --channel bsc:0.05 --trials 10000
    python cli.py complexity --kernel cnot --kernel g3 --depth 1 --depth 2
    python cli.py decode --spec code.json --y 0110100100000000

Tables go to stdout as CSV unless --out names a .csv or .xlsx file.
"""
import functools
import itertools
import logging

import click

from config import SimulationConfig
from polar.channel import parse_channel
from polar.circuit import build_circuit
from polar.codespec import load_code_spec, save_code_spec
from polar.errors import PolarError
from polar.harness import (
    SweepSpec, build_code, complexity_table, correction_sweep, detection_sweep, format_table,
    parse_rate, resolve_kernel, sweep_lengths, write_table,
)
from polar.selection import pu_profile, total_undetected
from utils import configure_logging
from services.experiments import experiment_service

logger = logging.getLogger(__name__)


def translate_errors(command):
    """Report library errors as usage errors (exit status 2)"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except PolarError as exc:
            raise click.UsageError(str(exc)) from exc
    return wrapper


class KernelType(click.ParamType):
    name = 'kernel'

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return resolve_kernel(value)
        except PolarError as exc:
            self.fail(str(exc), param, ctx)


class ChannelType(click.ParamType):
    name = 'channel'

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return parse_channel(value)
        except PolarError as exc:
            self.fail(str(exc), param, ctx)


class RateType(click.ParamType):
    name = 'rate'

    def convert(self, value, param, ctx):
        try:
            return parse_rate(value)
        except PolarError as exc:
            self.fail(str(exc), param, ctx)


KERNEL = KernelType()
CHANNEL = ChannelType()
RATE = RateType()


def emit_table(frame, out):
    if out:
        path = write_table(frame, out)
        logger.info('Wrote %d rows to %s', len(frame), path)
    else:
        click.echo(format_table(frame), nl=False)


def code_options(multiple=False):
    """--kernel/--depth/--steps, repeatable for sweeps"""
    def decorate(command):
        command = click.option('--steps', '-l', type=click.IntRange(min=1), multiple=multiple,
                               required=not multiple, help='Polarization steps l (N = b^l).')(command)
        command = click.option('--depth', '-d', type=click.IntRange(min=1), multiple=multiple,
                               default=(1,) if multiple else 1, show_default=True,
                               help='Shifted layers per step (1 gives a polar code).')(command)
        command = click.option('--kernel', '-k', type=KERNEL, multiple=multiple,
                               default=('cnot',) if multiple else 'cnot', show_default=True,
                               help='cnot, g3, g4 or file:<path> to a JSON kernel.')(command)
        return command
    return decorate


channel_option = click.option('--channel', '-c', type=CHANNEL, default='bsc:0.05', show_default=True,
                              help="Channel as 'bsc:<p>', p may be a fraction.")
rate_option = click.option('--rate', '-r', type=RATE, default='1/3', show_default=True,
                           help='Code rate K/N.')
width_option = click.option('--width', '-w', type=click.IntRange(min=1), default=None,
                            help='Decoding window width (default w*).')
out_option = click.option('--out', '-o', type=click.Path(dir_okay=False), default=None,
                          help='Output file (.csv or .xlsx).')
size_option = click.option('--size', '-N', type=click.IntRange(min=2), default=None,
                           help='Target block length; picks l per kernel so that b^l is closest to it.')


def sweep_codes(kernels, depths, steps, size):
    """(kernel, d, l) rows of a sweep from explicit --steps or from --size"""
    if size is not None and steps:
        raise click.UsageError('Give --steps or --size, not both')
    if size is not None:
        return tuple((kernel, depth, sweep_lengths(kernel.breadth, size))
                     for kernel, depth in itertools.product(kernels, depths))
    if not steps:
        raise click.UsageError('Give --steps or --size')
    return tuple(itertools.product(kernels, depths, steps))


@click.group()
@click.option('--log-level', default=SimulationConfig.LOG_LEVEL, show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
@click.option('--quiet', '-q', is_flag=True, help='Only warnings, no progress bars.')
@click.pass_context
def cli(ctx, log_level, quiet):
    """Polar and convolutional polar codes over the binary symmetric channel."""
    configure_logging('WARNING' if quiet else log_level)
    ctx.obj = {'quiet': quiet}


@cli.command()
@code_options()
@channel_option
@rate_option
@out_option
@click.option('--dump', is_flag=True, help="Print one 'step layer first_wire' line per gate.")
@translate_errors
def build(kernel, depth, steps, channel, rate, out, dump):
    """Select a frozen set and write the code-spec file."""
    if dump:
        click.echo(build_circuit(kernel, depth, steps).dump_gates())
        return

    code, profile = build_code(kernel, depth, steps, channel.flip_probability, rate)
    if out:
        save_code_spec(code, out, channel.flip_probability, rate)
        logger.info('Wrote code spec for %s to %s', code.circuit.describe(), out)
    click.echo(f'{code.circuit.describe()} N={code.block_length} K={code.info_count} '
               f'P_U={total_undetected(profile, code.frozen):.12g}')


@cli.command()
@code_options()
@channel_option
@width_option
@out_option
@translate_errors
def profile(kernel, depth, steps, channel, width, out):
    """Undetected-error probability P_U(i) of every input position."""
    circuit = build_circuit(kernel, depth, steps)
    result = pu_profile(circuit, channel.flip_probability, width)
    if out:
        result.export_csv(out)
    else:
        emit_table(result.to_frame(), None)


@cli.command()
@code_options(multiple=True)
@channel_option
@rate_option
@size_option
@out_option
@translate_errors
def detect(kernel, depth, steps, channel, rate, size, out):
    """Detection sweep: total P_U of every kernel/depth/steps combination."""
    spec = SweepSpec(sweep_codes(kernel, depth, steps, size), channel.flip_probability, rate)
    emit_table(detection_sweep(spec), out)


@cli.command()
@code_options(multiple=True)
@channel_option
@rate_option
@click.option('--trials', '-n', type=click.IntRange(min=1), default=1000, show_default=True)
@click.option('--seed', '-s', type=click.IntRange(min=0), default=SimulationConfig.DEFAULT_SEED, show_default=True)
@click.option('--workers', type=click.IntRange(min=1), default=SimulationConfig.WORKERS, show_default=True)
@click.option('--batch-size', type=click.IntRange(min=1), default=SimulationConfig.BATCH_SIZE, show_default=True)
@width_option
@size_option
@out_option
@click.pass_context
@translate_errors
def simulate(ctx, kernel, depth, steps, channel, rate, trials, seed, workers, batch_size, width, size, out):
    """Monte Carlo bit and frame error rates of SC decoding."""
    spec = SweepSpec(sweep_codes(kernel, depth, steps, size), channel.flip_probability,
                     rate, trials, seed, width)
    frame = correction_sweep(spec, batch_size, workers, progress=not ctx.obj['quiet'])
    emit_table(frame, out)


@cli.command()
@click.option('--kernel', '-k', type=KERNEL, multiple=True, default=('cnot',), show_default=True)
@click.option('--depth', '-d', type=click.IntRange(min=1), multiple=True, default=(1, 2, 3, 4), show_default=True)
@click.option('--steps', '-l', type=click.IntRange(min=1), default=4, show_default=True,
              help='N = b^l for the cost column.')
@out_option
@translate_errors
def complexity(kernel, depth, steps, out):
    """Optimal width, cone gates and decoding cost per kernel and depth."""
    pairs = [(k.breadth, d) for k, d in itertools.product(kernel, depth)]
    emit_table(complexity_table(pairs, lambda breadth: breadth ** steps), out)


@cli.command()
@click.option('--spec', 'spec_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Code-spec file written by build.')
@click.option('--kernel', '-k', type=KERNEL, default='cnot', show_default=True)
@click.option('--depth', '-d', type=click.IntRange(min=1), default=1, show_default=True)
@click.option('--steps', '-l', type=click.IntRange(min=1), default=None)
@channel_option
@rate_option
@width_option
@click.option('--y', 'received', required=True, help='Received word as a 0/1 string.')
@translate_errors
def decode(spec_path, kernel, depth, steps, channel, rate, width, received):
    """Decode one received word and print the decisions."""
    bits = [int(ch) for ch in received.strip() if ch in '01']
    if len(bits) != len(received.strip()):
        raise click.BadParameter('must contain only 0 and 1', param_hint='--y')

    if spec_path:
        code, metadata = load_code_spec(spec_path)
        p = metadata['p'] if metadata['p'] is not None else channel.flip_probability
        result = experiment_service.decode_with(code, p, bits, width)
    elif steps is None:
        raise click.UsageError('Give --spec or --steps')
    else:
        result = experiment_service.decode(kernel, depth, steps, channel.flip_probability, rate, bits, width)

    click.echo('u_hat: ' + ''.join(str(bit) for bit in result['u_hat']))
    click.echo('message: ' + ''.join(str(bit) for bit in result['message']))


if __name__ == '__main__':
    cli()
