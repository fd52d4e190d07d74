"""
Utility functions for the polar code toolkit.
Contains logging setup, request validation and environment helpers.
"""
import logging
import os

from flask import jsonify, make_response

from polar.channel import bsc
from polar.harness import parse_rate, resolve_kernel

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level='INFO'):
    """Configure root logging once for the CLI and the web app"""
    level = getattr(logging, str(level).upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


def json_response(data, status_code=200):
    """JSON response with an explicit UTF-8 content type"""
    response = make_response(jsonify(data), status_code)
    response.headers['Content-Type'] = 'application/json; charset=utf-8'
    return response


def validate_code_request(data, max_length):
    """Validate the code parameters shared by every API request.

    Codes longer than max_length bits are refused. Returns (ok, error, params)
    with params holding kernel, depth, steps, p and rate.
    """
    if not data:
        return False, 'No data provided', None

    for name in ('kernel', 'depth', 'steps'):
        if data.get(name) in (None, ''):
            return False, f'{name.capitalize()} is required', None

    if str(data['kernel']).startswith('file:'):
        return False, 'Kernel files are not accepted over the API', None

    try:
        params = {
            'kernel': resolve_kernel(str(data['kernel'])),
            'depth': int(data['depth']),
            'steps': int(data['steps']),
            'p': bsc(data.get('p', 0.05)).flip_probability,
            'rate': parse_rate(data.get('rate', '1/3')),
        }
    except (ValueError, TypeError) as exc:
        return False, str(exc), None

    if params['kernel'].breadth ** min(params['steps'], 64) > max_length:
        return False, f'Block length is limited to {max_length} bits', None

    return True, None, params


def validate_trials(value, limit):
    """Validate a Monte Carlo trial count against the API cap"""
    try:
        trials = int(value)
    except (ValueError, TypeError):
        return False, 'Trials must be a valid number', None
    if trials < 1:
        return False, 'Trials must be at least 1', None
    if trials > limit:
        return False, f'Trials are limited to {limit} per request', None
    return True, None, trials


def validate_width(value):
    """Validate an optional decoding window width; None keeps the default"""
    if value is None:
        return True, None, None
    try:
        width = int(value)
    except (ValueError, TypeError):
        return False, 'Width must be a valid integer', None
    if width < 1:
        return False, 'Width must be at least 1', None
    return True, None, width


def validate_received_word(value, length):
    """Validate a received word given as a list of bits or a 0/1 string"""
    if isinstance(value, str):
        value = [ch for ch in value.strip()]
    try:
        bits = [int(bit) for bit in value]
    except (ValueError, TypeError):
        return False, 'Received word must contain only 0 and 1', None
    if any(bit not in (0, 1) for bit in bits):
        return False, 'Received word must contain only 0 and 1', None
    if len(bits) != length:
        return False, f'Received word must have {length} bits, got {len(bits)}', None
    return True, None, bits


def get_environment_type():
    """Determine the current environment type"""
    if os.environ.get('POLAR_ENV') in ('production', 'development', 'testing'):
        return os.environ['POLAR_ENV']
    elif os.environ.get('FLASK_ENV') == 'development':
        return 'development'
    elif os.environ.get('TESTING'):
        return 'testing'
    else:
        return 'development'  # Default to development
