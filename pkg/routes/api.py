"""
API routes for the polar code toolkit.
Handles REST API endpoints for kernels, complexity, profiles, decoding and simulation runs.
"""
import logging
from flask import Blueprint, request, jsonify, send_file
from config import SimulationConfig
from polar.errors import PolarError
from services.experiments import experiment_service
from utils import (
    json_response, validate_code_request, validate_received_word, validate_trials, validate_width,
)

logger = logging.getLogger(__name__)

api_bp = Blueprint('api', __name__)


@api_bp.errorhandler(PolarError)
def handle_polar_error(error):
    """Invalid parameters that only the library could detect"""
    return jsonify({
        'success': False,
        'error': str(error)
    }), 400


@api_bp.errorhandler(Exception)
def handle_unexpected_error(error):
    """Anything else is reported as a server error"""
    logger.exception('Unhandled API error')
    return jsonify({
        'success': False,
        'error': f'Internal error: {str(error)}'
    }), 500


def _bad_request(message):
    return jsonify({
        'success': False,
        'error': message
    }), 400


@api_bp.route('/kernels')
def get_kernels():
    """API endpoint to list the built-in kernels"""
    return jsonify({
        'success': True,
        'kernels': experiment_service.list_kernels()
    })


@api_bp.route('/complexity', methods=['POST'])
def complexity():
    """API endpoint for gate counts and decoding cost of a circuit"""
    ok, error, params = validate_code_request(request.get_json(silent=True), SimulationConfig.MAX_API_LENGTH)
    if not ok:
        return _bad_request(error)

    result = experiment_service.complexity(params['kernel'], params['depth'], params['steps'])
    return json_response({'success': True, **result})


@api_bp.route('/profile', methods=['POST'])
def profile():
    """API endpoint for the undetected-error profile and frozen set of a code"""
    ok, error, params = validate_code_request(request.get_json(silent=True), SimulationConfig.MAX_API_LENGTH)
    if not ok:
        return _bad_request(error)

    result = experiment_service.profile(**params)
    return json_response({'success': True, **result})


@api_bp.route('/decode', methods=['POST'])
def decode():
    """API endpoint for successive cancellation decoding of one received word"""
    data = request.get_json(silent=True)
    ok, error, params = validate_code_request(data, SimulationConfig.MAX_API_LENGTH)
    if not ok:
        return _bad_request(error)

    if data.get('y') is None:
        return _bad_request('Received word y is required')

    length = params['kernel'].breadth ** params['steps']
    ok, error, bits = validate_received_word(data['y'], length)
    if not ok:
        return _bad_request(error)

    ok, error, width = validate_width(data.get('width'))
    if not ok:
        return _bad_request(error)

    result = experiment_service.decode(**params, y=bits, width=width)
    return json_response({'success': True, **result})


@api_bp.route('/simulations', methods=['POST'])
def create_simulation():
    """API endpoint to run a Monte Carlo simulation and store it"""
    data = request.get_json(silent=True)
    ok, error, params = validate_code_request(data, SimulationConfig.MAX_API_LENGTH)
    if not ok:
        return _bad_request(error)

    ok, error, trials = validate_trials(data.get('trials', 1000), SimulationConfig.MAX_API_TRIALS)
    if not ok:
        return _bad_request(error)

    seed = data.get('seed')
    if seed is not None:
        try:
            seed = int(seed)
        except (ValueError, TypeError):
            return _bad_request('Seed must be a valid integer')
        if seed < 0:
            return _bad_request('Seed must be nonnegative')

    result = experiment_service.simulate(**params, trials=trials, seed=seed)
    return json_response({
        'success': True,
        'message': 'Simulation stored successfully',
        'result_id': result['run']['id'],
        'data': result
    })


@api_bp.route('/simulations', methods=['GET'])
def get_simulations():
    """API endpoint to retrieve stored runs"""
    page = request.args.get('page', 1, type=int)
    per_page = request.args.get('per_page', 10, type=int)
    kind = request.args.get('kind', None)

    runs = experiment_service.list_runs(page, per_page, kind)
    return jsonify({'success': True, **runs})


@api_bp.route('/simulations/export', methods=['GET'])
def export_simulations():
    """API endpoint to export stored runs as an Excel file"""
    output = experiment_service.export_runs_xlsx()
    if output is None:
        return jsonify({'success': False, 'error': 'No simulation runs to export'}), 404

    return send_file(
        output,
        mimetype='application/vnd.openxmlformats-officedocument.spreadsheetml.sheet',
        as_attachment=True,
        download_name=experiment_service.export_filename()
    )


@api_bp.route('/simulations/<int:run_id>', methods=['DELETE'])
def delete_simulation(run_id):
    """API endpoint to delete a stored run"""
    if not experiment_service.delete_run(run_id):
        return jsonify({'success': False, 'error': 'Simulation run not found'}), 404

    return jsonify({'success': True, 'message': 'Simulation run deleted successfully'})
