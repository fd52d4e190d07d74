"""
Experiment service module.
Builds codes, profiles them, decodes received words and runs Monte Carlo
simulations; stored runs go through the SimulationRun model.
"""
import logging
from datetime import datetime
from fractions import Fraction
from functools import lru_cache
from io import BytesIO

import pandas as pd

from config import SimulationConfig
from models import db, SimulationRun
from polar.channel import bsc
from polar.circuit import build_circuit, complexity_estimate, optimal_width
from polar.decoder import sc_decode
from polar.harness import autosize_columns, build_code, run_montecarlo
from polar.kernel import KERNELS, is_polarizing
from polar.selection import total_undetected

logger = logging.getLogger(__name__)

EXPORT_COLUMNS = {
    'id': 'ID',
    'kind': 'Kind',
    'kernel': 'Kernel',
    'depth': 'Depth',
    'steps': 'Steps',
    'N': 'N',
    'K': 'K',
    'p': 'Flip Probability',
    'rate': 'Rate',
    'trials': 'Trials',
    'seed': 'Seed',
    'ber': 'BER',
    'fer': 'FER',
    'ci95_halfwidth': 'FER 95% Half-width',
    'p_undetected': 'Undetected Error Probability',
    'c_total': 'Decoding Cost',
    'created_at': 'Date Created',
}


class ExperimentService:
    """Service class shared by the web API and the command line"""

    def __init__(self):
        self.batch_size = SimulationConfig.BATCH_SIZE
        self.workers = SimulationConfig.WORKERS
        self.default_seed = SimulationConfig.DEFAULT_SEED
        self._cached_code = lru_cache(maxsize=SimulationConfig.CODE_CACHE_SIZE)(self._build_code)

    def list_kernels(self):
        """Built-in kernels with their matrices"""
        return [
            {**kernel.to_dict(), 'breadth': kernel.breadth, 'polarizing': is_polarizing(kernel),
             'w_star': optimal_width(kernel.breadth, 1)}
            for kernel in KERNELS.values()
        ]

    def complexity(self, kernel, depth, steps):
        """Gate counts and the cone cost model of one circuit"""
        circuit = build_circuit(kernel, depth, steps)
        estimate = complexity_estimate(kernel.breadth, circuit.depth, circuit.block_length)
        return {
            'circuit': circuit.describe(),
            'gate_counts': circuit.gate_counts(),
            'gate_count': circuit.gate_count(),
            **estimate.to_dict(),
        }

    def get_code(self, kernel, depth, steps, p, rate):
        """Code with the detection-selected frozen set; the most recent codes are cached"""
        return self._cached_code(kernel, int(depth), int(steps), float(p), Fraction(rate))

    def _build_code(self, kernel, depth, steps, p, rate):
        logger.info('Selecting frozen set for %s-d%s-l%s at p=%g, rate %s', kernel.name, depth, steps, p, rate)
        return build_code(kernel, depth, steps, p, rate)

    def profile(self, kernel, depth, steps, p, rate, persist=True):
        """Undetected-error profile and the resulting code"""
        code, profile = self.get_code(kernel, depth, steps, p, rate)
        p_undetected = total_undetected(profile, code.frozen)
        estimate = complexity_estimate(kernel.breadth, code.circuit.depth, code.block_length)

        result = {
            'code': code.to_dict(),
            'profile': [float(value) for value in profile.values],
            'p_undetected': p_undetected,
            'c_total': estimate.c_total,
        }
        if persist:
            run = self._store_run('detect', code, p, rate, estimate.c_total, p_undetected=p_undetected)
            result['run'] = run.to_dict()
        return result

    def decode(self, kernel, depth, steps, p, rate, y, width=None):
        """Successive cancellation decoding of one received word"""
        code, _ = self.get_code(kernel, depth, steps, p, rate)
        return self.decode_with(code, p, y, width)

    def decode_with(self, code, p, y, width=None):
        """Decode with an existing code, e.g. one loaded from a code-spec file"""
        result = sc_decode(code, bsc(p), y, width)
        return {
            'code': code.to_dict(),
            'u_hat': [int(bit) for bit in result.u_hat],
            'message': [int(result.u_hat[i]) for i in code.info_positions],
            'windows': [[window.start, window.stop] for window in result.windows],
            'likelihoods': [vector.table.tolist() for vector in result.window_likelihoods],
            'confidence': result.confidences(),
        }

    def simulate(self, kernel, depth, steps, p, rate, trials, seed=None, width=None, persist=True):
        """Monte Carlo run of one code; the run is stored unless persist is False"""
        seed = self.default_seed if seed is None else int(seed)
        code, profile = self.get_code(kernel, depth, steps, p, rate)
        record = run_montecarlo(code, bsc(p), trials, seed, width,
                                batch_size=self.batch_size, workers=self.workers)
        estimate = complexity_estimate(kernel.breadth, code.circuit.depth, code.block_length)
        logger.info('Simulated %s: ber=%.6g fer=%.6g over %d trials',
                    code.circuit.describe(), record.ber, record.fer, record.trials)

        result = {**record.to_dict(), 'c_total': estimate.c_total}
        if persist:
            run = self._store_run(
                'simulate', code, p, rate, estimate.c_total, record=record,
                p_undetected=total_undetected(profile, code.frozen),
            )
            result['run'] = run.to_dict()
        return result

    def _store_run(self, kind, code, p, rate, c_total, record=None, p_undetected=None):
        circuit = code.circuit
        run = SimulationRun(
            kind=kind,
            kernel=circuit.kernel.name,
            breadth=circuit.breadth,
            depth=circuit.depth,
            steps=circuit.steps,
            n=code.block_length,
            k=code.info_count,
            p=float(p),
            rate=str(rate),
            p_undetected=p_undetected,
            c_total=c_total,
        )
        if record is not None:
            run.trials = record.trials
            run.seed = record.seed
            run.bit_errors = record.bit_errors
            run.frame_errors = record.frame_errors
            run.ber = record.ber
            run.fer = record.fer
            run.ci95_halfwidth = record.ci95_halfwidth

        try:
            db.session.add(run)
            db.session.commit()
        except Exception:
            db.session.rollback()
            logger.exception('Failed to store %s run for %s', kind, circuit.describe())
            raise
        return run

    def list_runs(self, page=1, per_page=10, kind=None):
        """Stored runs, most recent first, with pagination data"""
        query = SimulationRun.query
        if kind:
            query = query.filter(SimulationRun.kind == kind)
        query = query.order_by(SimulationRun.created_at.desc(), SimulationRun.id.desc())
        pagination = query.paginate(page=page, per_page=per_page, error_out=False)
        return {
            'data': [run.to_dict() for run in pagination.items],
            'pagination': {
                'page': page,
                'per_page': per_page,
                'total': pagination.total,
                'pages': pagination.pages,
                'has_next': pagination.has_next,
                'has_prev': pagination.has_prev
            }
        }

    def export_runs_xlsx(self):
        """All stored runs as an in-memory Excel workbook, or None when there are none"""
        runs = SimulationRun.query.order_by(SimulationRun.created_at.desc(), SimulationRun.id.desc()).all()
        if not runs:
            return None

        frame = pd.DataFrame([run.to_dict() for run in runs])[list(EXPORT_COLUMNS)].rename(columns=EXPORT_COLUMNS)
        output = BytesIO()
        with pd.ExcelWriter(output, engine='openpyxl') as writer:
            frame.to_excel(writer, sheet_name='Simulation Runs', index=False)
            autosize_columns(writer.sheets['Simulation Runs'])
        output.seek(0)
        return output

    def export_filename(self):
        return f'simulation_runs_{datetime.now().strftime("%Y%m%d_%H%M%S")}.xlsx'

    def delete_run(self, run_id):
        """Delete one stored run; returns False when it does not exist"""
        run = db.session.get(SimulationRun, run_id)
        if run is None:
            return False
        try:
            db.session.delete(run)
            db.session.commit()
        except Exception:
            db.session.rollback()
            logger.exception('Failed to delete run %s', run_id)
            raise
        return True


# Global experiment service instance
experiment_service = ExperimentService()
