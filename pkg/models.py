"""
Database models for the polar code toolkit.
Stores Monte Carlo and detection results so runs can be listed and exported.
"""
import logging
from datetime import datetime, timezone
from flask_sqlalchemy import SQLAlchemy

logger = logging.getLogger(__name__)

# Initialize SQLAlchemy
db = SQLAlchemy()


class SimulationRun(db.Model):
    """Model for storing one simulated or profiled code"""
    __tablename__ = 'simulation_runs'

    id = db.Column(db.Integer, primary_key=True)
    kind = db.Column(db.String(20), nullable=False)  # simulate/detect
    kernel = db.Column(db.String(50), nullable=False)
    breadth = db.Column(db.Integer, nullable=False)
    depth = db.Column(db.Integer, nullable=False)
    steps = db.Column(db.Integer, nullable=False)
    n = db.Column(db.Integer, nullable=False)
    k = db.Column(db.Integer, nullable=False)
    p = db.Column(db.Float, nullable=False)
    rate = db.Column(db.String(20), nullable=False)  # exact fraction, e.g. 1/3
    trials = db.Column(db.Integer, nullable=True)
    seed = db.Column(db.BigInteger, nullable=True)
    bit_errors = db.Column(db.Integer, nullable=True)
    frame_errors = db.Column(db.Integer, nullable=True)
    ber = db.Column(db.Float, nullable=True)
    fer = db.Column(db.Float, nullable=True)
    ci95_halfwidth = db.Column(db.Float, nullable=True)
    p_undetected = db.Column(db.Float, nullable=True)
    c_total = db.Column(db.Float, nullable=False)
    created_at = db.Column(db.DateTime, default=lambda: datetime.now(timezone.utc))

    def to_dict(self):
        """Convert model to dictionary for JSON serialization"""
        return {
            'id': self.id,
            'kind': self.kind,
            'kernel': self.kernel,
            'breadth': self.breadth,
            'depth': self.depth,
            'steps': self.steps,
            'N': self.n,
            'K': self.k,
            'p': self.p,
            'rate': self.rate,
            'trials': self.trials,
            'seed': self.seed,
            'bit_errors': self.bit_errors,
            'frame_errors': self.frame_errors,
            'ber': self.ber,
            'fer': self.fer,
            'ci95_halfwidth': self.ci95_halfwidth,
            'p_undetected': self.p_undetected,
            'c_total': self.c_total,
            'created_at': self.created_at.isoformat() if self.created_at else None
        }

    def __repr__(self):
        return f'<SimulationRun {self.id}: {self.kind} {self.kernel} d={self.depth} l={self.steps}>'


def init_db(app):
    """Initialize database with app context"""
    db.init_app(app)

    with app.app_context():
        db.create_all()
        logger.info('Database tables ready at %s', app.config['SQLALCHEMY_DATABASE_URI'].split('://')[0])
