import numpy as np
import pytest
from click.testing import CliRunner

from app import create_app
from models import db
from polar.circuit import build_circuit
from polar.kernel import CNOT, G3


@pytest.fixture
def app():
    app = create_app('testing')
    yield app
    with app.app_context():
        db.session.remove()
        db.drop_all()


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def rng():
    return np.random.default_rng(20170529)


@pytest.fixture
def cp22():
    """Convolutional polar circuit CP(2,2) on 16 wires"""
    return build_circuit(CNOT, 2, 4)


@pytest.fixture
def g3_circuit():
    return build_circuit(G3, 2, 2)
