"""
Polar code toolkit Flask application
Serves code construction, decoding and Monte Carlo runs over a JSON API.
"""
import logging
from flask import Flask
from config import config, SimulationConfig
from models import init_db
from routes import register_blueprints
from utils import configure_logging, get_environment_type

logger = logging.getLogger(__name__)


def create_app(config_name=None):
    """Application factory function"""
    if config_name is None:
        config_name = get_environment_type()

    configure_logging(SimulationConfig.LOG_LEVEL)

    app = Flask(__name__)

    # Load configuration
    app.config.from_object(config[config_name])
    app.config['SQLALCHEMY_DATABASE_URI'] = config[config_name].get_database_url()

    logger.info('Starting polar toolkit in %s mode', config_name)

    # Initialize extensions
    init_db(app)

    # Register blueprints
    register_blueprints(app)

    return app


if __name__ == '__main__':
    create_app().run(debug=True, host='0.0.0.0', port=5000)
