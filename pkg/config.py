"""
Configuration module for the polar code toolkit.
Handles database connections, environment variables, and simulation settings.
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

DEFAULT_DATABASE_URL = 'sqlite:///polar_runs.db'


class Config:
    """Base configuration class"""
    SECRET_KEY = os.environ.get('SECRET_KEY', 'polar-toolkit-dev-key')
    SQLALCHEMY_TRACK_MODIFICATIONS = False
    JSON_SORT_KEYS = False

    SQLALCHEMY_ENGINE_OPTIONS = {
        'pool_pre_ping': True,
        'echo': False
    }

    @staticmethod
    def get_database_url():
        """Database URL from DATABASE_URL, falling back to a local SQLite file"""
        return os.environ.get('DATABASE_URL', DEFAULT_DATABASE_URL)


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True

    @staticmethod
    def get_database_url():
        """Testing always runs against an in-memory database"""
        return 'sqlite:///:memory:'


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


class SimulationConfig:
    """Monte Carlo and output settings"""
    BATCH_SIZE = int(os.environ.get('POLAR_BATCH_SIZE', 512))
    WORKERS = int(os.environ.get('POLAR_WORKERS', 1))
    DEFAULT_SEED = int(os.environ.get('POLAR_DEFAULT_SEED', 20170529))
    MAX_API_TRIALS = int(os.environ.get('POLAR_MAX_API_TRIALS', 20000))
    LOG_LEVEL = os.environ.get('POLAR_LOG_LEVEL', 'INFO')
    MAX_API_LENGTH = int(os.environ.get('POLAR_MAX_API_LENGTH', 4096))
    CODE_CACHE_SIZE = int(os.environ.get('POLAR_CODE_CACHE_SIZE', 32))
