"""
Routes package for the polar code toolkit.
Contains Blueprint definitions for the JSON API.
"""
from .api import api_bp

def register_blueprints(app):
    """Register all blueprints with the Flask app"""
    app.register_blueprint(api_bp, url_prefix='/api')
