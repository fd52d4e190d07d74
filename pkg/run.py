#!/usr/bin/env python3
"""
Entry point for gunicorn deployment.
This file builds the Flask application for the WSGI server.
"""

from app import create_app

app = create_app()

if __name__ == "__main__":
    app.run()
