"""
Services package for the polar code toolkit.
Contains the service class shared by the command line and the web API.
"""
