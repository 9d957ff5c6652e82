"""
Command-line interface package.
"""

from .commands import run, build_parser, RunConfig, EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR
