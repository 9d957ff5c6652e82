"""
Utilities package for the NWS toolkit.
"""

from .logging_utils import setup_logging, log_report
