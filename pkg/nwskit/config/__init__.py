"""
Configuration package for the NWS toolkit.
"""

from .settings import *
