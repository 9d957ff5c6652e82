"""
Core package: orchestration of batch verification runs.
"""

from .runner import VerificationRunner, MatchingInstance, FamilyResult, MATCHING_INSTANCES
