"""
Equivalence package: point transformations of the class, the gauge to
a = 1, b = 0, and the reducibility criterion with its reducing map.
"""

from .transforms import (
    EquivTransform, ReducibilityResult,
    source_time_coefficients, push_coefficients, gauge_transform,
    lambda_expression, reducibility_lambda, reducible_triple,
    to_constant_transform, pull_solution,
)
