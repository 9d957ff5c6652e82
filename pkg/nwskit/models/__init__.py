"""
Models package: equations of the class, vector fields, closed-form solutions
as 2-jets, and the PDE residual operator.
"""

from .jets import Jet
from .models import (
    LambdaSign, CoefficientTriple, PDEInstance, VectorField, Solution, Grid,
    ResidualReport, interior_samples, check_sign_definite, zero_solution,
    expression_solution,
)
from .residual import assemble, residual, residual_stats, sample
