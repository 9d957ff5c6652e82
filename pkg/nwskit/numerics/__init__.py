"""
Numerics package: adaptive quadrature with memoized antiderivatives,
monotone inversion, and a method-of-lines solver for cross-validation.
"""

from .quadrature import AntiderivativeHandle, antiderivative, integrate, gauss_kronrod_15
from .inversion import invert_monotone
from .calculus import Antiderivative, InverseFunction, integral_expr, inverse_expr
from .mol import NumericField, DormandPrince54, mol_solve, convergence_order, ConvergenceReport
