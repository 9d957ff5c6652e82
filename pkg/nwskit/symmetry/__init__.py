"""
Symmetry package: Lie classification of the class and nonclassical
operators of the gauged equation.
"""

from .lie import (
    CaseTag, ClassificationCase, classify_lie, gauged_basis, lie_basis_ungauged,
    table_pattern, invariance_expression, lie_invariance_report, check_lie_invariance,
)
from .nonclassical import (
    EquationVerdict, NonclassicalReport, NonclassicalOperator, default_box, determining_equations,
    verify_nonclassical, case_two_operator, case_two_residuals, verify_case_two,
    nonclassical_catalog, invariant_surface_residual,
)
