"""
NWS toolkit package.

Symbolic-numeric analysis of variable-coefficient Newell-Whitehead-Segel
equations u_t = a²(t)u_xx + b(t)u − c(t)u³: reducibility to constant
coefficients, Lie and nonclassical symmetries, closed-form solution families
and their numerical cross-validation.
"""

__version__ = "0.1.0"
