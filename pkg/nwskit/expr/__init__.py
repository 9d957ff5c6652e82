"""
Expression language: parsing, printing, symbolic differentiation, evaluation
with pole markers, and the probabilistic identically-zero test.
"""

from .nodes import (
    Expr, Num, Const, Var, Func, Neg, Add, Sub, Mul, Div, Pow, Pole,
    T, X, U, ZERO, ONE,
    as_expr, add, sub, mul, div, power, neg, func,
    exp, ln, sqrt, sin, cos, tan, sinh, cosh, tanh, coth,
    evaluate, to_text, additive_terms,
)
from .parser import parse, tokenize, DEFAULT_VARS
from .differentiate import differentiate
from .zero_test import ZeroTestReport, zero_test_report, is_identically_zero
