"""
Nonclassical (conditional) symmetries Q = ∂t + ξ∂x + η∂u of the gauged
equation u_t = u_xx − c(t)u³.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from nwskit.config import (
    DEFAULT_SEED, ZERO_TEST_TOL, ZERO_TEST_TRIALS, U_BOX,
    NONCLASSICAL_T_BOX, NONCLASSICAL_X_BOX,
)
from nwskit.expr import (
    Expr, Num, Pole, ONE, T, X, U, as_expr, differentiate, evaluate, exp,
    tan, tanh, coth, zero_test_report,
)
from nwskit.models import Solution, VectorField
from .lie import CaseTag, ClassificationCase

# Configure logging
logger = logging.getLogger(__name__)

Box = Mapping[str, Tuple[float, float]]


def _d(e: Expr, *names: str) -> Expr:
    for name in names:
        e = differentiate(e, name)
    return e


def determining_equations(xi: Expr, eta: Expr, c: Expr) -> List[Expr]:
    """
    Determining equations of Q = ∂t + ξ∂x + η∂u for u_t = u_xx − c(t)u³.

    Returns:
        Four expressions in (t, x, u) that vanish identically iff Q is a
        nonclassical symmetry.
    """
    xi, eta, c = as_expr(xi), as_expr(eta), as_expr(c)
    u2, u3 = U ** Num(2.0), U ** Num(3.0)
    xi_x, xi_u = _d(xi, "x"), _d(xi, "u")
    return [
        _d(xi, "u", "u"),
        _d(eta, "u", "u") - Num(2.0) * (_d(xi, "x", "u") - xi * xi_u),
        (_d(eta, "t") - _d(eta, "x", "x") + Num(2.0) * xi_x * eta
         + (Num(2.0) * xi_x - _d(eta, "u")) * c * u3
         + Num(3.0) * eta * c * u2
         + _d(c, "t") * u3),
        (_d(xi, "t") - _d(xi, "x", "x") + Num(2.0) * xi * xi_x
         - Num(2.0) * xi_u * eta + Num(2.0) * _d(eta, "x", "u")
         - Num(3.0) * xi_u * c * u3),
    ]


@dataclass
class EquationVerdict:
    index: int
    max_scaled_residual: float
    verdict: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "max_scaled_residual": self.max_scaled_residual,
            "verdict": "pass" if self.verdict else "fail",
        }


@dataclass
class NonclassicalReport:
    """Per-equation zero-test outcome of a candidate operator."""
    passed: bool
    equations: List[EquationVerdict] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"pass": self.passed, "equations": [e.to_dict() for e in self.equations]}


def default_box() -> Dict[str, Tuple[float, float]]:
    return {"t": NONCLASSICAL_T_BOX, "x": NONCLASSICAL_X_BOX, "u": U_BOX}


def _verdicts(exprs: List[Expr], box: Box, tol: float, seed: int) -> NonclassicalReport:
    verdicts = []
    for i, e in enumerate(exprs, start=1):
        report = zero_test_report(e, box, ZERO_TEST_TRIALS, tol, seed)
        verdicts.append(EquationVerdict(i, report.max_scaled, report.is_zero))
    return NonclassicalReport(all(v.verdict for v in verdicts), verdicts)


def verify_nonclassical(xi: Expr, eta: Expr, c: Expr, box: Optional[Box] = None,
                        tol: float = ZERO_TEST_TOL, seed: int = DEFAULT_SEED) -> NonclassicalReport:
    """
    Zero-test the determining equations of Q = ∂t + ξ∂x + η∂u.

    Args:
        xi: ξ(t, x, u).
        eta: η(t, x, u).
        c: c(t) of the gauged equation.
        box: Sampling box over t, x, u (default: t ∈ [0, 1], x ∈ [0.2, 2.5], u ∈ [0.1, 2]).

    Returns:
        A NonclassicalReport; it passes iff all four equations vanish.

    Raises:
        ZeroTestInconclusive: If an equation is pole-dominated on the box.
    """
    report = _verdicts(determining_equations(xi, eta, c), box or default_box(), tol, seed)
    logger.info(f"Nonclassical check: {'pass' if report.passed else 'fail'} "
                f"{[round(v.max_scaled_residual, 12) for v in report.equations]}")
    return report


def case_two_operator(g: Expr, c: Expr) -> VectorField:
    """Q = ∂t + g(t, x)∂x + (−g_x − ½ċ/c)u∂u, the operators linear in u."""
    g, c = as_expr(g), as_expr(c)
    h = -_d(g, "x") - Num(0.5) * _d(c, "t") / c
    return VectorField(ONE, g, h * U, "linear")


def case_two_residuals(g: Expr, c: Expr) -> List[Expr]:
    """
    Remaining conditions on g(t, x) for the linear-in-u operators:
    g_t + 2gg_x − 3g_xx = 0 and
    g_tx + 2g_x² − g_xxx + (ċ/c)g_x + ½(ċ/c)_t = 0.
    """
    g, c = as_expr(g), as_expr(c)
    g_x = _d(g, "x")
    r = _d(c, "t") / c
    return [
        _d(g, "t") + Num(2.0) * g * g_x - Num(3.0) * _d(g_x, "x"),
        (_d(g_x, "t") + Num(2.0) * g_x * g_x - _d(g_x, "x", "x")
         + r * g_x + Num(0.5) * _d(r, "t")),
    ]


def verify_case_two(g: Expr, c: Expr, box: Optional[Box] = None,
                    tol: float = ZERO_TEST_TOL, seed: int = DEFAULT_SEED) -> NonclassicalReport:
    box = dict(box or default_box())
    box.pop("u", None)
    return _verdicts(case_two_residuals(g, c), box, tol, seed)


@dataclass(frozen=True)
class NonclassicalOperator:
    """A catalog operator together with the c(t) it is valid for."""
    name: str
    vector_field: VectorField
    c: Expr

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, **self.vector_field.to_dict(), "c": self.c.text()}


def _selector(selector: Union[ClassificationCase, Tuple[CaseTag, Dict[str, float]]]):
    if isinstance(selector, ClassificationCase):
        return selector.tag, selector.params
    return selector


def nonclassical_catalog(selector: Union[ClassificationCase, Tuple[CaseTag, Dict[str, float]]]
                         ) -> List[NonclassicalOperator]:
    """
    Known nonclassical operators for a gauged Lie case.

    Exponential c = μe^{σt} yields the polynomial-in-u operator (μ > 0) and the
    tanh/coth pair (σ > 0) or the tan operator (σ < 0); constant c = μ yields
    the rational operator. Other cases yield nothing.
    """
    tag, params = _selector(selector)
    ops: List[NonclassicalOperator] = []

    if tag is CaseTag.CONSTANT:
        mu = Num(params["mu"])
        ops.append(NonclassicalOperator(
            "X2", VectorField(ONE, Num(-3.0) / X, Num(-3.0) * U / X ** Num(2.0), "X2"), mu,
        ))

    elif tag is CaseTag.EXPONENTIAL:
        sigma, mu = params["sigma"], params["mu"]
        c = Num(mu) * exp(Num(sigma) * T)
        if mu > 0:
            alpha = sigma / 4.0
            beta = 3.0 * math.sqrt(mu / 2.0)
            growth = exp(Num(2.0 * alpha) * T)
            xi = Num(beta) * growth * U
            eta = (Num(alpha) - Num(beta * beta / 3.0) * growth * growth * U ** Num(2.0)) * U
            ops.append(NonclassicalOperator("X1", VectorField(ONE, xi, eta, "X1"), c))
        if sigma > 0:
            s = math.sqrt(sigma)
            arg = Num(s / 2.0) * X
            for name, fn in (("X3", tanh), ("X4", coth)):
                f = fn(arg)
                ops.append(NonclassicalOperator(name, VectorField(
                    ONE,
                    Num(-1.5 * s) * f,
                    Num(-0.75 * sigma) * (f ** Num(2.0) - Num(1.0 / 3.0)) * U,
                    name,
                ), c))
        elif sigma < 0:
            s = math.sqrt(-sigma)
            f = tan(Num(s / 2.0) * X)
            ops.append(NonclassicalOperator("X5", VectorField(
                ONE,
                Num(1.5 * s) * f,
                Num(0.75 * sigma) * (f ** Num(2.0) + Num(1.0 / 3.0)) * U,
                "X5",
            ), c))

    return ops


def invariant_surface_residual(v: VectorField, s: Solution, at: Tuple[float, float]) -> Union[float, Pole]:
    """
    τu_t + ξu_x − η on a solution at a point; zero iff the solution is
    invariant under v there.
    """
    t, x = at
    jet = s.jet(t, x)
    if isinstance(jet, Pole):
        return jet
    env = {"t": t, "x": x, "u": jet.u}
    values = [evaluate(e, env) for e in (v.tau, v.xi, v.eta)]
    for value in values:
        if isinstance(value, Pole):
            return value
    tau, xi, eta = values
    return tau * jet.u_t + xi * jet.u_x - eta
