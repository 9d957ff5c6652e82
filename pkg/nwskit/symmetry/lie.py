"""
Lie symmetry classification of u_t = a²u_xx + bu − cu³.

The classifying equation (k1 t + k2)c_t + (k1 + 2k4)c = 0 admits extensions
only for power, exponential and constant c. The case is decided from
r = c_T / c by successive zero tests: r ≡ 0, r_T ≡ 0, (1/r)_T ≡ const.
For full triples the same tests run on the gauged weight c·exp(2∫b)/a² with
T = ∫a² dt.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from nwskit.config import (
    DEFAULT_SEED, ZERO_TEST_TOL, ZERO_TEST_TRIALS, U_BOX, JET_BOX, X_BOX,
)
from nwskit.exceptions import PatternMismatchError, PoleEncountered
from nwskit.expr import (
    Expr, Num, Var, Pole, ONE, ZERO, T, X, U, as_expr, differentiate, evaluate, exp,
    zero_test_report, ZeroTestReport,
)
from nwskit.models import CoefficientTriple, PDEInstance, VectorField
from nwskit.numerics import integral_expr

# Configure logging
logger = logging.getLogger(__name__)

Interval = Tuple[float, float]

U_X, U_XX, U_XXX = Var("u_x"), Var("u_xx"), Var("u_xxx")


class CaseTag(enum.Enum):
    ARBITRARY = "Arbitrary"
    POWER = "Power"
    EXPONENTIAL = "Exponential"
    CONSTANT = "Constant"


@dataclass
class ClassificationCase:
    """
    Lie symmetry case of a coefficient c(t) (or of a full triple).

    Power: c = μ(γT + δ)^ρ, Exponential: c = μe^{σT}, Constant: c = μ, where
    T = t in the gauged class and T = ∫a² dt (based at t_ref) otherwise.
    """
    tag: CaseTag
    params: Dict[str, float]
    basis: List[VectorField]
    t_ref: float = 0.0
    gauged: bool = True

    def reconstruct(self, T_value: float) -> float:
        """The (gauged) coefficient predicted by the case parameters at T."""
        p = self.params
        if self.tag is CaseTag.CONSTANT:
            return p["mu"]
        if self.tag is CaseTag.EXPONENTIAL:
            return p["mu"] * math.exp(p["sigma"] * T_value)
        if self.tag is CaseTag.POWER:
            return p["mu"] * (p["gamma"] * T_value + p["delta"]) ** p["rho"]
        raise ValueError("Arbitrary case has no parametric form")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tag": self.tag.value,
            **{k: v for k, v in sorted(self.params.items())},
            "basis": [v.to_dict() for v in self.basis],
        }


def _zero(e: Expr, interval: Interval, tol: float, seed: int) -> ZeroTestReport:
    return zero_test_report(e, {"t": interval}, ZERO_TEST_TRIALS, tol, seed)


def _at(e: Expr, t: float) -> float:
    v = evaluate(e, {"t": t})
    if isinstance(v, Pole):
        raise PoleEncountered(v.node)
    return v


def gauged_basis(tag: CaseTag, params: Dict[str, float]) -> List[VectorField]:
    """Basis of the maximal Lie invariance algebra for a = 1, b = 0."""
    basis = [VectorField(ZERO, ONE, ZERO, "∂x")]
    if tag is CaseTag.POWER:
        g, d, rho = Num(params["gamma"]), Num(params["delta"]), params["rho"]
        basis.append(VectorField(
            Num(2.0) * (g * T + d), g * X, Num(-(rho + 1.0)) * g * U,
            "dilation",
        ))
    elif tag is CaseTag.EXPONENTIAL:
        basis.append(VectorField(Num(2.0), ZERO, Num(-params["sigma"]) * U, "shift"))
    elif tag is CaseTag.CONSTANT:
        basis.append(VectorField(ONE, ZERO, ZERO, "∂t"))
        basis.append(VectorField(Num(2.0) * T, X, -U, "dilation"))
    return basis


def _classify_weight(w: Expr, D: Callable[[Expr], Expr], T_expr: Expr, interval: Interval,
                     t_ref: float, tol: float, seed: int) -> Tuple[CaseTag, Dict[str, float]]:
    r = D(w) / w
    if _zero(r, interval, tol, seed).is_zero:
        return CaseTag.CONSTANT, {"mu": _at(w, t_ref)}

    T_ref = _at(T_expr, t_ref)
    if _zero(D(r), interval, tol, seed).is_zero:
        sigma = _at(r, t_ref)
        return CaseTag.EXPONENTIAL, {"sigma": sigma, "mu": _at(w, t_ref) * math.exp(-sigma * T_ref)}

    q = ONE / r
    dq = D(q)
    try:
        slope = _at(dq, t_ref)
    except PoleEncountered:
        return CaseTag.ARBITRARY, {}
    if slope != 0.0 and _zero(dq - Num(slope), interval, tol, seed).is_zero:
        rho = 1.0 / slope
        # γT + δ = γρq with γ = ±1 chosen so that the base is positive
        base_ref = rho * _at(q, t_ref)
        gamma = 1.0 if base_ref > 0 else -1.0
        delta = gamma * base_ref - gamma * T_ref
        mu = _at(w, t_ref) / abs(base_ref) ** rho
        return CaseTag.POWER, {"mu": mu, "gamma": gamma, "delta": delta, "rho": rho}

    return CaseTag.ARBITRARY, {}


def classify_lie(c: Expr, interval: Interval, triple: Optional[CoefficientTriple] = None,
                 tol: float = ZERO_TEST_TOL, seed: int = DEFAULT_SEED) -> ClassificationCase:
    """
    Classify the Lie symmetries determined by c(t).

    Args:
        c: Coefficient of the cubic term (gauged class a = 1, b = 0).
        interval: Working t-interval.
        triple: Optional full triple; classification then runs on
            c·exp(2∫b)/a² in T = ∫a² dt and the basis follows the ungauged list.
        tol: Zero-test tolerance.
        seed: Zero-test seed.

    Returns:
        The ClassificationCase.

    Raises:
        ZeroTestInconclusive: If zero tests are pole-dominated.
    """
    c = as_expr(c)
    t_ref = 0.5 * (interval[0] + interval[1]) if triple is None else triple.t_ref

    if triple is None:
        tag, params = _classify_weight(c, lambda e: differentiate(e, "t"), T,
                                       interval, t_ref, tol, seed)
        basis = gauged_basis(tag, params)
        case = ClassificationCase(tag, params, basis, t_ref, gauged=True)
    else:
        a2 = triple.a * triple.a
        int_b = integral_expr(triple.b, t_ref)
        w = triple.c / a2 if int_b.is_number(0.0) else triple.c * exp(Num(2.0) * int_b) / a2
        T_expr = integral_expr(a2, t_ref)
        tag, params = _classify_weight(w, lambda e: differentiate(e, "t") / a2, T_expr,
                                       interval, t_ref, tol, seed)
        case = ClassificationCase(tag, params, [], t_ref, gauged=False)
        case.basis = lie_basis_ungauged(triple, case) if tag is not CaseTag.ARBITRARY else gauged_basis(tag, params)

    logger.info(f"Lie classification: {case.tag.value} {case.params}")
    return case


def table_pattern(triple: CoefficientTriple, case: ClassificationCase) -> Expr:
    """c(t) predicted by the ungauged classification row for the triple's a and b."""
    t_ref = triple.t_ref
    a2 = triple.a * triple.a
    int_b = integral_expr(triple.b, t_ref)
    T_expr = integral_expr(a2, t_ref)
    p = case.params
    base = Num(p["mu"]) * a2
    if not int_b.is_number(0.0):
        base = base * exp(Num(-2.0) * int_b)
    if case.tag is CaseTag.CONSTANT:
        return base
    if case.tag is CaseTag.EXPONENTIAL:
        return base * exp(Num(p["sigma"]) * T_expr)
    if case.tag is CaseTag.POWER:
        return base * (Num(p["gamma"]) * T_expr + Num(p["delta"])) ** Num(p["rho"])
    raise PatternMismatchError("Arbitrary case has no pattern")


def lie_basis_ungauged(triple: CoefficientTriple, case: ClassificationCase,
                       tol: float = ZERO_TEST_TOL, seed: int = DEFAULT_SEED) -> List[VectorField]:
    """
    Lie symmetry basis of a triple without gauging, T = ∫a² dt at t_ref.

    Args:
        triple: The triple (a, b, c).
        case: Its classification (parameters relative to T based at t_ref).

    Returns:
        The basis vector fields.

    Raises:
        PatternMismatchError: If c is not of the row's form for the given a, b.
    """
    if case.tag is CaseTag.ARBITRARY:
        return [VectorField(ZERO, ONE, ZERO, "∂x")]

    pattern = table_pattern(triple, case)
    report = _zero(triple.c / pattern - ONE, triple.t_interval, tol, seed)
    if not report.is_zero:
        raise PatternMismatchError(
            f"c is not of the {case.tag.value} form for the given a, b "
            f"(max scaled deviation {report.max_scaled:.3g})"
        )

    a2 = triple.a * triple.a
    b = triple.b
    T_expr = integral_expr(a2, triple.t_ref)
    p = case.params
    basis = [VectorField(ZERO, ONE, ZERO, "∂x")]
    if case.tag is CaseTag.POWER:
        g, d, rho = Num(p["gamma"]), Num(p["delta"]), p["rho"]
        lin = g * T_expr + d
        basis.append(VectorField(
            Num(2.0) * lin / a2,
            g * X,
            (Num(2.0) * lin * b / a2 - Num(rho + 1.0) * g) * U,
            "dilation",
        ))
    elif case.tag is CaseTag.EXPONENTIAL:
        basis.append(VectorField(
            Num(2.0) / a2, ZERO, (Num(2.0) * b / a2 - Num(p["sigma"])) * U, "shift",
        ))
    else:
        basis.append(VectorField(ONE / a2, ZERO, b / a2 * U, "shift"))
        basis.append(VectorField(
            Num(2.0) * T_expr / a2, X, (Num(2.0) * T_expr * b / a2 - ONE) * U, "dilation",
        ))
    return basis


def total_x(f: Expr) -> Expr:
    """D_x f = f_x + u_x f_u + u_xx f_{u_x} + u_xxx f_{u_xx}."""
    out = differentiate(f, "x") + U_X * differentiate(f, "u")
    if f.depends_on("u_x"):
        out = out + U_XX * differentiate(f, "u_x")
    if f.depends_on("u_xx"):
        out = out + U_XXX * differentiate(f, "u_xx")
    return out


def invariance_expression(p: PDEInstance, v: VectorField) -> Expr:
    """
    Second prolongation of v applied to u_t − a²u_xx − bu + cu³ with u_t
    eliminated, as an expression in (t, x, u, u_x, u_xx, u_xxx).
    """
    a, b, c = p.coeffs.a, p.coeffs.b, p.coeffs.c
    tau, xi, eta = v.tau, v.xi, v.eta
    F = a * a * U_XX + b * U - c * U ** Num(3.0)

    def total_t(f: Expr) -> Expr:
        # f depends on (t, x, u) only
        return differentiate(f, "t") + F * differentiate(f, "u")

    eta_t = total_t(eta) - F * total_t(tau) - U_X * total_t(xi)
    eta_x = total_x(eta) - F * total_x(tau) - U_X * total_x(xi)
    eta_xx = total_x(eta_x) - total_x(F) * total_x(tau) - U_XX * total_x(xi)

    return (eta_t - a * a * eta_xx
            - Num(2.0) * a * differentiate(a, "t") * tau * U_XX
            - differentiate(b, "t") * tau * U
            - b * eta
            + differentiate(c, "t") * tau * U ** Num(3.0)
            + Num(3.0) * c * U ** Num(2.0) * eta)


def lie_invariance_report(p: PDEInstance, v: VectorField, tol: float = ZERO_TEST_TOL,
                          seed: int = DEFAULT_SEED) -> ZeroTestReport:
    box = {
        "t": p.t_interval,
        "x": X_BOX,
        "u": U_BOX,
        "u_x": JET_BOX,
        "u_xx": JET_BOX,
        "u_xxx": JET_BOX,
    }
    return zero_test_report(invariance_expression(p, v), box, ZERO_TEST_TRIALS, tol, seed)


def check_lie_invariance(p: PDEInstance, v: VectorField, tol: float = ZERO_TEST_TOL,
                         seed: int = DEFAULT_SEED) -> bool:
    """
    Whether v generates Lie point symmetries of the equation.

    Raises:
        ZeroTestInconclusive: If the zero test is pole-dominated.
    """
    report = lie_invariance_report(p, v, tol, seed)
    logger.debug(f"Lie invariance of {v}: max scaled {report.max_scaled:.3g}")
    return bool(report.is_zero)
