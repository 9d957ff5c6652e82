"""
Equivalence transformations t̃ = θ(t), x̃ = δ₁x + δ₂, ũ = φ(t)u of the class
u_t = a²u_xx + bu − cu³, the reducibility criterion, and the gauge and
reducing transformations.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from nwskit.config import NONVANISHING_SAMPLES, QUAD_TOL, ZERO_TEST_TOL, DEFAULT_SEED
from nwskit.exceptions import (
    InvariantViolationError, NotReducibleError, RealValuednessError, PoleEncountered,
)
from nwskit.expr import (
    Expr, Num, Pole, ONE, ZERO, T, as_expr, differentiate, evaluate, exp, sqrt,
    zero_test_report, ZeroTestReport,
)
from nwskit.models import (
    CoefficientTriple, Jet, Solution, check_sign_definite, interior_samples,
)
from nwskit.numerics import integral_expr, inverse_expr

# Configure logging
logger = logging.getLogger(__name__)

Interval = Tuple[float, float]

# |λ| below this (relative to the size of L's terms) is reported as 0
LAMBDA_ZERO_TOL = 1e-10
WITNESS_POINTS = 9
# Samples for the internal check of reducing transformations
CHECK_SAMPLES = 16
CHECK_TOL = 1e-8


def _value(e: Expr, t: float) -> float:
    v = evaluate(e, {"t": t})
    if isinstance(v, Pole):
        raise PoleEncountered(v.node)
    return float(v)


@dataclass(frozen=True)
class EquivTransform:
    """
    t̃ = θ(t), x̃ = δ₁x + δ₂, ũ = φ(t)u on a source t-interval.

    θ must be strictly increasing and φ nonvanishing (sampled check).
    """
    theta: Expr
    delta1: float
    delta2: float
    phi: Expr
    interval: Interval
    label: str = ""
    validate: bool = field(default=True, compare=False)
    theta_t: Expr = field(init=False, compare=False, repr=False)
    phi_t: Expr = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "theta", as_expr(self.theta))
        object.__setattr__(self, "phi", as_expr(self.phi))
        object.__setattr__(self, "delta1", float(self.delta1))
        object.__setattr__(self, "delta2", float(self.delta2))
        if self.delta1 == 0.0 or not math.isfinite(self.delta1):
            raise InvariantViolationError("delta1 must be a nonzero real")
        object.__setattr__(self, "theta_t", differentiate(self.theta, "t"))
        object.__setattr__(self, "phi_t", differentiate(self.phi, "t"))
        if self.validate:
            self.check_on(self.interval)

    def check_on(self, interval: Interval):
        """Sampled invariants: θ_t > 0 and φ ≠ 0 on an interval."""
        if check_sign_definite(self.theta_t, interval, "theta_t") < 0:
            raise InvariantViolationError("theta must be increasing")
        check_sign_definite(self.phi, interval, "phi")

    @classmethod
    def identity(cls, interval: Interval) -> "EquivTransform":
        return cls(T, 1.0, 0.0, ONE, interval, label="identity", validate=False)

    def image_interval(self) -> Interval:
        """θ applied to the source interval (endpoints approached from inside if singular)."""
        lo, hi = self.interval
        inside = interior_samples(self.interval, NONVANISHING_SAMPLES)

        def end(t: float, fallback: float) -> float:
            v = evaluate(self.theta, {"t": t})
            return _value(self.theta, float(fallback)) if isinstance(v, Pole) else v

        return end(lo, inside[0]), end(hi, inside[-1])

    def inverse(self) -> "EquivTransform":
        """The transformation mapping the image equation back."""
        theta_inv = inverse_expr(self.theta, self.interval)
        phi_inv = ONE / self.phi.subs({"t": theta_inv})
        return EquivTransform(
            theta=theta_inv,
            delta1=1.0 / self.delta1,
            delta2=-self.delta2 / self.delta1,
            phi=phi_inv,
            interval=self.image_interval(),
            label=f"inverse({self.label})" if self.label else "inverse",
            validate=self.validate,
        )

    def compose(self, other: "EquivTransform") -> "EquivTransform":
        """Apply self, then other."""
        return EquivTransform(
            theta=other.theta.subs({"t": self.theta}),
            delta1=other.delta1 * self.delta1,
            delta2=other.delta1 * self.delta2 + other.delta2,
            phi=other.phi.subs({"t": self.theta}) * self.phi,
            interval=self.interval,
            label=f"{other.label}∘{self.label}" if self.label and other.label else "",
            validate=self.validate and other.validate,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "theta": self.theta.text(),
            "delta1": self.delta1,
            "delta2": self.delta2,
            "phi": self.phi.text(),
            "interval": list(self.interval),
        }


def source_time_coefficients(g: EquivTransform, c: CoefficientTriple) -> Tuple[Expr, Expr, Expr]:
    """
    Pushed coefficients still written in the source time t.

    ã = |δ₁|a/√θ_t, b̃ = (φb + φ_t)/(φθ_t), c̃ = c/(φ²θ_t). The sign of a is
    kept; only ã² enters the equation.
    """
    a_new = abs(g.delta1) * c.a / sqrt(g.theta_t)
    b_new = (g.phi * c.b + g.phi_t) / (g.phi * g.theta_t)
    c_new = c.c / (g.phi * g.phi * g.theta_t)
    return a_new, b_new, c_new


def push_coefficients(g: EquivTransform, c: CoefficientTriple) -> CoefficientTriple:
    """
    Image of a coefficient triple under an equivalence transformation.

    Args:
        g: The transformation.
        c: The source triple.

    Returns:
        The triple (ã, b̃, c̃) in the new time variable on θ(t_interval).

    Raises:
        InvariantViolationError: If θ_t·φ vanishes on the triple's interval.
    """
    if g.validate and g.interval != c.t_interval:
        g.check_on(c.t_interval)
    a_src, b_src, c_src = source_time_coefficients(g, c)
    t_back = inverse_expr(g.theta, c.t_interval)
    image = EquivTransform(g.theta, g.delta1, g.delta2, g.phi, c.t_interval,
                           validate=False).image_interval()
    new_ref = _value(g.theta, c.t_ref)
    return CoefficientTriple(
        a_src.subs({"t": t_back}),
        b_src.subs({"t": t_back}),
        c_src.subs({"t": t_back}),
        image,
        t_ref=new_ref,
        validate=c.validate,
    )


def gauge_transform(c: CoefficientTriple, tol: float = QUAD_TOL) -> Tuple[EquivTransform, CoefficientTriple]:
    """
    Map a triple to the gauged subclass a = 1, b = 0.

    θ = ∫a²dt, δ₁ = 1, δ₂ = 0, φ = exp(−∫b dt), integrals based at t_ref.

    Returns:
        The transformation and the gauged triple (1, 0, c·exp(2∫b)/a² ∘ θ⁻¹).

    Raises:
        QuadratureError: Propagated from the antiderivatives.
    """
    a_abs_one = isinstance(c.a, Num) and abs(c.a.value) == 1.0
    if a_abs_one and c.b.is_number(0.0):
        logger.info("Triple already gauged")
        return EquivTransform.identity(c.t_interval), c

    theta = integral_expr(c.a * c.a, c.t_ref, tol)
    int_b = integral_expr(c.b, c.t_ref, tol)
    phi = ONE if int_b.is_number(0.0) else exp(-int_b)
    g = EquivTransform(theta, 1.0, 0.0, phi, c.t_interval, label="gauge", validate=c.validate)

    weight = c.c / (c.a * c.a) if int_b.is_number(0.0) else c.c * exp(2 * int_b) / (c.a * c.a)
    t_back = inverse_expr(theta, c.t_interval)
    gauged = CoefficientTriple(
        ONE, ZERO, weight.subs({"t": t_back}),
        g.image_interval(), t_ref=_value(theta, c.t_ref), validate=c.validate,
    )
    return g, gauged


@dataclass
class ReducibilityResult:
    """Outcome of the reducibility criterion."""
    reducible: bool
    lambda_: Optional[float]
    lambda_expr: Expr
    witness_points: List[Tuple[float, float]]
    zero_test: Optional[ZeroTestReport] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reducible": self.reducible,
            "lambda": self.lambda_ if self.reducible else None,
            "samples": [{"t": t, "L": L} for t, L in self.witness_points],
        }


def lambda_expression(c: CoefficientTriple) -> Expr:
    """L(t) = b/a² + ½(c/a²)_t / c."""
    a2 = c.a * c.a
    return c.b / a2 + Num(0.5) * differentiate(c.c / a2, "t") / c.c


def reducibility_lambda(c: CoefficientTriple, tol: float = ZERO_TEST_TOL,
                        seed: int = DEFAULT_SEED) -> ReducibilityResult:
    """
    Decide whether a triple is reducible to the constant-coefficient cubic.

    The triple is reducible iff L(t) is constant, checked by the zero test of
    dL/dt; λ is then reported as L(t_ref).

    Args:
        c: The triple.
        tol: Zero-test tolerance.
        seed: Zero-test seed.

    Returns:
        A ReducibilityResult.

    Raises:
        ZeroTestInconclusive: If the zero test is pole-dominated.
    """
    L = lambda_expression(c)
    report = zero_test_report(differentiate(L, "t"), {"t": c.t_interval}, tol=tol, seed=seed)

    witnesses = []
    for s in interior_samples(c.t_interval, WITNESS_POINTS):
        v = evaluate(L, {"t": float(s)})
        if not isinstance(v, Pole):
            witnesses.append((float(s), float(v)))

    lam: Optional[float] = None
    if report.is_zero:
        lam = _value(L, c.t_ref)
        a2 = _value(c.a, c.t_ref) ** 2
        scale = abs(_value(c.b, c.t_ref)) / a2 + abs(lam)
        if abs(lam) <= LAMBDA_ZERO_TOL * (1.0 + scale):
            lam = 0.0
        logger.info(f"Triple {c.to_dict()} is reducible with lambda={lam:.12g}")
    else:
        logger.info(f"Triple {c.to_dict()} is not reducible (max scaled dL/dt {report.max_scaled:.3g})")
    return ReducibilityResult(bool(report.is_zero), lam, L, witnesses, report)


def reducible_triple(a: Expr, c: Expr, lam: float, t_interval: Interval,
                     t_ref: Optional[float] = None) -> CoefficientTriple:
    """The triple with b = λa² + ȧ/a − ċ/(2c), reducible with the given λ."""
    a, c = as_expr(a), as_expr(c)
    b = Num(lam) * a * a + differentiate(a, "t") / a - differentiate(c, "t") / (Num(2.0) * c)
    return CoefficientTriple(a, b, c, t_interval, t_ref)


def to_constant_transform(c: CoefficientTriple, r: ReducibilityResult,
                          tol: float = QUAD_TOL) -> EquivTransform:
    """
    Transformation mapping a reducible triple to u_t = u_xx + εu − u³.

    λ ≠ 0: θ = |λ|∫a²dt, δ₁ = √|λ|, φ = √(c/|λ|)/a, image (1, sign λ, 1).
    λ = 0: θ = ∫a²dt, δ₁ = 1, φ = √c/a, image (1, 0, 1).

    Raises:
        NotReducibleError: If the criterion failed.
        RealValuednessError: If c(t) is not positive on the interval.
        InvariantViolationError: If the pushed triple misses the target.
    """
    if not r.reducible or r.lambda_ is None:
        raise NotReducibleError("Triple does not satisfy the reducibility criterion")
    try:
        sign_c = check_sign_definite(c.c, c.t_interval, "c")
    except InvariantViolationError as e:
        raise RealValuednessError(f"c(t) must be positive on {c.t_interval}: {e}") from None
    if sign_c < 0:
        raise RealValuednessError(f"c(t) < 0 on {c.t_interval}; the reducing transformation is not real")

    lam = r.lambda_
    a2_int = integral_expr(c.a * c.a, c.t_ref, tol)
    if lam != 0.0:
        scale = abs(lam)
        theta = Num(scale) * a2_int
        g = EquivTransform(theta, math.sqrt(scale), 0.0, sqrt(c.c / Num(scale)) / c.a,
                           c.t_interval, label=f"reduce(lambda={lam:g})", validate=c.validate)
        target = (1.0, math.copysign(1.0, lam), 1.0)
    else:
        g = EquivTransform(a2_int, 1.0, 0.0, sqrt(c.c) / c.a, c.t_interval,
                           label="reduce(lambda=0)", validate=c.validate)
        target = (1.0, 0.0, 1.0)

    a_src, b_src, c_src = source_time_coefficients(g, c)
    for s in interior_samples(c.t_interval, CHECK_SAMPLES):
        s = float(s)
        got = (_value(a_src, s) ** 2, _value(b_src, s), _value(c_src, s))
        for name, value, want in zip(("a^2", "b", "c"), got, target):
            if abs(value - want) > CHECK_TOL * (1.0 + abs(want)):
                raise InvariantViolationError(
                    f"Reducing transformation misses target: {name}={value:.12g} at t={s:.6g}, want {want:g}"
                )
    return g


def pull_solution(g: EquivTransform, s: Solution) -> Solution:
    """
    u(t, x) = ũ(θ(t), δ₁x + δ₂)/φ(t) for a solution ũ of the image equation.

    Jet channels follow the chain rule: u_x and u_xx pick up δ₁ and δ₁², u_t
    picks up θ_t and φ_t.
    """
    theta, theta_t, phi, phi_t = g.theta, g.theta_t, g.phi, g.phi_t
    d1, d2 = g.delta1, g.delta2
    inner = s.evaluator

    def evaluator(t: float, x: float) -> Jet:
        env = {"t": t}
        th = theta._ev(env)
        th_t = theta_t._ev(env)
        ph = phi._ev(env)
        ph_t = phi_t._ev(env)
        if ph == 0.0:
            raise PoleEncountered("phi vanishes")
        j = inner(th, d1 * x + d2)
        return Jet(
            j.u / ph,
            th_t * j.u_t / ph - ph_t * j.u / (ph * ph),
            d1 * j.u_x / ph,
            d1 * d1 * j.u_xx / ph,
        )

    def validity(t: float, x: float) -> bool:
        th = evaluate(theta, {"t": t})
        if isinstance(th, Pole):
            return False
        return s.is_valid(th, d1 * x + d2)

    return Solution(
        family_id=s.family_id,
        params=dict(s.params),
        evaluator=evaluator,
        validity=validity,
        provenance=(g,) + tuple(s.provenance),
        formula=s.formula,
    )
