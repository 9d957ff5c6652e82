"""
Domain objects: coefficient triples, equations of the class, vector fields,
closed-form solutions and sampling grids.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from nwskit.config import NONVANISHING_SAMPLES
from nwskit.exceptions import InvariantViolationError, PoleEncountered
from nwskit.expr import Expr, Pole, as_expr, parse, evaluate, differentiate
from .jets import Jet

# Configure logging
logger = logging.getLogger(__name__)

Interval = Tuple[float, float]


class LambdaSign(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    ZERO = "0"
    ANY = "any"


def interior_samples(interval: Interval, n: int = NONVANISHING_SAMPLES) -> np.ndarray:
    """n midpoint samples of an open interval."""
    lo, hi = interval
    return lo + (np.arange(n) + 0.5) / n * (hi - lo)


def check_sign_definite(e: Expr, interval: Interval, name: str,
                        n: int = NONVANISHING_SAMPLES, var: str = "t") -> int:
    """
    Check by sampling that an expression is pole-free and nonvanishing.

    Returns:
        The sign (+1 or -1) of the expression on the interval.

    Raises:
        InvariantViolationError: On a pole, a zero or a sign change.
    """
    signs = set()
    for s in interior_samples(interval, n):
        value = evaluate(e, {var: float(s)})
        if isinstance(value, Pole):
            raise InvariantViolationError(f"{name}({var}) has a pole near {var}={s:.6g}")
        if value == 0.0:
            raise InvariantViolationError(f"{name}({var}) vanishes at {var}={s:.6g}")
        signs.add(1 if value > 0 else -1)
    if len(signs) > 1:
        raise InvariantViolationError(f"{name}({var}) changes sign on {interval}")
    return signs.pop()


@dataclass(frozen=True)
class CoefficientTriple:
    """
    Arbitrary elements (a, b, c) of u_t = a²(t)u_xx + b(t)u − c(t)u³ on an
    open t-interval.
    """
    a: Expr
    b: Expr
    c: Expr
    t_interval: Interval
    t_ref: Optional[float] = None
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        lo, hi = self.t_interval
        if not lo < hi:
            raise InvariantViolationError(f"Empty t-interval {self.t_interval}")
        object.__setattr__(self, "a", as_expr(self.a))
        object.__setattr__(self, "b", as_expr(self.b))
        object.__setattr__(self, "c", as_expr(self.c))
        if self.t_ref is None:
            object.__setattr__(self, "t_ref", 0.5 * (lo + hi))
        for name in ("a", "b", "c"):
            extra = getattr(self, name).free_vars() - {"t"}
            if extra:
                raise InvariantViolationError(f"{name} depends on {sorted(extra)}, expected t only")
        if self.validate:
            check_sign_definite(self.a, self.t_interval, "a")
            check_sign_definite(self.c, self.t_interval, "c")

    @classmethod
    def from_strings(cls, a: str, b: str, c: str, t_interval: Interval,
                     t_ref: Optional[float] = None) -> "CoefficientTriple":
        """Parse a, b, c as expressions in t."""
        return cls(parse(a, {"t"}), parse(b, {"t"}), parse(c, {"t"}), t_interval, t_ref)

    def at(self, t: float) -> Tuple[Union[float, Pole], Union[float, Pole], Union[float, Pole]]:
        env = {"t": t}
        return evaluate(self.a, env), evaluate(self.b, env), evaluate(self.c, env)

    def c_sign(self) -> int:
        return check_sign_definite(self.c, self.t_interval, "c")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "a": self.a.text(),
            "b": self.b.text(),
            "c": self.c.text(),
            "t_interval": list(self.t_interval),
            "t_ref": self.t_ref,
        }


@dataclass(frozen=True)
class PDEInstance:
    """One equation u_t = a²u_xx + bu − cu³ of the class."""
    coeffs: CoefficientTriple

    @property
    def t_interval(self) -> Interval:
        return self.coeffs.t_interval

    def to_dict(self) -> Dict[str, Any]:
        return self.coeffs.to_dict()


@dataclass(frozen=True)
class VectorField:
    """Q = τ∂t + ξ∂x + η∂u with coefficients in (t, x, u)."""
    tau: Expr
    xi: Expr
    eta: Expr
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tau", as_expr(self.tau))
        object.__setattr__(self, "xi", as_expr(self.xi))
        object.__setattr__(self, "eta", as_expr(self.eta))
        if self.tau.is_number(0.0) and self.xi.is_number(0.0):
            raise InvariantViolationError("Vector field has vanishing tau and xi")

    def to_dict(self) -> Dict[str, str]:
        out = {"tau": self.tau.text(), "xi": self.xi.text(), "eta": self.eta.text()}
        if self.label:
            out["label"] = self.label
        return out

    def __str__(self):
        return f"{self.label or 'Q'} = ({self.tau})∂t + ({self.xi})∂x + ({self.eta})∂u"


JetEvaluator = Callable[[float, float], Jet]


@dataclass(frozen=True)
class Solution:
    """
    Closed-form field u(t, x) evaluable as a 2-jet.

    The evaluator raises PoleEncountered at singular points; `validity` is the
    predicted pole-free region (with the catalog's safety margin).
    """
    family_id: str
    params: Dict[str, float]
    evaluator: JetEvaluator
    validity: Callable[[float, float], bool] = field(default=lambda t, x: True)
    provenance: Tuple[Any, ...] = ()
    formula: str = ""

    def jet(self, t: float, x: float) -> Union[Jet, Pole]:
        try:
            j = self.evaluator(float(t), float(x))
        except (PoleEncountered, ArithmeticError, ValueError) as e:
            return Pole(f"{self.family_id}({t!r}, {x!r})", str(e))
        if not j.is_finite():
            return Pole(f"{self.family_id}({t!r}, {x!r})", "non-finite jet")
        return j

    def value(self, t: float, x: float) -> Union[float, Pole]:
        j = self.jet(t, x)
        return j if isinstance(j, Pole) else j.u

    def is_valid(self, t: float, x: float) -> bool:
        return bool(self.validity(t, x))

    def negated(self) -> "Solution":
        """u ↦ −u; the cubic nonlinearity is odd."""
        inner = self.evaluator
        return Solution(
            family_id=self.family_id,
            params={**self.params, "flip": 1.0 - self.params.get("flip", 0.0)},
            evaluator=lambda t, x: -inner(t, x),
            validity=self.validity,
            provenance=self.provenance,
            formula=f"-({self.formula})" if self.formula else "",
        )


def zero_solution() -> Solution:
    return Solution("zero", {}, lambda t, x: Jet(0.0), formula="0")


def expression_solution(e: Expr, family_id: str = "expr") -> Solution:
    """Solution from an expression u(t, x) with symbolic derivative channels."""
    e_t, e_x = differentiate(e, "t"), differentiate(e, "x")
    e_xx = differentiate(e_x, "x")

    def evaluator(t: float, x: float) -> Jet:
        env = {"t": t, "x": x}
        return Jet(e._ev(env), e_t._ev(env), e_x._ev(env), e_xx._ev(env))

    return Solution(family_id, {}, evaluator, formula=e.text())


@dataclass(frozen=True)
class Grid:
    """Rectangular (t, x) lattice with nt × nx points including the ends."""
    t0: float
    t1: float
    nt: int
    x0: float
    x1: float
    nx: int

    def __post_init__(self):
        if self.nt < 1 or self.nx < 1:
            raise InvariantViolationError("Grid must have at least one point per axis")

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.nt)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @property
    def size(self) -> int:
        return self.nt * self.nx

    def points(self) -> List[Tuple[float, float]]:
        return [(float(t), float(x)) for t in self.ts for x in self.xs]

    def to_dict(self) -> Dict[str, Any]:
        return {"t0": self.t0, "t1": self.t1, "nt": self.nt,
                "x0": self.x0, "x1": self.x1, "nx": self.nx}


@dataclass
class ResidualReport:
    max_abs: float
    rms: float
    n_evaluated: int
    n_poles: int
    grid: Grid

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_abs": self.max_abs,
            "rms": self.rms,
            "n_evaluated": self.n_evaluated,
            "n_poles": self.n_poles,
            "grid": self.grid.to_dict(),
        }
