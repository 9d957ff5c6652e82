"""
Expression nodes backed by numerics: antiderivatives and inverse functions.

They evaluate, substitute and differentiate like any other node, so pushed
coefficients stay expressions even when θ is only known numerically.
"""
import logging
import threading
from typing import Dict, Optional, Tuple

from nwskit.config import QUAD_TOL, INVERSION_TOL
from nwskit.exceptions import InversionError, PoleEncountered, QuadratureError
from nwskit.expr import Expr, Var, Num, differentiate, add, sub, mul, div
from .quadrature import AntiderivativeHandle
from .inversion import invert_monotone

# Configure logging
logger = logging.getLogger(__name__)

CACHE_LIMIT = 4096


class Antiderivative(Expr):
    """F(arg) for a memoized antiderivative handle F."""
    __slots__ = ("handle",)

    def __init__(self, handle: AntiderivativeHandle, arg: Expr):
        super().__init__((arg,))
        self.handle = handle

    @property
    def arg(self) -> Expr:
        return self.operands[0]

    def _ev(self, env):
        s = self.arg._ev(env)
        try:
            return self.handle(s)
        except QuadratureError:
            raise PoleEncountered(self) from None

    def rebuild(self, operands):
        return Antiderivative(self.handle, operands[0])

    def text(self):
        return (f"integral[{self.handle.integrand.text()}, {self.handle.t_ref!r}]"
                f"({self.arg.text()})")


@differentiate.register(Antiderivative)
def _(e, var):
    inner = differentiate(e.arg, var)
    if inner.is_number(0.0):
        return Num(0.0)
    h = e.handle
    return mul(h.integrand.subs({h.var: e.arg}), inner)


class _InverseSolver:
    """Shared, cached solver for f(s) = y with f strictly monotone."""

    def __init__(self, func: Expr, var: str, interval: Tuple[float, float], tol: float):
        self.func = func
        self.var = var
        self.dfunc = differentiate(func, var)
        self.interval = interval
        self.tol = tol
        self._cache: Dict[float, float] = {}
        self._lock = threading.Lock()

    def _f(self, s: float) -> float:
        return self.func._ev({self.var: s})

    def _fprime(self, s: float) -> float:
        return self.dfunc._ev({self.var: s})

    def __call__(self, y: float) -> float:
        cached = self._cache.get(y)
        if cached is not None:
            return cached
        lo, hi = self.interval
        s = invert_monotone(self._f, y, lo, hi, self._fprime, self.tol)
        with self._lock:
            if len(self._cache) >= CACHE_LIMIT:
                self._cache.clear()
            self._cache[y] = s
        return s


class InverseFunction(Expr):
    """f⁻¹(arg) for a strictly monotone f given as an expression."""
    __slots__ = ("solver",)

    def __init__(self, solver: _InverseSolver, arg: Expr):
        super().__init__((arg,))
        self.solver = solver

    @property
    def arg(self) -> Expr:
        return self.operands[0]

    def _ev(self, env):
        y = self.arg._ev(env)
        try:
            return self.solver(y)
        except InversionError:
            raise PoleEncountered(self) from None

    def rebuild(self, operands):
        return InverseFunction(self.solver, operands[0])

    def text(self):
        return f"inverse[{self.solver.func.text()}]({self.arg.text()})"


@differentiate.register(InverseFunction)
def _(e, var):
    inner = differentiate(e.arg, var)
    if inner.is_number(0.0):
        return Num(0.0)
    s = e.solver
    return div(inner, s.dfunc.subs({s.var: e}))


def integral_expr(f: Expr, t_ref: float, tol: float = QUAD_TOL, var: str = "t") -> Expr:
    """
    ∫_{t_ref}^{t} f as an expression in `var`.

    Constant integrands give the exact linear expression; anything else a
    numeric Antiderivative node.
    """
    if not f.free_vars():
        return mul(f, sub(Var(var), Num(t_ref)))
    return Antiderivative(AntiderivativeHandle(f, t_ref, tol, var), Var(var))


def inverse_expr(func: Expr, interval: Tuple[float, float], var: str = "t",
                 arg: Optional[Expr] = None, tol: float = INVERSION_TOL) -> Expr:
    """
    f⁻¹(arg) as an expression, for f strictly monotone on `interval`.

    Identity and affine f are inverted exactly; inverting an inverse returns
    the original function.

    Args:
        func: The monotone function of `var`.
        interval: Bracket used to start root finding.
        var: Variable of `func`.
        arg: Argument expression (default: the variable itself).
        tol: Inversion tolerance.

    Returns:
        The inverse expression.
    """
    arg = Var(var) if arg is None else arg
    if isinstance(func, Var) and func.name == var:
        return arg
    if isinstance(func, InverseFunction) and isinstance(func.arg, Var) and func.arg.name == var:
        inner = func.solver
        return inner.func.subs({inner.var: arg})
    slope = differentiate(func, var)
    if not slope.free_vars() and not func.free_vars() - {var}:
        k = slope._ev({})
        if k == 0.0:
            raise InversionError(f"Constant function {func.text()} is not invertible")
        anchor = 0.5 * (interval[0] + interval[1])
        value = func._ev({var: anchor})
        return add(Num(anchor), div(sub(arg, Num(value)), Num(k)))
    return InverseFunction(_InverseSolver(func, var, interval, tol), arg)
