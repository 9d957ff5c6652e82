"""
Inversion of strictly monotone scalar functions.
"""
import logging
import math
from typing import Callable, Optional, Tuple

from nwskit.config import INVERSION_TOL
from nwskit.exceptions import InversionError, NWSError, PoleEncountered

# Configure logging
logger = logging.getLogger(__name__)

MAX_BRACKET_EXPANSIONS = 60
MAX_ITERATIONS = 200


def _safe(f: Callable[[float], float], s: float) -> float:
    try:
        value = f(s)
    except (PoleEncountered, NWSError, ArithmeticError, ValueError) as e:
        raise InversionError(f"Function not evaluable at {s:.6g}: {e}") from None
    if not math.isfinite(value):
        raise InversionError(f"Function not finite at {s:.6g}")
    return value


def _bracket(f: Callable[[float], float], y: float, lo: float, hi: float) -> Tuple[float, float, float, float]:
    flo, fhi = _safe(f, lo), _safe(f, hi)
    if flo == fhi:
        raise InversionError(f"Function is not strictly monotone on [{lo:.6g}, {hi:.6g}]")
    increasing = fhi > flo
    width = hi - lo
    for _ in range(MAX_BRACKET_EXPANSIONS):
        below = (y < flo) if increasing else (y > flo)
        above = (y > fhi) if increasing else (y < fhi)
        if not below and not above:
            return lo, hi, flo, fhi
        width *= 2.0
        if below:
            hi, fhi = lo, flo
            lo = lo - width
            flo = _safe(f, lo)
        else:
            lo, flo = hi, fhi
            hi = hi + width
            fhi = _safe(f, hi)
        if (fhi > flo) != increasing:
            raise InversionError("Function is not monotone on the extended bracket")
    raise InversionError(f"Could not bracket the value {y:.6g}")


def invert_monotone(f: Callable[[float], float], y: float, lo: float, hi: float,
                    fprime: Optional[Callable[[float], float]] = None,
                    tol: float = INVERSION_TOL) -> float:
    """
    Solve f(s) = y for a strictly monotone f.

    Bisection keeps a bracket; Newton steps are taken when `fprime` is given
    and the step stays inside it.

    Args:
        f: Strictly monotone function.
        y: Target value.
        lo: Initial bracket start (extended outward if needed).
        hi: Initial bracket end.
        fprime: Optional derivative of f.
        tol: Tolerance on s, relative to 1 + |s|.

    Returns:
        s with f(s) = y.

    Raises:
        InversionError: If f is not monotone or y cannot be bracketed.
    """
    lo, hi, flo, fhi = _bracket(f, y, float(lo), float(hi))
    if flo == y:
        return lo
    if fhi == y:
        return hi
    increasing = fhi > flo
    s = lo + (hi - lo) * (y - flo) / (fhi - flo)

    for _ in range(MAX_ITERATIONS):
        fs = _safe(f, s) - y
        if fs == 0.0:
            return s
        if (fs > 0.0) == increasing:
            hi = s
        else:
            lo = s
        step_ok = False
        if fprime is not None:
            try:
                d = fprime(s)
            except (PoleEncountered, NWSError, ArithmeticError, ValueError):
                d = 0.0
            if d != 0.0 and math.isfinite(d):
                candidate = s - fs / d
                if lo < candidate < hi:
                    step_ok = abs(candidate - s) <= tol * (1.0 + abs(s))
                    s_new = candidate
                else:
                    s_new = 0.5 * (lo + hi)
            else:
                s_new = 0.5 * (lo + hi)
        else:
            s_new = 0.5 * (lo + hi)
        if step_ok or hi - lo <= tol * (1.0 + abs(s_new)):
            return s_new
        s = s_new

    logger.warning(f"Inversion did not converge for y={y:.6g}; returning bracket midpoint")
    return 0.5 * (lo + hi)
