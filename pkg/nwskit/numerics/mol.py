"""
Method-of-lines solver for u_t = a²(t)u_xx + b(t)u − c(t)u³.

Second-order central differences on a uniform grid, time-dependent Dirichlet
data from a reference solution, and adaptive Dormand-Prince 5(4) stepping.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd

from nwskit.config import MOL_RTOL, MOL_ATOL, MOL_MIN_STEP, MOL_MAX_STEPS
from nwskit.exceptions import BoundaryPoleError, InvariantViolationError, StepSizeUnderflowError
from nwskit.expr import Pole
from nwskit.models import PDEInstance, Solution

# Configure logging
logger = logging.getLogger(__name__)

MIN_NX = 16
# Errors below this are treated as the rounding floor
ERROR_FLOOR = 1e-12


class DormandPrince54:
    """
    Dormand-Prince 5(4) pair: seven stages, first-same-as-last, 5th order
    propagation with an embedded 4th order error estimate.
    """

    def __init__(self, rtol: float = MOL_RTOL, atol: float = MOL_ATOL):
        self.rtol = rtol
        self.atol = atol

        # number of stages, order of scheme and embedded method
        self.s = 7
        self.n = 5
        self.m = 4

        # intermediate evaluation times
        self.eval_stages = [0.0, 1/5, 3/10, 4/5, 8/9, 1.0, 1.0]

        # butcher table
        self.BT = {
            1: [      1/5],
            2: [     3/40,        9/40],
            3: [    44/45,      -56/15,       32/9],
            4: [19372/6561, -25360/2187, 64448/6561, -212/729],
            5: [ 9017/3168,     -355/33, 46732/5247,   49/176, -5103/18656],
            6: [    35/384,           0,   500/1113,  125/192,  -2187/6784, 11/84],
        }

        # coefficients for local truncation error estimate
        self.TR = [71/57600, 0, -71/16695, 71/1920, -17253/339200, 22/525, -1/40]

    def step(self, rhs, t: float, y: np.ndarray, h: float, k0: np.ndarray):
        """
        One trial step.

        Returns:
            (y_new, k_last, scaled error norm); k_last is the FSAL stage.
        """
        ks = [k0]
        for i in range(1, self.s):
            yi = y + h * sum(c * k for c, k in zip(self.BT[i], ks) if c != 0)
            ks.append(rhs(t + self.eval_stages[i] * h, yi))
        y_new = y + h * sum(c * k for c, k in zip(self.BT[6], ks) if c != 0)
        err = h * sum(c * k for c, k in zip(self.TR, ks) if c != 0)
        scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y_new))
        norm = float(np.sqrt(np.mean((err / scale) ** 2))) if y.size else 0.0
        return y_new, ks[-1], norm


@dataclass
class NumericField:
    """Method-of-lines output: values on (t-levels × x-nodes) with solver statistics."""
    t: np.ndarray
    x: np.ndarray
    values: np.ndarray
    stats: Dict[str, int] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        tt, xx = np.meshgrid(self.t, self.x, indexing="ij")
        return pd.DataFrame({"t": tt.ravel(), "x": xx.ravel(), "u": self.values.ravel()})

    def to_csv(self, out: Union[str, TextIO]):
        self.to_frame().to_csv(out, index=False, float_format="%.17g")

    def max_error(self, exact: Solution, level: int = -1) -> float:
        """Max-abs difference to a reference solution at one output level."""
        t = float(self.t[level])
        errors = []
        for xi, ui in zip(self.x, self.values[level]):
            ref = exact.value(t, float(xi))
            if isinstance(ref, Pole):
                raise BoundaryPoleError(f"Reference solution has a pole at ({t}, {xi})")
            errors.append(abs(ui - ref))
        return float(max(errors))


def _profile(s: Solution, t: float, xs: np.ndarray) -> np.ndarray:
    out = np.empty_like(xs)
    for i, x in enumerate(xs):
        v = s.value(t, float(x))
        if isinstance(v, Pole):
            raise BoundaryPoleError(f"{s.family_id} has a pole at (t={t:.6g}, x={x:.6g})")
        out[i] = v
    return out


def mol_solve(p: PDEInstance, init: Solution, t0: float, t1: float, x0: float, x1: float,
              nx: int, rtol: float = MOL_RTOL, atol: float = MOL_ATOL,
              t_out: Optional[Sequence[float]] = None) -> NumericField:
    """
    Integrate the equation from the initial profile of a reference solution.

    Args:
        p: The equation.
        init: Reference solution; supplies u(t0, x) and the Dirichlet data at x0, x1.
        t0: Start time.
        t1: End time.
        x0: Left boundary.
        x1: Right boundary.
        nx: Number of grid intervals (nx + 1 nodes).
        rtol: Relative tolerance of the step-size control.
        atol: Absolute tolerance of the step-size control.
        t_out: Output levels (default [t0, t1]).

    Returns:
        The NumericField at the output levels.

    Raises:
        BoundaryPoleError: If initial or boundary data hits a pole.
        StepSizeUnderflowError: If the step size collapses.
    """
    if nx < MIN_NX:
        raise InvariantViolationError(f"nx must be at least {MIN_NX}, got {nx}")
    if not (t1 > t0 and x1 > x0):
        raise InvariantViolationError("Empty space-time window")

    xs = np.linspace(x0, x1, nx + 1)
    dx = xs[1] - xs[0]
    inv_dx2 = 1.0 / (dx * dx)
    coeffs = p.coeffs
    levels = sorted(set(float(s) for s in (t_out if t_out is not None else (t0, t1))))
    if levels[0] < t0 or levels[-1] > t1:
        raise InvariantViolationError("Output levels outside [t0, t1]")

    counters = {"steps": 0, "rejected": 0, "rhs_evals": 0}

    def coefficient_values(t: float):
        a, b, c = coeffs.at(t)
        if any(isinstance(v, Pole) for v in (a, b, c)):
            raise BoundaryPoleError(f"Coefficient pole at t={t:.6g}")
        return a, b, c

    def boundary(t: float):
        left, right = init.value(t, x0), init.value(t, x1)
        if isinstance(left, Pole) or isinstance(right, Pole):
            raise BoundaryPoleError(f"Boundary data has a pole at t={t:.6g}")
        return left, right

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        counters["rhs_evals"] += 1
        a, b, c = coefficient_values(t)
        left, right = boundary(t)
        full = np.concatenate(([left], y, [right]))
        lap = (full[2:] - 2.0 * full[1:-1] + full[:-2]) * inv_dx2
        return a * a * lap + b * y - c * y * y * y

    y = _profile(init, t0, xs)[1:-1]
    out_values: List[np.ndarray] = []

    def record(t: float, y: np.ndarray):
        left, right = boundary(t)
        out_values.append(np.concatenate(([left], y, [right])))

    solver = DormandPrince54(rtol, atol)
    a0 = abs(coefficient_values(t0)[0])
    h = min(t1 - t0, 0.5 * dx * dx / max(a0 * a0, 1e-300))
    t = t0
    k = rhs(t, y)
    pending = list(levels)
    if pending and pending[0] == t0:
        record(t0, y)
        pending.pop(0)

    while pending:
        if counters["steps"] + counters["rejected"] > MOL_MAX_STEPS:
            raise StepSizeUnderflowError(t, h)
        target = pending[0]
        h_try = min(h, target - t)
        if h_try < MOL_MIN_STEP * max(1.0, abs(t)) and target - t > MOL_MIN_STEP * max(1.0, abs(t)):
            raise StepSizeUnderflowError(t, h_try)
        y_new, k_new, norm = solver.step(rhs, t, y, h_try, k)
        if math.isfinite(norm) and norm <= 1.0:
            t = target if h_try == target - t else t + h_try
            y, k = y_new, k_new
            counters["steps"] += 1
            if t == target:
                record(t, y)
                pending.pop(0)
            factor = 5.0 if norm == 0.0 else min(5.0, max(0.2, 0.9 * norm ** -0.2))
            # a step clipped to an output level does not shrink h
            h = max(h, h_try * factor) if h_try < h else h_try * factor
        else:
            counters["rejected"] += 1
            factor = 0.2 if not math.isfinite(norm) else max(0.2, 0.9 * norm ** -0.2)
            h = h_try * factor

    logger.info(f"MOL run nx={nx}: {counters['steps']} steps, "
                f"{counters['rejected']} rejected, {counters['rhs_evals']} rhs evaluations")
    return NumericField(np.array(levels), xs, np.array(out_values), counters)


@dataclass
class ConvergenceReport:
    errors: List[float]
    orders: List[float]
    degenerate: bool

    def to_dict(self) -> Dict:
        return {"errors": self.errors, "orders": self.orders, "degenerate": self.degenerate}

    def within(self, lo: float, hi: float) -> bool:
        """True when no level is degenerate and every observed order lies in [lo, hi]."""
        return not self.degenerate and all(lo <= order <= hi for order in self.orders)


def convergence_order(errors: Sequence[float], floor: float = ERROR_FLOOR) -> ConvergenceReport:
    """
    Observed orders log2(e(n)/e(2n)) of successive grid doublings.

    Args:
        errors: Errors at nx, 2nx, 4nx (at least three values).
        floor: Errors at or below this are at the rounding floor.

    Returns:
        A ConvergenceReport; `degenerate` is set when any error reaches the floor.
    """
    errors = [float(e) for e in errors]
    if len(errors) < 3:
        raise InvariantViolationError("Need errors for three successive refinements")
    degenerate = any(e <= floor for e in errors)
    orders = []
    for coarse, fine in zip(errors, errors[1:]):
        if coarse <= floor or fine <= floor:
            orders.append(math.nan)
        else:
            orders.append(math.log2(coarse / fine))
    if degenerate:
        logger.warning(f"Convergence study degenerate: errors {errors} reach the floor {floor:g}")
    return ConvergenceReport(errors, orders, degenerate)
