"""
Residual of u_t = a²(t)u_xx + b(t)u − c(t)u³ for closed-form solutions.
"""
import logging
import math
from typing import Optional, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from nwskit.exceptions import AllPolesError
from nwskit.expr import Pole
from .jets import Jet
from .models import Grid, PDEInstance, ResidualReport, Solution

# Configure logging
logger = logging.getLogger(__name__)


def assemble(jet: Jet, a: float, b: float, c: float) -> float:
    """u_t − a²u_xx − bu + cu³ from jet channels and coefficient values."""
    u = jet.u
    return jet.u_t - a * a * jet.u_xx - b * u + c * u * u * u


def _coefficients(p: PDEInstance, t: float) -> Union[Tuple[float, float, float], Pole]:
    values = p.coeffs.at(t)
    for v in values:
        if isinstance(v, Pole):
            return v
    return values


def residual(p: PDEInstance, s: Solution, at: Tuple[float, float]) -> Union[float, Pole]:
    """
    Pointwise residual of a solution.

    Args:
        p: The equation.
        s: The solution.
        at: The point (t, x).

    Returns:
        u_t − a²u_xx − bu + cu³, or a Pole if the solution or a coefficient is singular.
    """
    t, x = at
    coeffs = _coefficients(p, t)
    if isinstance(coeffs, Pole):
        return coeffs
    jet = s.jet(t, x)
    if isinstance(jet, Pole):
        return jet
    value = assemble(jet, *coeffs)
    if not math.isfinite(value):
        return Pole(f"residual({t!r}, {x!r})", "non-finite")
    return value


def _residual_table(p: PDEInstance, s: Solution, grid: Grid) -> pd.DataFrame:
    rows = []
    for t in grid.ts:
        t = float(t)
        coeffs = _coefficients(p, t)
        for x in grid.xs:
            x = float(x)
            u = r = math.nan
            if not isinstance(coeffs, Pole) and s.is_valid(t, x):
                jet = s.jet(t, x)
                if not isinstance(jet, Pole):
                    u = jet.u
                    value = assemble(jet, *coeffs)
                    r = value if math.isfinite(value) else math.nan
            rows.append((t, x, u, r))
    return pd.DataFrame(rows, columns=["t", "x", "u", "residual"])


def residual_stats(p: PDEInstance, s: Solution, grid: Grid) -> ResidualReport:
    """
    Aggregate the residual over the pole-free points of a grid.

    Points outside the solution's predicted validity region count as poles.

    Returns:
        A ResidualReport with n_evaluated + n_poles = grid size.

    Raises:
        AllPolesError: If every grid point is a pole.
    """
    table = _residual_table(p, s, grid)
    values = table["residual"].to_numpy()
    ok = np.isfinite(values)
    n_evaluated = int(ok.sum())
    n_poles = grid.size - n_evaluated
    if n_evaluated == 0:
        raise AllPolesError(f"All {grid.size} grid points of {s.family_id} are poles")
    finite = values[ok]
    report = ResidualReport(
        max_abs=float(np.max(np.abs(finite))),
        rms=float(np.sqrt(np.mean(finite * finite))),
        n_evaluated=n_evaluated,
        n_poles=n_poles,
        grid=grid,
    )
    logger.info(f"Residual of {s.family_id}: max_abs={report.max_abs:.3g}, "
                f"{n_evaluated} points, {n_poles} poles")
    return report


def sample(p: PDEInstance, s: Solution, grid: Grid, out: Optional[Union[str, TextIO]] = None) -> pd.DataFrame:
    """
    Tabulate u and the residual on a grid.

    Pole rows carry NaN, which CSV output writes as an empty field.

    Args:
        p: The equation.
        s: The solution.
        grid: The sampling grid.
        out: Optional CSV path or text stream for the columns t, x, u.

    Returns:
        DataFrame with columns t, x, u, residual.
    """
    table = _residual_table(p, s, grid)
    if out is not None:
        table[["t", "x", "u"]].to_csv(out, index=False, na_rep="", float_format="%.17g")
    return table
