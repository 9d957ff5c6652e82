"""
Adaptive Gauss-Kronrod quadrature and memoized antiderivative handles.
"""
import bisect
import heapq
import logging
import math
import threading
from typing import Callable, Dict, List, Tuple

from nwskit.config import QUAD_TOL, CHECKPOINT_SPACING
from nwskit.exceptions import PoleEncountered, QuadratureError
from nwskit.expr import Expr

# Configure logging
logger = logging.getLogger(__name__)

# 15-point Kronrod nodes (nonnegative half) and weights, QUADPACK qk15
XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# 7-point Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the center
WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

MAX_PANELS = 2000
ROUNDOFF_FACTOR = 50.0 * 2.220446049250313e-16
CACHE_LIMIT = 4096


def gauss_kronrod_15(f: Callable[[float], float], a: float, b: float) -> Tuple[float, float, float]:
    """
    One G7-K15 panel.

    Returns:
        Tuple of (Kronrod estimate, |Kronrod - Gauss|, Kronrod estimate of the integral of |f|).
    """
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    kronrod = WGK[7] * fc
    gauss = WG[3] * fc
    resabs = WGK[7] * abs(fc)
    for j in range(7):
        dx = half * XGK[j]
        f1, f2 = f(center - dx), f(center + dx)
        pair = f1 + f2
        kronrod += WGK[j] * pair
        resabs += WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            gauss += WG[j // 2] * pair
    return kronrod * half, abs((kronrod - gauss) * half), resabs * abs(half)


def integrate(f: Callable[[float], float], a: float, b: float,
              tol: float = QUAD_TOL) -> Tuple[float, float]:
    """
    Adaptive Gauss-Kronrod integration with a global error budget.

    The panel with the largest error estimate is bisected until the summed
    estimate meets the tolerance, so endpoint singularities such as sqrt(t)
    at 0 only refine where they live.

    Args:
        f: Integrand.
        a: Lower bound.
        b: Upper bound.
        tol: Absolute error tolerance.

    Returns:
        Tuple of (integral_value, error_estimate).

    Raises:
        QuadratureError: If the integrand hits a pole or the panel limit is exhausted.
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, error = integrate(f, b, a, tol)
        return -value, error

    try:
        value, error, resabs = gauss_kronrod_15(f, a, b)
        # max-heap on the error estimate
        panels = [(-error, a, b, value, resabs)]
        total_error, total_resabs = error, resabs
        while total_error > max(tol, ROUNDOFF_FACTOR * total_resabs):
            if len(panels) >= MAX_PANELS:
                raise QuadratureError(f"No convergence on [{a:.6g}, {b:.6g}] "
                                      f"after {len(panels)} panels (error {total_error:.3g})")
            neg_error, lo, hi, _, panel_resabs = heapq.heappop(panels)
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi:
                raise QuadratureError(f"Panel [{lo:.17g}, {hi:.17g}] cannot be bisected "
                                      f"(error {total_error:.3g})")
            total_error += neg_error
            total_resabs -= panel_resabs
            for left, right in ((lo, mid), (mid, hi)):
                v, e, r = gauss_kronrod_15(f, left, right)
                heapq.heappush(panels, (-e, left, right, v, r))
                total_error += e
                total_resabs += r
            # running sums drift; resum before declaring convergence
            if total_error <= max(tol, ROUNDOFF_FACTOR * total_resabs):
                total_error = math.fsum(-p[0] for p in panels)
                total_resabs = math.fsum(p[4] for p in panels)
    except PoleEncountered as p:
        raise QuadratureError(f"Integrand has a pole on [{a:.6g}, {b:.6g}]: {p.where}") from None
    return math.fsum(p[3] for p in panels), total_error


def expr_integrand(e: Expr, var: str = "t") -> Callable[[float], float]:
    """Scalar callable of an expression in one variable; raises on poles."""
    def f(s: float) -> float:
        value = e._ev({var: s})
        if not math.isfinite(value):
            raise PoleEncountered(e)
        return value
    return f


class AntiderivativeHandle:
    """
    F(t) = integral of f from t_ref to t, memoized on a checkpoint table.

    The table holds sorted (t, F(t)) pairs; a new checkpoint is added whenever
    a query lies more than `spacing` beyond the tabulated range. Safe for
    concurrent use.
    """

    def __init__(self, integrand: Expr, t_ref: float, tol: float = QUAD_TOL,
                 var: str = "t", spacing: float = CHECKPOINT_SPACING):
        self.integrand = integrand
        self.t_ref = float(t_ref)
        self.tol = tol
        self.var = var
        self.spacing = spacing
        self._f = expr_integrand(integrand, var)
        self._ts: List[float] = [self.t_ref]
        self._fs: List[float] = [0.0]
        self._cache: Dict[float, float] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"AntiderivativeHandle({self.integrand.text()!r}, t_ref={self.t_ref})"

    @property
    def checkpoints(self) -> List[Tuple[float, float]]:
        with self._lock:
            return list(zip(self._ts, self._fs))

    def _extend_to(self, t: float):
        # caller holds the lock
        while t > self._ts[-1] + self.spacing:
            lo = self._ts[-1]
            hi = lo + self.spacing
            value, _ = integrate(self._f, lo, hi, 0.25 * self.tol)
            self._ts.append(hi)
            self._fs.append(self._fs[-1] + value)
            logger.debug(f"Checkpoint {hi:.6g} for {self!r}")
        while t < self._ts[0] - self.spacing:
            hi = self._ts[0]
            lo = hi - self.spacing
            value, _ = integrate(self._f, lo, hi, 0.25 * self.tol)
            self._ts.insert(0, lo)
            self._fs.insert(0, self._fs[0] - value)
            logger.debug(f"Checkpoint {lo:.6g} for {self!r}")

    def __call__(self, t: float) -> float:
        """
        Evaluate F(t).

        Raises:
            QuadratureError: If the integrand has a pole between t_ref and t.
        """
        t = float(t)
        cached = self._cache.get(t)
        if cached is not None:
            return cached
        with self._lock:
            self._extend_to(t)
            i = bisect.bisect_left(self._ts, t)
            candidates = [j for j in (i - 1, i) if 0 <= j < len(self._ts)]
            j = min(candidates, key=lambda c: abs(self._ts[c] - t))
            base_t, base_f = self._ts[j], self._fs[j]
        value, _ = integrate(self._f, base_t, t, 0.5 * self.tol)
        result = base_f + value
        if len(self._cache) >= CACHE_LIMIT:
            self._cache.clear()
        self._cache[t] = result
        return result

    def derivative(self, t: float) -> float:
        """F'(t) = f(t)."""
        try:
            return self._f(t)
        except PoleEncountered:
            raise QuadratureError(f"Integrand has a pole at t={t:.6g}") from None


def antiderivative(f: Expr, t_ref: float, tol: float = QUAD_TOL, var: str = "t") -> AntiderivativeHandle:
    """
    Numeric antiderivative of an expression in one variable.

    Args:
        f: Integrand.
        t_ref: Base point, F(t_ref) = 0.
        tol: Absolute error tolerance per query.
        var: Integration variable.

    Returns:
        An AntiderivativeHandle.
    """
    return AntiderivativeHandle(f, t_ref, tol, var)
