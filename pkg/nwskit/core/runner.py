"""
Runner for the exact-solution acceptance matrix: every catalog family on a
matching reducible triple, residuals evaluated concurrently.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from nwskit.config import MAX_WORKERS, RESIDUAL_TOL
from nwskit.equivalence import reducibility_lambda
from nwskit.models import CoefficientTriple, Grid, LambdaSign, PDEInstance, residual_stats
from nwskit.solutions import FamilyParams, SolutionFamily, instantiate, list_families

# Configure logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchingInstance:
    """A reducible triple (as expression strings) and the x-window used for its families."""
    a: str
    b: str
    c: str
    t_interval: Tuple[float, float]
    x_window: Tuple[float, float] = (-2.0, 2.0)

    def triple(self) -> CoefficientTriple:
        return CoefficientTriple.from_strings(self.a, self.b, self.c, self.t_interval)


# λ = 1/2, λ = −1 and λ = 0 respectively
MATCHING_INSTANCES: Dict[LambdaSign, MatchingInstance] = {
    LambdaSign.POSITIVE: MatchingInstance("1", "0", "exp(t)", (0.0, 2.0)),
    LambdaSign.NEGATIVE: MatchingInstance("1", "-0.5", "exp(-t)", (0.0, 2.0)),
    LambdaSign.ZERO: MatchingInstance("1", "0", "1", (0.0, 1.0)),
}


@dataclass
class FamilyResult:
    family: str
    instance: Dict[str, Any]
    lambda_: Optional[float] = None
    report: Optional[Dict[str, Any]] = None
    passed: bool = False
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "family": self.family,
            "instance": self.instance,
            "lambda": self.lambda_,
            "pass": self.passed,
        }
        if self.report is not None:
            out["residual"] = self.report
        if self.error is not None:
            out["error"] = self.error
        return out


class VerificationRunner:
    """Instantiate and residual-check catalog families on their matching triples."""

    def __init__(self, nt: int = 41, nx: int = 81, tol: float = RESIDUAL_TOL,
                 max_workers: int = MAX_WORKERS, flip: bool = False,
                 instances: Optional[Dict[LambdaSign, MatchingInstance]] = None):
        """
        Initialize the runner.

        Args:
            nt: Grid points in t.
            nx: Grid points in x.
            tol: Max-abs residual accepted as a pass.
            max_workers: Thread pool size.
            flip: Verify the sign-flipped solutions u ↦ −u instead.
            instances: Matching triple per sign of λ.
        """
        self.nt = nt
        self.nx = nx
        self.tol = tol
        self.max_workers = max_workers
        self.flip = flip
        self.instances = instances or MATCHING_INSTANCES

    def verify_family(self, family: SolutionFamily, params: Optional[FamilyParams] = None) -> FamilyResult:
        """
        Verify one family; errors are recorded in the result.
        """
        matching = self.instances[family.lambda_sign]
        result = FamilyResult(family.id, {
            "a": matching.a, "b": matching.b, "c": matching.c, "t_interval": list(matching.t_interval),
        })
        try:
            triple = matching.triple()
            r = reducibility_lambda(triple)
            result.lambda_ = r.lambda_
            params = params or FamilyParams(flipped=self.flip)
            solution = instantiate(family.id, triple, r, params)
            lo, hi = matching.t_interval
            grid = Grid(lo, hi, self.nt, matching.x_window[0], matching.x_window[1], self.nx)
            report = residual_stats(PDEInstance(triple), solution, grid)
            result.report = report.to_dict()
            result.passed = report.max_abs <= self.tol
        except Exception as e:
            logger.error(f"Error verifying family {family.id}: {e}")
            result.error = str(e)
            result.passed = False
        return result

    def run(self, families: Optional[List[SolutionFamily]] = None) -> List[FamilyResult]:
        """
        Verify families concurrently.

        Returns:
            Results in catalog order.
        """
        families = families if families is not None else list_families()
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            results = list(pool.map(self.verify_family, families))
        passed = sum(1 for r in results if r.passed)
        logger.info(f"Acceptance matrix: {passed}/{len(results)} families pass")
        return results
