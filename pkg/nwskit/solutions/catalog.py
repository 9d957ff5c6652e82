"""
Closed-form solutions of u_t = u_xx + εu − u³ and their images on reducible
variable-coefficient equations.

Families are written in the variables (T, X) of the constant-coefficient
equation; on a reducible triple T = |λ|∫a²dt and X = √|λ|x (T = ∫a²dt and
X = x when λ = 0). Every family is evaluated as a 2-jet so that residuals use
exact derivative channels.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from nwskit.config import POLE_MARGIN
from nwskit.exceptions import ParameterDomainError, SignMismatchError
from nwskit.equivalence import ReducibilityResult, pull_solution, to_constant_transform
from nwskit.models import CoefficientTriple, Jet, LambdaSign, Solution
from nwskit.models import jets as J
from nwskit.special import distance_to_sn_zero

# Configure logging
logger = logging.getLogger(__name__)

# Modulus of every elliptic family
K_MOD = math.sqrt(2.0) / 2.0
SQRT2 = math.sqrt(2.0)

Params = Mapping[str, float]
JetBuilder = Callable[[Jet, Jet, Params], Jet]
Predicate = Callable[[float, float, Params], bool]
# (t0, t1, x0, x1) on the matching instance of the family's sign of λ
Window = Tuple[float, float, float, float]


@dataclass(frozen=True)
class FamilyParams:
    """Parameter values of a family and the alternating-sign flag u ↦ −u."""
    values: Dict[str, float] = field(default_factory=dict)
    flipped: bool = False

    @classmethod
    def parse(cls, text: Optional[str]) -> "FamilyParams":
        """Parse "C1=1,C2=0.5,flip=1"."""
        values: Dict[str, float] = {}
        flipped = False
        for item in (text or "").split(","):
            item = item.strip()
            if not item:
                continue
            name, sep, raw = item.partition("=")
            if not sep:
                raise ParameterDomainError(f"Expected name=value, got '{item}'")
            try:
                value = float(raw)
            except ValueError:
                raise ParameterDomainError(f"Parameter {name.strip()} is not a number: '{raw}'") from None
            if name.strip() == "flip":
                flipped = value != 0.0
            else:
                values[name.strip()] = value
        return cls(values, flipped)


@dataclass(frozen=True)
class SolutionFamily:
    """
    One catalog entry.

    `build` maps jets of T and X plus the parameters to the jet of u; `regular`
    is the singularity predicate (False within the pole margin). `mol_window`
    is a pole-free space-time window of the default parameters on the matching
    instance, with gradients mild enough for second-order method-of-lines runs.
    """
    id: str
    lambda_sign: LambdaSign
    param_names: Tuple[str, ...]
    defaults: Dict[str, float]
    formula: str
    build: JetBuilder = field(compare=False, repr=False)
    regular: Predicate = field(compare=False, repr=False)
    required_nonzero: Tuple[str, ...] = ()
    mol_window: Window = (0.0, 1.0, -2.0, 2.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "lambda_sign": self.lambda_sign.value,
            "params": list(self.param_names),
            "defaults": dict(self.defaults),
            "formula": self.formula,
            "mol_window": list(self.mol_window),
        }


def _always(T: float, X: float, p: Params) -> bool:
    return True


def _sn_clear(z: float) -> bool:
    return math.isfinite(z) and distance_to_sn_zero(z, K_MOD) >= POLE_MARGIN


# Traveling wave

def _tw(T: Jet, X: Jet, p: Params) -> Jet:
    return 0.5 - 0.5 * J.tanh(X.scale(SQRT2 / 4.0) - T.scale(0.75))


# λ > 0

def _xi(X: Jet) -> Jet:
    return X.scale(1.0 / SQRT2)


def _p1_parts(T: float, X: float, p: Params) -> Tuple[float, float, float]:
    xi = X / SQRT2
    return p["C2"] * math.exp(-1.5 * T), p["C1"] * math.exp(xi), p["C1prime"] * math.exp(-xi)


def _p1(T: Jet, X: Jet, p: Params) -> Jet:
    xi = _xi(X)
    plus = J.exp(xi).scale(p["C1"])
    minus = J.exp(-xi).scale(p["C1prime"])
    return (plus - minus) / (J.exp(T.scale(-1.5)).scale(p["C2"]) + plus + minus)


def _p1_regular(T: float, X: float, p: Params) -> bool:
    try:
        parts = _p1_parts(T, X, p)
    except OverflowError:
        return False
    return abs(sum(parts)) >= POLE_MARGIN * max(1.0, max(abs(v) for v in parts))


def _grow(T: Jet, p: Params, rate: float) -> Jet:
    return J.exp(T.scale(rate)).scale(p["C1"])


def _hyperbolic_family(outer, inner, kernel, half: bool) -> Tuple[JetBuilder, Predicate]:
    def build(T: Jet, X: Jet, p: Params) -> Jet:
        E = _grow(T, p, 1.5)
        xi = _xi(X)
        z = E * inner(xi) + p["C2"]
        out = E * outer(xi) * kernel(z, K_MOD)
        return out.scale(0.5) if half else out

    def regular(T: float, X: float, p: Params) -> bool:
        try:
            E = p["C1"] * math.exp(1.5 * T)
            f = math.cosh if inner is J.cosh else math.sinh
            return _sn_clear(E * f(X / SQRT2) + p["C2"])
        except OverflowError:
            return False

    return build, regular


_p2, _p2_regular = _hyperbolic_family(J.sinh, J.cosh, J.ds, half=False)
_p3, _p3_regular = _hyperbolic_family(J.cosh, J.sinh, J.ds, half=False)
_p4, _p4_regular = _hyperbolic_family(J.sinh, J.cosh, J.half_angle, half=True)
_p5, _p5_regular = _hyperbolic_family(J.cosh, J.sinh, J.half_angle, half=True)


# λ < 0

def _n1(T: Jet, X: Jet, p: Params) -> Jet:
    xi = _xi(X)
    return J.sin(xi) / (J.exp(T.scale(1.5)).scale(p["C2"]) + J.cos(xi))


def _n1_regular(T: float, X: float, p: Params) -> bool:
    try:
        return abs(p["C2"] * math.exp(1.5 * T) + math.cos(X / SQRT2)) >= POLE_MARGIN
    except OverflowError:
        return True


def _trigonometric_family(outer, inner, kernel, half: bool) -> Tuple[JetBuilder, Predicate]:
    def build(T: Jet, X: Jet, p: Params) -> Jet:
        E = _grow(T, p, -1.5)
        xi = _xi(X)
        z = E * inner(xi) + p["C2"]
        out = E * outer(xi) * kernel(z, K_MOD)
        return out.scale(0.5) if half else out

    def regular(T: float, X: float, p: Params) -> bool:
        try:
            E = p["C1"] * math.exp(-1.5 * T)
        except OverflowError:
            return False
        f = math.cos if inner is J.cos else math.sin
        return _sn_clear(E * f(X / SQRT2) + p["C2"])

    return build, regular


_n2, _n2_regular = _trigonometric_family(J.sin, J.cos, J.ds, half=False)
_n3, _n3_regular = _trigonometric_family(J.cos, J.sin, J.half_angle, half=True)


# λ = 0

def _z_arg(T: Jet, X: Jet) -> Jet:
    return X * X + T.scale(6.0)


def _z1(T: Jet, X: Jet, p: Params) -> Jet:
    return X.scale(2.0 * SQRT2) * J.ds(_z_arg(T, X), K_MOD)


def _z2(T: Jet, X: Jet, p: Params) -> Jet:
    return X.scale(SQRT2) * J.half_angle(_z_arg(T, X), K_MOD)


def _z12_regular(T: float, X: float, p: Params) -> bool:
    return _sn_clear(X * X + 6.0 * T)


def _z3(T: Jet, X: Jet, p: Params) -> Jet:
    return X.scale(2.0 * SQRT2) / _z_arg(T, X)


def _z3_regular(T: float, X: float, p: Params) -> bool:
    return abs(X * X + 6.0 * T) >= POLE_MARGIN


def _z4(T: Jet, X: Jet, p: Params) -> Jet:
    return SQRT2 / X


def _z4_regular(T: float, X: float, p: Params) -> bool:
    return abs(X) >= POLE_MARGIN


def _z5(T: Jet, X: Jet, p: Params) -> Jet:
    return J.ds(X, K_MOD).scale(SQRT2)


def _z6(T: Jet, X: Jet, p: Params) -> Jet:
    return J.half_angle(X, K_MOD).scale(SQRT2 / 2.0)


def _z56_regular(T: float, X: float, p: Params) -> bool:
    return _sn_clear(X)


_K = "k=sqrt(2)/2"

# Windows: P-families keep z between sn zeros for t in [0, 1]; N-families use
# t in [1, 2] where exp(-3/2*T) <= 1; Z1-Z3 keep X^2 + 6T in [-3, -1.7].
FAMILIES: Tuple[SolutionFamily, ...] = (
    SolutionFamily("TW", LambdaSign.POSITIVE, (), {},
                   "u = 1/2 - 1/2*tanh(sqrt(2)/4*X - 3/4*T)", _tw, _always,
                   mol_window=(0.0, 1.0, -10.0, 10.0)),
    SolutionFamily("P1", LambdaSign.POSITIVE, ("C1", "C1prime", "C2"),
                   {"C1": 1.0, "C1prime": 1.0, "C2": 1.0},
                   "u = (C1*exp(X/sqrt(2)) - C1'*exp(-X/sqrt(2))) / "
                   "(C2*exp(-3/2*T) + C1*exp(X/sqrt(2)) + C1'*exp(-X/sqrt(2)))",
                   _p1, _p1_regular, mol_window=(0.0, 1.0, -6.0, 6.0)),
    SolutionFamily("P2", LambdaSign.POSITIVE, ("C1", "C2"), {"C1": 1.0, "C2": 0.0},
                   f"u = C1*exp(3/2*T)*sinh(X/sqrt(2))*ds(C1*exp(3/2*T)*cosh(X/sqrt(2)) + C2, {_K})",
                   _p2, _p2_regular, ("C1",), mol_window=(0.0, 1.0, -3.0, 3.0)),
    SolutionFamily("P3", LambdaSign.POSITIVE, ("C1", "C2"), {"C1": 1.0, "C2": 1.8},
                   f"u = C1*exp(3/2*T)*cosh(X/sqrt(2))*ds(C1*exp(3/2*T)*sinh(X/sqrt(2)) + C2, {_K})",
                   _p3, _p3_regular, ("C1",), mol_window=(0.0, 1.0, -1.5, 1.5)),
    SolutionFamily("P4", LambdaSign.POSITIVE, ("C1", "C2"), {"C1": 1.0, "C2": 0.0},
                   "u = C1/2*exp(3/2*T)*sinh(X/sqrt(2))*(1 + cn(z))/sn(z), "
                   f"z = C1*exp(3/2*T)*cosh(X/sqrt(2)) + C2, {_K}",
                   _p4, _p4_regular, ("C1",), mol_window=(0.0, 1.0, -3.0, 3.0)),
    SolutionFamily("P5", LambdaSign.POSITIVE, ("C1", "C2"), {"C1": 1.0, "C2": 1.8},
                   "u = C1/2*exp(3/2*T)*cosh(X/sqrt(2))*(1 + cn(z))/sn(z), "
                   f"z = C1*exp(3/2*T)*sinh(X/sqrt(2)) + C2, {_K}",
                   _p5, _p5_regular, ("C1",), mol_window=(0.0, 1.0, -1.5, 1.5)),
    SolutionFamily("N1", LambdaSign.NEGATIVE, ("C2",), {"C2": 2.0},
                   "u = sin(X/sqrt(2)) / (C2*exp(3/2*T) + cos(X/sqrt(2)))",
                   _n1, _n1_regular, mol_window=(1.0, 2.0, -3.0, 3.0)),
    SolutionFamily("N2", LambdaSign.NEGATIVE, ("C1", "C2"), {"C1": 1.0, "C2": 0.5},
                   f"u = C1*exp(-3/2*T)*sin(X/sqrt(2))*ds(C1*exp(-3/2*T)*cos(X/sqrt(2)) + C2, {_K})",
                   _n2, _n2_regular, ("C1",), mol_window=(1.0, 2.0, -2.0, 2.0)),
    SolutionFamily("N3", LambdaSign.NEGATIVE, ("C1", "C2"), {"C1": 1.0, "C2": 1.8},
                   "u = C1/2*exp(-3/2*T)*cos(X/sqrt(2))*(1 + cn(z))/sn(z), "
                   f"z = C1*exp(-3/2*T)*sin(X/sqrt(2)) + C2, {_K}",
                   _n3, _n3_regular, ("C1",), mol_window=(1.0, 2.0, -2.0, 2.0)),
    SolutionFamily("Z1", LambdaSign.ZERO, (), {},
                   f"u = 2*sqrt(2)*X*ds(X^2 + 6*T, {_K})", _z1, _z12_regular,
                   mol_window=(0.0, 0.05, -1.0, 1.0)),
    SolutionFamily("Z2", LambdaSign.ZERO, (), {},
                   f"u = sqrt(2)*X*(1 + cn(z))/sn(z), z = X^2 + 6*T, {_K}", _z2, _z12_regular,
                   mol_window=(0.0, 0.05, -1.0, 1.0)),
    SolutionFamily("Z3", LambdaSign.ZERO, (), {},
                   "u = 2*sqrt(2)*X/(X^2 + 6*T)", _z3, _z3_regular,
                   mol_window=(0.0, 0.05, -1.0, 1.0)),
    SolutionFamily("Z4", LambdaSign.ZERO, (), {},
                   "u = sqrt(2)/X", _z4, _z4_regular,
                   mol_window=(0.0, 0.2, 1.0, 3.0)),
    SolutionFamily("Z5", LambdaSign.ZERO, (), {},
                   f"u = sqrt(2)*ds(X, {_K})", _z5, _z56_regular,
                   mol_window=(0.0, 0.2, 0.8, 2.9)),
    SolutionFamily("Z6", LambdaSign.ZERO, (), {},
                   f"u = sqrt(2)/2*(1 + cn(X))/sn(X), {_K}", _z6, _z56_regular,
                   mol_window=(0.0, 0.2, 0.8, 2.9)),
)

_BY_ID = {f.id: f for f in FAMILIES}


def list_families() -> List[SolutionFamily]:
    """All catalog families in catalog order."""
    return list(FAMILIES)


def get_family(family_id: str) -> SolutionFamily:
    try:
        return _BY_ID[family_id]
    except KeyError:
        raise ParameterDomainError(
            f"Unknown solution family '{family_id}'; expected one of {', '.join(_BY_ID)}"
        ) from None


def _sign_of(eps: float) -> LambdaSign:
    if eps > 0:
        return LambdaSign.POSITIVE
    if eps < 0:
        return LambdaSign.NEGATIVE
    return LambdaSign.ZERO


def _resolve_params(family: SolutionFamily, params: Optional[FamilyParams]) -> Dict[str, float]:
    params = params or FamilyParams()
    unknown = sorted(set(params.values) - set(family.param_names))
    if unknown:
        raise ParameterDomainError(f"{family.id} has no parameter(s) {unknown}")
    values = {**family.defaults, **params.values}
    for name, value in values.items():
        if not math.isfinite(value):
            raise ParameterDomainError(f"{family.id}: {name} must be finite")
    for name in family.required_nonzero:
        if values[name] == 0.0:
            raise ParameterDomainError(f"{family.id}: {name} must be nonzero")
    if family.id == "P1" and values["C1"] == 0.0 and values["C1prime"] == 0.0:
        raise ParameterDomainError("P1: C1 and C1prime must not both vanish")
    return values


def constant_solution(family_id: str, eps: int, params: Optional[FamilyParams] = None) -> Solution:
    """
    A catalog family as a solution of u_t = u_xx + εu − u³.

    Args:
        family_id: Catalog id.
        eps: +1 for λ > 0 families (and TW), −1 for λ < 0, 0 for λ = 0.
        params: Parameter values and sign flag; defaults fill the rest.

    Returns:
        The Solution with exact jet channels; `validity` is the family's
        singularity predicate.

    Raises:
        SignMismatchError: If eps does not match the family.
        ParameterDomainError: On unknown, non-finite or forbidden parameters.
    """
    family = get_family(family_id)
    if _sign_of(eps) is not family.lambda_sign:
        raise SignMismatchError(
            f"{family.id} needs lambda {family.lambda_sign.value}, got eps={eps}"
        )
    values = _resolve_params(family, params)
    build, regular = family.build, family.regular

    def evaluator(t: float, x: float) -> Jet:
        return build(Jet.var_t(t), Jet.var_x(x), values)

    def validity(t: float, x: float) -> bool:
        return regular(t, x, values)

    solution = Solution(
        family_id=family.id,
        params=dict(values),
        evaluator=evaluator,
        validity=validity,
        formula=family.formula,
    )
    if params is not None and params.flipped:
        solution = solution.negated()
    return solution


def instantiate(family_id: str, c: CoefficientTriple, r: ReducibilityResult,
                params: Optional[FamilyParams] = None) -> Solution:
    """
    A catalog family carried to a reducible variable-coefficient triple.

    Args:
        family_id: Catalog id.
        c: The triple.
        r: Its reducibility result.
        params: Parameter values and sign flag.

    Returns:
        The pulled-back Solution; provenance records the reducing transformation.

    Raises:
        NotReducibleError: If the triple is not reducible.
        SignMismatchError: If sign(λ) does not match the family.
        RealValuednessError: If c(t) is not positive on the interval.
    """
    family = get_family(family_id)
    if r.reducible and r.lambda_ is not None and _sign_of(r.lambda_) is not family.lambda_sign:
        raise SignMismatchError(
            f"{family.id} needs lambda {family.lambda_sign.value}, triple has lambda={r.lambda_:.6g}"
        )
    g = to_constant_transform(c, r)
    eps = 0 if r.lambda_ == 0.0 else int(math.copysign(1, r.lambda_))
    base = constant_solution(family_id, eps, params)
    pulled = pull_solution(g, base)
    lo, hi = c.t_interval
    inner_validity = pulled.validity

    def validity(t: float, x: float) -> bool:
        return lo <= t <= hi and inner_validity(t, x)

    logger.info(f"Instantiated {family_id} on {c.to_dict()} with lambda={r.lambda_:.6g}")
    return Solution(
        family_id=pulled.family_id,
        params=pulled.params,
        evaluator=pulled.evaluator,
        validity=validity,
        provenance=pulled.provenance,
        formula=pulled.formula,
    )


def families_for(sign: LambdaSign) -> List[SolutionFamily]:
    """Families applicable to a reducible triple with the given sign of λ."""
    return [f for f in FAMILIES if f.lambda_sign is sign]
