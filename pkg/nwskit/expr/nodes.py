"""
Expression tree nodes.

Expressions are immutable. Arithmetic on nodes goes through the folding
constructors (`add`, `mul`, ...), which apply constant folding only; the
parser builds raw nodes so that printing and re-parsing reproduce the tree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Mapping, Tuple, Union

from nwskit.exceptions import PoleEncountered, UndeclaredVariableError

Number = Union[int, float]

# Below this |cos| the tangent is treated as a pole
TAN_POLE_EPS = 1e-15


@dataclass(frozen=True)
class Pole:
    """Marker returned instead of a value when evaluation hits a singularity."""
    node: str
    reason: str = ""

    def __str__(self):
        return f"pole at {self.node}" + (f" ({self.reason})" if self.reason else "")


def _finite(value: float, node: "Expr") -> float:
    if math.isfinite(value):
        return value
    raise PoleEncountered(node)


class Expr:
    """Base class of all expression nodes."""
    __slots__ = ("operands",)

    def __init__(self, operands: Tuple["Expr", ...] = ()):
        self.operands = operands

    # Evaluation -----------------------------------------------------------
    def _ev(self, env: Mapping[str, float]) -> float:
        raise NotImplementedError

    def __call__(self, **env: float) -> Union[float, Pole]:
        return evaluate(self, env)

    # Structure ------------------------------------------------------------
    def free_vars(self) -> FrozenSet[str]:
        out: FrozenSet[str] = frozenset()
        for op in self.operands:
            out = out | op.free_vars()
        return out

    def depends_on(self, var: str) -> bool:
        return var in self.free_vars()

    def rebuild(self, operands: Tuple["Expr", ...]) -> "Expr":
        raise NotImplementedError

    def subs(self, mapping: Mapping[str, "Expr"]) -> "Expr":
        if not self.operands:
            return self
        return self.rebuild(tuple(op.subs(mapping) for op in self.operands))

    def text(self) -> str:
        raise NotImplementedError

    def is_number(self, value: float = None) -> bool:
        return False

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"{type(self).__name__}({self.text()!r})"

    # Arithmetic -----------------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __rpow__(self, other):
        return power(as_expr(other), self)

    def __neg__(self):
        return neg(self)


def as_expr(value: Union["Expr", Number]) -> "Expr":
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Num(float(value))
    raise TypeError(f"Cannot convert {type(value).__name__} to an expression")


def _atomic_text(e: Expr) -> str:
    """Text of a child, parenthesized unless it is an atom."""
    if isinstance(e, Num):
        return e.text() if e.value >= 0 else f"({e.text()})"
    if isinstance(e, (Const, Var, Func)):
        return e.text()
    return f"({e.text()})"


class Num(Expr):
    __slots__ = ("value",)

    def __init__(self, value: float):
        super().__init__(())
        self.value = float(value)

    def _ev(self, env):
        return self.value

    def rebuild(self, operands):
        return self

    def text(self):
        return repr(self.value)

    def is_number(self, value=None):
        return value is None or self.value == value


CONSTANTS: Dict[str, float] = {"pi": math.pi, "e": math.e}


class Const(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        super().__init__(())
        if name not in CONSTANTS:
            raise ValueError(f"Unknown constant: {name}")
        self.name = name

    @property
    def value(self) -> float:
        return CONSTANTS[self.name]

    def _ev(self, env):
        return CONSTANTS[self.name]

    def rebuild(self, operands):
        return self

    def text(self):
        return self.name


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        super().__init__(())
        self.name = name

    def _ev(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise UndeclaredVariableError(self.name) from None

    def free_vars(self):
        return frozenset((self.name,))

    def subs(self, mapping):
        return mapping.get(self.name, self)

    def rebuild(self, operands):
        return self

    def text(self):
        return self.name


def _ln(v: float) -> float:
    if v <= 0.0:
        raise ArithmeticError("ln of nonpositive")
    return math.log(v)


def _sqrt(v: float) -> float:
    if v < 0.0:
        raise ArithmeticError("sqrt of negative")
    return math.sqrt(v)


def _tan(v: float) -> float:
    if abs(math.cos(v)) < TAN_POLE_EPS:
        raise ArithmeticError("tan at pole")
    return math.tan(v)


def _coth(v: float) -> float:
    if v == 0.0:
        raise ArithmeticError("coth at zero")
    return 1.0 / math.tanh(v)


FUNCTIONS: Dict[str, Callable[[float], float]] = {
    "exp": math.exp,
    "ln": _ln,
    "sqrt": _sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "tan": _tan,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "coth": _coth,
    "abs": abs,
}


class Func(Expr):
    """Application of a named elementary function."""
    __slots__ = ("name",)

    def __init__(self, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ValueError(f"Unknown function: {name}")
        super().__init__((arg,))
        self.name = name

    @property
    def arg(self) -> Expr:
        return self.operands[0]

    def _ev(self, env):
        x = self.arg._ev(env)
        try:
            value = FUNCTIONS[self.name](x)
        except (ArithmeticError, ValueError):
            raise PoleEncountered(self) from None
        return _finite(value, self)

    def rebuild(self, operands):
        return Func(self.name, operands[0])

    def text(self):
        return f"{self.name}({self.arg.text()})"


class Neg(Expr):
    __slots__ = ()

    def __init__(self, arg: Expr):
        super().__init__((arg,))

    @property
    def arg(self) -> Expr:
        return self.operands[0]

    def _ev(self, env):
        return -self.arg._ev(env)

    def rebuild(self, operands):
        return neg(operands[0])

    def text(self):
        return f"(-{_atomic_text(self.arg)})"


class Binary(Expr):
    __slots__ = ()
    symbol = "?"

    def __init__(self, left: Expr, right: Expr):
        super().__init__((left, right))

    @property
    def left(self) -> Expr:
        return self.operands[0]

    @property
    def right(self) -> Expr:
        return self.operands[1]

    def text(self):
        return f"{_atomic_text(self.left)}{self.symbol}{_atomic_text(self.right)}"


class Add(Binary):
    __slots__ = ()
    symbol = "+"

    def _ev(self, env):
        return _finite(self.left._ev(env) + self.right._ev(env), self)

    def rebuild(self, operands):
        return add(*operands)


class Sub(Binary):
    __slots__ = ()
    symbol = "-"

    def _ev(self, env):
        return _finite(self.left._ev(env) - self.right._ev(env), self)

    def rebuild(self, operands):
        return sub(*operands)


class Mul(Binary):
    __slots__ = ()
    symbol = "*"

    def _ev(self, env):
        return _finite(self.left._ev(env) * self.right._ev(env), self)

    def rebuild(self, operands):
        return mul(*operands)


class Div(Binary):
    __slots__ = ()
    symbol = "/"

    def _ev(self, env):
        num = self.left._ev(env)
        den = self.right._ev(env)
        if den == 0.0:
            raise PoleEncountered(self)
        return _finite(num / den, self)

    def rebuild(self, operands):
        return div(*operands)


class Pow(Binary):
    __slots__ = ()
    symbol = "^"

    def _ev(self, env):
        base = self.left._ev(env)
        expo = self.right._ev(env)
        try:
            return _finite(math.pow(base, expo), self)
        except (ValueError, OverflowError, ZeroDivisionError):
            raise PoleEncountered(self) from None

    def rebuild(self, operands):
        return power(*operands)


# Folding constructors -------------------------------------------------------

ZERO = Num(0.0)
ONE = Num(1.0)


def _num(e: Expr):
    return e.value if isinstance(e, Num) else None


def add(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va + vb)
    if va == 0.0:
        return b
    if vb == 0.0:
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va - vb)
    if vb == 0.0:
        return a
    if va == 0.0:
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va * vb)
    if va == 0.0 or vb == 0.0:
        return ZERO
    if va == 1.0:
        return b
    if vb == 1.0:
        return a
    if va == -1.0:
        return neg(b)
    if vb == -1.0:
        return neg(a)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None and vb != 0.0:
        return Num(va / vb)
    if va == 0.0 and vb is None:
        return ZERO
    if vb == 1.0:
        return a
    return Div(a, b)


def power(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if vb == 0.0:
        return ONE
    if vb == 1.0:
        return a
    if va is not None and vb is not None:
        try:
            value = math.pow(va, vb)
            if math.isfinite(value):
                return Num(value)
        except (ValueError, OverflowError, ZeroDivisionError):
            pass
    return Pow(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def func(name: str, arg: Union[Expr, Number]) -> Expr:
    return Func(name, as_expr(arg))


# Convenience wrappers used when building operators and coefficients in code
def exp(e): return func("exp", e)
def ln(e): return func("ln", e)
def sqrt(e): return func("sqrt", e)
def sin(e): return func("sin", e)
def cos(e): return func("cos", e)
def tan(e): return func("tan", e)
def sinh(e): return func("sinh", e)
def cosh(e): return func("cosh", e)
def tanh(e): return func("tanh", e)
def coth(e): return func("coth", e)


T, X, U = Var("t"), Var("x"), Var("u")


def evaluate(e: Expr, point: Mapping[str, float]) -> Union[float, Pole]:
    """
    Evaluate an expression at a point.

    Args:
        e: The expression.
        point: Assignment of every free variable of `e` to a finite real.

    Returns:
        The value, or a `Pole` naming the offending node.

    Raises:
        UndeclaredVariableError: If a free variable is not assigned.
    """
    try:
        return e._ev(point)
    except PoleEncountered as p:
        return Pole(str(p.where)[:200])


def to_text(e: Expr) -> str:
    return e.text()


def additive_terms(e: Expr) -> Tuple[Expr, ...]:
    """Flatten top-level sums, differences and negations."""
    if isinstance(e, (Add, Sub)):
        return additive_terms(e.left) + additive_terms(e.right)
    if isinstance(e, Neg):
        return additive_terms(e.arg)
    return (e,)
