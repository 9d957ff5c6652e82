"""
Forward 2-jets (u, u_t, u_x, u_xx) of closed-form fields.

Only the channels needed by the residual of u_t = a²u_xx + bu − cu³ are
carried; u_tt and u_tx are never formed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from nwskit.exceptions import PoleEncountered
from nwskit.special import jacobi_jet, jacobi_ds_jet
from nwskit.config import SN_POLE_THRESHOLD
from nwskit.expr import Pole

Scalar = Union[int, float]


@dataclass(frozen=True)
class Jet:
    u: float
    u_t: float = 0.0
    u_x: float = 0.0
    u_xx: float = 0.0

    @staticmethod
    def const(value: float) -> "Jet":
        return Jet(float(value))

    @staticmethod
    def var_t(t: float) -> "Jet":
        return Jet(float(t), 1.0, 0.0, 0.0)

    @staticmethod
    def var_x(x: float) -> "Jet":
        return Jet(float(x), 0.0, 1.0, 0.0)

    def scale(self, s: float) -> "Jet":
        return Jet(s * self.u, s * self.u_t, s * self.u_x, s * self.u_xx)

    def __add__(self, other: Union["Jet", Scalar]) -> "Jet":
        if not isinstance(other, Jet):
            return Jet(self.u + other, self.u_t, self.u_x, self.u_xx)
        return Jet(self.u + other.u, self.u_t + other.u_t,
                   self.u_x + other.u_x, self.u_xx + other.u_xx)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return self.scale(-1.0)

    def __sub__(self, other: Union["Jet", Scalar]) -> "Jet":
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Jet":
        return (-self) + other

    def __mul__(self, other: Union["Jet", Scalar]) -> "Jet":
        if not isinstance(other, Jet):
            return self.scale(float(other))
        u, v = self, other
        return Jet(
            u.u * v.u,
            u.u_t * v.u + u.u * v.u_t,
            u.u_x * v.u + u.u * v.u_x,
            u.u_xx * v.u + 2.0 * u.u_x * v.u_x + u.u * v.u_xx,
        )

    __rmul__ = __mul__

    def recip(self) -> "Jet":
        if self.u == 0.0:
            raise PoleEncountered("division by a vanishing jet")
        r = 1.0 / self.u
        r2 = r * r
        return Jet(r, -self.u_t * r2, -self.u_x * r2,
                   -self.u_xx * r2 + 2.0 * self.u_x * self.u_x * r2 * r)

    def __truediv__(self, other: Union["Jet", Scalar]) -> "Jet":
        if not isinstance(other, Jet):
            if other == 0.0:
                raise PoleEncountered("division by zero")
            return self.scale(1.0 / other)
        return self * other.recip()

    def __rtruediv__(self, other: Scalar) -> "Jet":
        return self.recip().scale(float(other))

    def compose(self, f0: float, f1: float, f2: float) -> "Jet":
        """Jet of f(u) given f, f', f'' at u."""
        return Jet(f0, f1 * self.u_t, f1 * self.u_x, f2 * self.u_x * self.u_x + f1 * self.u_xx)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.u, self.u_t, self.u_x, self.u_xx))


def _checked(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise PoleEncountered(what)
    return value


def exp(j: Jet) -> Jet:
    try:
        e = math.exp(j.u)
    except OverflowError:
        raise PoleEncountered("exp overflow") from None
    return j.compose(e, e, e)


def sin(j: Jet) -> Jet:
    s, c = math.sin(j.u), math.cos(j.u)
    return j.compose(s, c, -s)


def cos(j: Jet) -> Jet:
    s, c = math.sin(j.u), math.cos(j.u)
    return j.compose(c, -s, -c)


def sinh(j: Jet) -> Jet:
    s, c = _checked(math.sinh(j.u), "sinh"), _checked(math.cosh(j.u), "cosh")
    return j.compose(s, c, s)


def cosh(j: Jet) -> Jet:
    s, c = _checked(math.sinh(j.u), "sinh"), _checked(math.cosh(j.u), "cosh")
    return j.compose(c, s, c)


def tanh(j: Jet) -> Jet:
    th = math.tanh(j.u)
    d1 = 1.0 - th * th
    return j.compose(th, d1, -2.0 * th * d1)


def sqrt(j: Jet) -> Jet:
    if j.u <= 0.0:
        raise PoleEncountered("sqrt of nonpositive jet")
    r = math.sqrt(j.u)
    return j.compose(r, 0.5 / r, -0.25 / (r * j.u))


def ds(j: Jet, k: float) -> Jet:
    """ds(u, k) = dn/sn."""
    out = jacobi_ds_jet(j.u, k)
    if isinstance(out, Pole):
        raise PoleEncountered(out.node)
    return j.compose(*out)


def half_angle(j: Jet, k: float) -> Jet:
    """(1 + cn(u, k)) / sn(u, k); reduces to cot(u/2) at k = 0."""
    e = jacobi_jet(j.u, k)
    sn, cn, dn = e.sn, e.cn, e.dn
    if abs(sn) < SN_POLE_THRESHOLD:
        raise PoleEncountered(f"(1+cn)/sn at {j.u!r}")
    sn2 = sn * sn
    f0 = (1.0 + cn) / sn
    f1 = -dn * (1.0 + cn) / sn2
    f2 = (k * k * cn * (1.0 + cn) / sn
          + dn * dn / sn
          + 2.0 * dn * dn * cn * (1.0 + cn) / (sn2 * sn))
    return j.compose(f0, f1, f2)
