"""
Jacobi elliptic functions of real argument and the complete elliptic integral
of the first kind, computed by the descending Landen / AGM recursion
(https://dlmf.nist.gov/22.20#ii).
"""
import math
from dataclasses import dataclass
from typing import List, Tuple, Union

from nwskit.config import AGM_TOL, AGM_MAX_ITER, SN_POLE_THRESHOLD
from nwskit.exceptions import DomainError
from nwskit.expr import Pole


@dataclass(frozen=True)
class EllipticJet:
    """sn, cn, dn with their first and second derivatives in the argument."""
    k: float
    sn: float
    cn: float
    dn: float
    d1_sn: float
    d1_cn: float
    d1_dn: float
    d2_sn: float
    d2_cn: float
    d2_dn: float


def _check_modulus(k: float):
    if not (0.0 <= k <= 1.0) or math.isnan(k):
        raise DomainError(f"Modulus must lie in [0, 1], got {k}")


def _agm_sequence(k: float) -> Tuple[List[float], List[float]]:
    """Arithmetic-geometric mean sequences (a_n, c_n) started at (1, k', k)."""
    a, b, c = 1.0, math.sqrt((1.0 - k) * (1.0 + k)), k
    a_seq, c_seq = [a], [c]
    n = 0
    while abs(c) > AGM_TOL and n < AGM_MAX_ITER:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
        n += 1
    return a_seq, c_seq


def elliptic_K(k: float) -> float:
    """
    Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k')).

    Args:
        k: Modulus in [0, 1).

    Returns:
        K(k).

    Raises:
        DomainError: If k is outside [0, 1).
    """
    _check_modulus(k)
    if k >= 1.0:
        raise DomainError("K(k) diverges at k = 1")
    a_seq, _ = _agm_sequence(k)
    return math.pi / (2.0 * a_seq[-1])


def _sn_cn_dn(z: float, k: float) -> Tuple[float, float, float]:
    if k == 0.0:
        return math.sin(z), math.cos(z), 1.0
    if k == 1.0:
        sech = 1.0 / math.cosh(z)
        return math.tanh(z), sech, sech

    a_seq, c_seq = _agm_sequence(k)
    quarter = math.pi / (2.0 * a_seq[-1])

    # reduce to [-2K, 2K]; sn and cn have period 4K
    period = 4.0 * quarter
    z = z - period * round(z / period)

    n = len(a_seq) - 1
    phi = (2.0 ** n) * a_seq[n] * z
    while n > 0:
        phi = 0.5 * (phi + math.asin(c_seq[n] / a_seq[n] * math.sin(phi)))
        n -= 1

    sn, cn = math.sin(phi), math.cos(phi)
    # dn >= k' > 0 on the real line
    dn = math.sqrt(max(0.0, 1.0 - k * k * sn * sn))
    return sn, cn, dn


def jacobi_jet(z: float, k: float) -> EllipticJet:
    """
    Jacobi sn, cn, dn at (z, k) together with their z-derivatives.

    Second derivatives come from the first-derivative rules, not differencing.

    Args:
        z: Finite real argument.
        k: Modulus in [0, 1].

    Returns:
        The EllipticJet.
    """
    _check_modulus(k)
    if not math.isfinite(z):
        raise DomainError(f"Argument must be finite, got {z}")
    sn, cn, dn = _sn_cn_dn(z, k)
    k2 = k * k
    return EllipticJet(
        k=k, sn=sn, cn=cn, dn=dn,
        d1_sn=cn * dn,
        d1_cn=-sn * dn,
        d1_dn=-k2 * sn * cn,
        d2_sn=-sn * (dn * dn + k2 * cn * cn),
        d2_cn=-cn * (1.0 - 2.0 * k2 * sn * sn),
        d2_dn=-k2 * dn * (cn * cn - sn * sn),
    )


def jacobi_ds(z: float, k: float) -> Union[float, Pole]:
    """ds = dn/sn, or a Pole where |sn| < 1e-12 (z = 0 mod 2K)."""
    jet = jacobi_jet(z, k)
    if abs(jet.sn) < SN_POLE_THRESHOLD:
        return Pole(f"ds({z!r}, {k!r})", "sn vanishes")
    return jet.dn / jet.sn


def jacobi_ds_jet(z: float, k: float) -> Union[Tuple[float, float, float], Pole]:
    """
    ds and its first two z-derivatives.

    ds' = -cn/sn^2 and ds'' = dn(2 - sn^2)/sn^3.

    Returns:
        (ds, ds', ds'') or a Pole.
    """
    jet = jacobi_jet(z, k)
    sn = jet.sn
    if abs(sn) < SN_POLE_THRESHOLD:
        return Pole(f"ds({z!r}, {k!r})", "sn vanishes")
    return (
        jet.dn / sn,
        -jet.cn / (sn * sn),
        jet.dn * (2.0 - sn * sn) / (sn * sn * sn),
    )


def distance_to_sn_zero(z: float, k: float) -> float:
    """Distance from z to the nearest zero of sn(., k), i.e. to 2mK."""
    if k >= 1.0:
        return abs(z)
    half_period = 2.0 * elliptic_K(k)
    return abs(z - half_period * round(z / half_period))
