import math

import numpy as np
import pytest
from scipy import special

from nwskit.exceptions import DomainError
from nwskit.expr import Pole
from nwskit.special import (
    distance_to_sn_zero, elliptic_K, jacobi_ds, jacobi_ds_jet, jacobi_jet,
)

MODULI = [0.1, 0.5, math.sqrt(2.0) / 2.0, 0.9, 0.999]
ARGUMENTS = np.linspace(-20.0, 20.0, 41) + 0.137


@pytest.mark.parametrize("k", MODULI)
def test_matches_scipy_ellipj(k):
    for z in ARGUMENTS:
        sn, cn, dn, _ = special.ellipj(z, k * k)
        jet = jacobi_jet(float(z), k)
        assert jet.sn == pytest.approx(sn, abs=1e-11)
        assert jet.cn == pytest.approx(cn, abs=1e-11)
        assert jet.dn == pytest.approx(dn, abs=1e-11)


@pytest.mark.parametrize("k", [0.0, 0.3, math.sqrt(2.0) / 2.0, 0.95])
def test_complete_integral_matches_scipy(k):
    assert elliptic_K(k) == pytest.approx(special.ellipk(k * k), rel=1e-13)


def test_complete_integral_at_zero_is_half_pi():
    assert elliptic_K(0.0) == pytest.approx(math.pi / 2.0, rel=1e-15)


@pytest.mark.parametrize("k", MODULI)
def test_pythagorean_identities(k):
    for z in ARGUMENTS:
        jet = jacobi_jet(float(z), k)
        assert jet.sn ** 2 + jet.cn ** 2 == pytest.approx(1.0, abs=1e-12)
        assert jet.dn ** 2 + k * k * jet.sn ** 2 == pytest.approx(1.0, abs=1e-12)


def test_period_four_K():
    k = math.sqrt(2.0) / 2.0
    period = 4.0 * elliptic_K(k)
    for z in (0.3, 1.7, -2.4):
        a, b = jacobi_jet(z, k), jacobi_jet(z + period, k)
        assert b.sn == pytest.approx(a.sn, abs=1e-12)
        assert b.cn == pytest.approx(a.cn, abs=1e-12)
        assert b.dn == pytest.approx(a.dn, abs=1e-12)


@pytest.mark.parametrize("k", [0.5, math.sqrt(2.0) / 2.0, 0.9])
def test_derivatives_against_finite_differences(k):
    h = 1e-5
    for z in (-1.3, 0.4, 2.9):
        jet = jacobi_jet(z, k)
        plus, minus = jacobi_jet(z + h, k), jacobi_jet(z - h, k)
        for name in ("sn", "cn", "dn"):
            f0, fp, fm = getattr(jet, name), getattr(plus, name), getattr(minus, name)
            assert (fp - fm) / (2 * h) == pytest.approx(getattr(jet, f"d1_{name}"), abs=1e-8)
            assert (fp - 2 * f0 + fm) / (h * h) == pytest.approx(getattr(jet, f"d2_{name}"), abs=1e-4)


def test_degenerate_moduli():
    z = 0.8
    circular = jacobi_jet(z, 0.0)
    assert circular.sn == pytest.approx(math.sin(z))
    assert circular.cn == pytest.approx(math.cos(z))
    assert circular.dn == 1.0
    hyperbolic = jacobi_jet(z, 1.0)
    assert hyperbolic.sn == pytest.approx(math.tanh(z))
    assert hyperbolic.cn == pytest.approx(1.0 / math.cosh(z))
    assert hyperbolic.dn == pytest.approx(1.0 / math.cosh(z))


def test_domain_errors():
    with pytest.raises(DomainError):
        elliptic_K(1.0)
    with pytest.raises(DomainError):
        jacobi_jet(0.5, 1.2)
    with pytest.raises(DomainError):
        jacobi_jet(0.5, -0.1)
    with pytest.raises(DomainError):
        jacobi_jet(float("inf"), 0.5)


def test_ds_pole_at_sn_zero():
    k = math.sqrt(2.0) / 2.0
    assert isinstance(jacobi_ds(0.0, k), Pole)
    assert isinstance(jacobi_ds_jet(0.0, k), Pole)
    assert isinstance(jacobi_ds(2.0 * elliptic_K(k), k), Pole)


def test_ds_jet_values():
    k = math.sqrt(2.0) / 2.0
    z, h = 0.9, 1e-5
    ds, d1, d2 = jacobi_ds_jet(z, k)
    jet = jacobi_jet(z, k)
    assert ds == pytest.approx(jet.dn / jet.sn)
    assert jacobi_ds(z, k) == pytest.approx(ds)
    plus, minus = jacobi_ds(z + h, k), jacobi_ds(z - h, k)
    assert (plus - minus) / (2 * h) == pytest.approx(d1, abs=1e-7)
    assert (plus - 2 * ds + minus) / (h * h) == pytest.approx(d2, abs=1e-3)


def test_distance_to_sn_zero():
    k = math.sqrt(2.0) / 2.0
    two_k = 2.0 * elliptic_K(k)
    assert distance_to_sn_zero(two_k + 0.1, k) == pytest.approx(0.1)
    assert distance_to_sn_zero(-0.25, k) == pytest.approx(0.25)
    assert distance_to_sn_zero(-0.25, 1.0) == pytest.approx(0.25)
