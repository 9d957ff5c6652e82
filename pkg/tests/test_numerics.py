import math

import pytest
from scipy import integrate as sp_integrate

from nwskit.exceptions import InversionError, QuadratureError
from nwskit.expr import Num, differentiate, evaluate, parse
from nwskit.numerics import (
    Antiderivative, InverseFunction, antiderivative, gauss_kronrod_15, integral_expr,
    integrate, inverse_expr, invert_monotone,
)
from nwskit.numerics.quadrature import expr_integrand


@pytest.mark.parametrize("f, a, b", [
    (lambda s: math.exp(-s * s), 0.0, 2.0),
    (lambda s: math.sin(s) ** 2 / (1.0 + s * s), -3.0, 5.0),
    (lambda s: math.sqrt(s), 0.0, 1.0),
    (lambda s: 1.0 / (1.0 + 25.0 * s * s), -1.0, 1.0),
])
def test_integrate_matches_scipy_quad(f, a, b):
    value, error = integrate(f, a, b)
    reference, _ = sp_integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-13)
    assert value == pytest.approx(reference, abs=1e-10)
    assert error < 1e-9


def test_integrate_reversed_bounds_and_empty():
    forward, _ = integrate(math.cos, 0.0, 1.0)
    backward, _ = integrate(math.cos, 1.0, 0.0)
    assert backward == pytest.approx(-forward)
    assert integrate(math.cos, 2.0, 2.0) == (0.0, 0.0)


def test_single_panel_is_exact_for_polynomials():
    value, error, _ = gauss_kronrod_15(lambda s: s ** 6 - 2 * s, 0.0, 2.0)
    assert value == pytest.approx(128.0 / 7.0 - 4.0, rel=1e-14)
    assert error < 1e-10


def test_integrate_pole_raises():
    f = expr_integrand(parse("1/t"))
    with pytest.raises(QuadratureError):
        integrate(f, -1.0, 1.0)


def test_integrate_endpoint_singularity_uses_global_budget():
    value, error = integrate(lambda s: s ** -0.5, 0.0, 1.0)
    assert value == pytest.approx(2.0, abs=1e-9)
    assert error <= 1e-12
    value, _ = integrate(lambda s: math.sqrt(s), 1.0, 0.0)
    assert value == pytest.approx(-2.0 / 3.0, abs=1e-12)


def test_antiderivative_of_sqrt_from_branch_point():
    handle = antiderivative(parse("sqrt(t)"), 0.0)
    for t in (0.25, 1.0, 2.5):
        assert handle(t) == pytest.approx(2.0 / 3.0 * t ** 1.5, abs=1e-11)


def test_integrate_panel_limit_raises():
    with pytest.raises(QuadratureError):
        integrate(lambda s: math.sin(1.0 / s) / s, 1e-9, 1.0)


def test_antiderivative_handle_memoizes_and_extends():
    handle = antiderivative(parse("exp(t)"), 0.0)
    assert handle(3.7) == pytest.approx(math.exp(3.7) - 1.0, rel=1e-11)
    assert handle(-2.5) == pytest.approx(math.exp(-2.5) - 1.0, abs=1e-11)
    ts = [t for t, _ in handle.checkpoints]
    assert ts == sorted(ts)
    assert min(ts) < -1.0 and max(ts) > 2.0
    assert handle(3.7) == handle(3.7)
    assert handle.derivative(1.0) == pytest.approx(math.e)


def test_antiderivative_across_pole_raises():
    handle = antiderivative(parse("1/t"), -1.0)
    with pytest.raises(QuadratureError):
        handle(1.0)


def test_invert_monotone_increasing_with_bracket_growth():
    f = lambda s: s ** 3 + s
    assert invert_monotone(f, 10.0, 0.0, 1.0) == pytest.approx(2.0, abs=1e-12)
    assert invert_monotone(f, 10.0, 0.0, 1.0, fprime=lambda s: 3 * s * s + 1) == pytest.approx(2.0, abs=1e-12)


def test_invert_monotone_decreasing():
    assert invert_monotone(lambda s: -2.0 * s, 3.0, 0.0, 1.0) == pytest.approx(-1.5, abs=1e-12)


def test_invert_constant_function_fails():
    with pytest.raises(InversionError):
        invert_monotone(lambda s: 1.0, 3.0, 0.0, 1.0)


def test_integral_expr_constant_is_exact():
    e = integral_expr(Num(2.0), 1.0)
    assert not isinstance(e, Antiderivative)
    assert evaluate(e, {"t": 3.0}) == 4.0


def test_integral_expr_node_and_derivative():
    e = integral_expr(parse("cos(t)"), 0.0)
    assert isinstance(e, Antiderivative)
    assert evaluate(e, {"t": 1.0}) == pytest.approx(math.sin(1.0), abs=1e-12)
    d = differentiate(e, "t")
    assert evaluate(d, {"t": 0.4}) == pytest.approx(math.cos(0.4))
    assert differentiate(e, "x").is_number(0.0)


def test_integral_expr_composes_with_substitution():
    e = integral_expr(parse("2*t"), 0.0).subs({"t": parse("t^2")})
    assert evaluate(e, {"t": 1.5}) == pytest.approx(1.5 ** 4, rel=1e-12)
    d = differentiate(e, "t")
    assert evaluate(d, {"t": 1.5}) == pytest.approx(4 * 1.5 ** 3, rel=1e-12)


def test_inverse_expr_numeric():
    inv = inverse_expr(parse("t^3 + t"), (0.0, 1.0))
    assert isinstance(inv, InverseFunction)
    assert evaluate(inv, {"t": 10.0}) == pytest.approx(2.0, abs=1e-12)
    assert evaluate(differentiate(inv, "t"), {"t": 10.0}) == pytest.approx(1.0 / 13.0, rel=1e-10)


def test_inverse_expr_affine_and_double_inverse():
    affine = inverse_expr(parse("2*t + 1"), (0.0, 1.0))
    assert not isinstance(affine, InverseFunction)
    assert evaluate(affine, {"t": 5.0}) == pytest.approx(2.0)
    f = parse("t^3 + t")
    back = inverse_expr(inverse_expr(f, (0.0, 1.0)), (0.0, 10.0))
    assert back.text() == f.text()
    assert inverse_expr(parse("t"), (0.0, 1.0)).text() == "t"


def test_inverse_of_constant_raises():
    with pytest.raises(InversionError):
        inverse_expr(parse("3"), (0.0, 1.0))
