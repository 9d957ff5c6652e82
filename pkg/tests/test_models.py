import io
import math

import pandas as pd
import pytest

from nwskit.exceptions import AllPolesError, InvariantViolationError, UndeclaredVariableError
from nwskit.expr import Pole, parse
from nwskit.models import (
    CoefficientTriple, Grid, Jet, PDEInstance, VectorField, check_sign_definite,
    expression_solution, residual, residual_stats, sample, zero_solution,
)
from nwskit.models import jets as J
from nwskit.solutions import constant_solution

TW_TEXT = "0.5 - 0.5*tanh(sqrt(2)/4*x - 3/4*t)"


def test_triple_requires_sign_definite_a_and_c():
    with pytest.raises(InvariantViolationError):
        CoefficientTriple.from_strings("1", "0", "t", (-1.0, 1.0))
    with pytest.raises(InvariantViolationError):
        CoefficientTriple.from_strings("sin(10*t)", "0", "1", (0.0, 1.0))
    with pytest.raises(InvariantViolationError):
        CoefficientTriple.from_strings("1", "0", "1", (1.0, 1.0))


def test_triple_coefficients_depend_on_t_only():
    with pytest.raises(UndeclaredVariableError):
        CoefficientTriple.from_strings("x", "0", "1", (0.0, 1.0))
    with pytest.raises(InvariantViolationError):
        CoefficientTriple(parse("1 + x"), parse("0"), parse("1"), (0.0, 1.0))


def test_triple_defaults_and_dict(unit_triple):
    assert unit_triple.t_ref == 0.5
    assert unit_triple.at(0.3) == (1.0, 1.0, 1.0)
    assert unit_triple.to_dict() == {
        "a": "1.0", "b": "1.0", "c": "1.0", "t_interval": [0.0, 1.0], "t_ref": 0.5,
    }


def test_negative_c_is_allowed_in_the_class():
    triple = CoefficientTriple.from_strings("1", "0", "-exp(t)", (0.0, 1.0))
    assert triple.c_sign() == -1
    assert check_sign_definite(parse("2 + t"), (0.0, 1.0), "f") == 1


def test_vector_field_needs_tau_or_xi():
    with pytest.raises(InvariantViolationError):
        VectorField(0.0, 0.0, parse("u"))
    field = VectorField(1.0, parse("-3/x"), parse("-3*u/x^2"), "X2")
    out = field.to_dict()
    assert sorted(out) == ["eta", "label", "tau", "xi"]
    assert out["label"] == "X2"
    assert parse(out["xi"])(x=1.5) == pytest.approx(-2.0)
    assert parse(out["eta"])(x=1.5, u=0.9) == pytest.approx(-1.2)


def test_jet_arithmetic_matches_product_and_quotient_rules():
    x = Jet.var_x(0.7)
    t = Jet.var_t(0.2)
    f = (x * x + t) / (1.0 + x)
    # f = (x² + t)/(1 + x)
    assert f.u == pytest.approx((0.49 + 0.2) / 1.7)
    assert f.u_t == pytest.approx(1.0 / 1.7)
    assert f.u_x == pytest.approx((2 * 0.7 * 1.7 - 0.69) / 1.7 ** 2)
    assert f.u_xx == pytest.approx(2.0 * (1.0 + 0.2) / 1.7 ** 3)
    g = J.tanh(x.scale(2.0))
    th = math.tanh(1.4)
    assert g.u_x == pytest.approx(2.0 * (1 - th * th))
    assert g.u_xx == pytest.approx(-8.0 * th * (1 - th * th))


def test_traveling_wave_expression_residual(unit_triple):
    s = expression_solution(parse(TW_TEXT), "tw")
    p = PDEInstance(unit_triple)
    for point in [(0.1, -3.0), (0.5, 0.0), (0.9, 2.5)]:
        assert abs(residual(p, s, point)) <= 1e-12
    report = residual_stats(p, s, Grid(0.0, 1.0, 11, -5.0, 5.0, 21))
    assert report.max_abs <= 1e-12
    assert report.n_evaluated == 231 and report.n_poles == 0


def test_zero_solution_solves_every_equation(exp_triple):
    report = residual_stats(PDEInstance(exp_triple), zero_solution(), Grid(0.0, 1.0, 3, -1.0, 1.0, 3))
    assert report.max_abs == 0.0


def test_residual_reports_poles():
    z4 = constant_solution("Z4", 0)
    p = PDEInstance(CoefficientTriple.from_strings("1", "0", "1", (0.0, 1.0)))
    assert isinstance(residual(p, z4, (0.5, 0.0)), Pole)
    report = residual_stats(p, z4, Grid(0.0, 1.0, 2, -1.0, 1.0, 3))
    assert report.n_poles == 2
    assert report.n_evaluated + report.n_poles == 6
    with pytest.raises(AllPolesError):
        residual_stats(p, z4, Grid(0.0, 1.0, 3, 0.0, 0.0, 1))


def test_sample_writes_empty_field_at_poles():
    z4 = constant_solution("Z4", 0)
    p = PDEInstance(CoefficientTriple.from_strings("1", "0", "1", (0.0, 1.0)))
    buf = io.StringIO()
    table = sample(p, z4, Grid(0.0, 0.0, 1, -1.0, 1.0, 3), buf)
    assert list(table.columns) == ["t", "x", "u", "residual"]
    assert pd.isna(table.loc[1, "u"])
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,x,u"
    assert lines[2] == "0,0,"
    assert float(lines[3].split(",")[2]) == pytest.approx(math.sqrt(2.0))


def test_negated_solution_flips_sign():
    s = constant_solution("TW", 1)
    flipped = s.negated()
    assert flipped.value(0.3, 0.4) == pytest.approx(-s.value(0.3, 0.4))
    assert flipped.params["flip"] == 1.0
    assert flipped.negated().params["flip"] == 0.0
