import math

import pytest

from nwskit.equivalence import gauge_transform
from nwskit.exceptions import PatternMismatchError
from nwskit.expr import ONE, ZERO, U, X, parse
from nwskit.models import CoefficientTriple, PDEInstance, VectorField
from nwskit.solutions import constant_solution
from nwskit.symmetry import (
    CaseTag, case_two_operator, check_lie_invariance, classify_lie, default_box,
    invariant_surface_residual, lie_basis_ungauged, nonclassical_catalog, verify_case_two,
    verify_nonclassical,
)


def _c(text):
    return parse(text, {"t"})


def _gauged(c_text, interval=(0.0, 1.0)):
    return PDEInstance(CoefficientTriple.from_strings("1", "0", c_text, interval))


def _nonzero(rng, lo=0.1, hi=3.0):
    return float(rng.uniform(lo, hi) * rng.choice([-1.0, 1.0]))


def test_classify_power():
    case = classify_lie(_c("3*(2*t+1)^2"), (0.0, 5.0))
    assert case.tag is CaseTag.POWER
    assert case.params["rho"] == pytest.approx(2.0, rel=1e-10)
    assert case.params["gamma"] == 1.0
    assert case.params["delta"] == pytest.approx(0.5, rel=1e-10)
    assert case.params["mu"] == pytest.approx(12.0, rel=1e-10)
    assert len(case.basis) == 2


def test_classify_exponential():
    case = classify_lie(_c("5*exp(-3*t)"), (0.0, 1.0))
    assert case.tag is CaseTag.EXPONENTIAL
    assert case.params["sigma"] == pytest.approx(-3.0, rel=1e-12)
    assert case.params["mu"] == pytest.approx(5.0, rel=1e-12)
    assert len(case.basis) == 2


def test_classify_constant():
    case = classify_lie(_c("1"), (0.0, 1.0))
    assert case.tag is CaseTag.CONSTANT
    assert case.params == {"mu": 1.0}
    labels = [v.label for v in case.basis]
    assert labels == ["∂x", "∂t", "dilation"]
    dilation = case.basis[2]
    assert dilation.tau(t=0.3) == pytest.approx(0.6)
    assert dilation.eta(u=1.5) == pytest.approx(-1.5)


def test_classify_arbitrary_control():
    case = classify_lie(_c("exp(t^2)"), (0.0, 1.0))
    assert case.tag is CaseTag.ARBITRARY
    assert case.params == {}
    assert [v.label for v in case.basis] == ["∂x"]
    assert case.to_dict()["tag"] == "Arbitrary"


def test_classification_is_scale_consistent():
    for text in ("3*(2*t+1)^2", "5*exp(-3*t)", "7"):
        one = classify_lie(_c(text), (0.0, 2.0))
        two = classify_lie(_c(f"2*({text})"), (0.0, 2.0))
        assert one.tag is two.tag
        assert two.params["mu"] / one.params["mu"] == pytest.approx(2.0, rel=1e-10)


def _check_basis(case, c_text):
    p = _gauged(c_text)
    for v in case.basis:
        assert check_lie_invariance(p, v), f"{v} fails on c = {c_text}"


def test_random_power_instances(rng):
    for _ in range(20):
        mu, rho = _nonzero(rng), _nonzero(rng)
        gamma = _nonzero(rng)
        # keep γt + δ positive on [0, 1]
        delta = float(rng.uniform(0.2, 3.0)) + max(0.0, -gamma)
        text = f"{mu!r}*({gamma!r}*t + {delta!r})^({rho!r})"
        case = classify_lie(_c(text), (0.0, 1.0))
        assert case.tag is CaseTag.POWER, text
        assert case.params["rho"] == pytest.approx(rho, rel=1e-6)
        for t in (0.1, 0.5, 0.9):
            want = mu * (gamma * t + delta) ** rho
            assert case.reconstruct(t) == pytest.approx(want, rel=1e-8)
        _check_basis(case, text)


def test_random_exponential_instances(rng):
    for _ in range(20):
        mu, sigma = _nonzero(rng), _nonzero(rng)
        text = f"{mu!r}*exp({sigma!r}*t)"
        case = classify_lie(_c(text), (0.0, 1.0))
        assert case.tag is CaseTag.EXPONENTIAL, text
        assert case.params["sigma"] == pytest.approx(sigma, rel=1e-6)
        assert case.params["mu"] == pytest.approx(mu, rel=1e-6)
        _check_basis(case, text)


def test_random_constant_instances(rng):
    for _ in range(20):
        mu = _nonzero(rng)
        case = classify_lie(_c(repr(mu)), (0.0, 1.0))
        assert case.tag is CaseTag.CONSTANT
        assert case.params["mu"] == pytest.approx(mu, rel=1e-12)
        assert len(case.basis) == 3
        _check_basis(case, repr(mu))


def test_lie_invariance_controls():
    p = _gauged("t^2", (0.5, 2.0))
    assert check_lie_invariance(p, VectorField(ZERO, ONE, ZERO))
    good = VectorField(parse("2*t"), X, parse("-3*u"))
    bad = VectorField(parse("2*t"), X, parse("-2*u"))
    assert check_lie_invariance(p, good)
    assert not check_lie_invariance(p, bad)


def test_ungauged_constant_case():
    triple = CoefficientTriple.from_strings("exp(t)", "t", "2*exp(2*t - t^2 + 0.25)", (0.0, 1.0))
    case = classify_lie(triple.c, triple.t_interval, triple=triple)
    assert case.tag is CaseTag.CONSTANT
    assert not case.gauged
    assert case.params["mu"] == pytest.approx(2.0, rel=1e-9)
    assert len(case.basis) == 3
    p = PDEInstance(triple)
    for v in case.basis:
        assert check_lie_invariance(p, v), str(v)


def test_ungauged_basis_on_reducible_triple(power_triple):
    case = classify_lie(power_triple.c, power_triple.t_interval, triple=power_triple)
    assert case.tag is CaseTag.EXPONENTIAL
    assert case.params["sigma"] == pytest.approx(2.0, rel=1e-8)
    p = PDEInstance(power_triple)
    for v in case.basis:
        assert check_lie_invariance(p, v), str(v)


def test_ungauged_exponential_row_with_unit_a():
    triple = CoefficientTriple.from_strings("1", "0", "4*exp(-2*t)", (0.0, 1.0))
    case = classify_lie(triple.c, triple.t_interval, triple=triple)
    shift = lie_basis_ungauged(triple, case)[1]
    # 2∂t − σu∂u
    assert shift.tau(t=0.2) == pytest.approx(2.0)
    assert shift.eta(t=0.2, u=1.0) == pytest.approx(2.0)


def test_pattern_mismatch():
    source = CoefficientTriple.from_strings("1", "0", "exp(t)", (0.0, 1.0))
    other = CoefficientTriple.from_strings("1", "0", "exp(2*t)", (0.0, 1.0))
    case = classify_lie(source.c, source.t_interval, triple=source)
    with pytest.raises(PatternMismatchError):
        lie_basis_ungauged(other, case)


def test_rational_operator():
    assert verify_nonclassical(parse("-3/x"), parse("-3*u/x^2"), _c("1")).passed
    report = verify_nonclassical(parse("-3/x"), parse("-2*u/x^2"), _c("1"))
    assert not report.passed
    assert [v.verdict for v in report.equations][:2] == [True, True]
    assert not report.equations[2].verdict
    assert report.to_dict()["equations"][2]["verdict"] == "fail"


def test_polynomial_operator_both_signs():
    for alpha in (0.25, -0.25):
        beta = 3.0 / math.sqrt(2.0)
        xi = parse(f"{beta!r}*exp({2 * alpha!r}*t)*u")
        eta = parse(f"({alpha!r} - {beta * beta / 3.0!r}*exp({4 * alpha!r}*t)*u^2)*u")
        c = _c(f"{2.0 / 9.0 * beta * beta!r}*exp({4 * alpha!r}*t)")
        assert verify_nonclassical(xi, eta, c).passed


def test_translation_is_degenerate_operator():
    report = verify_nonclassical(ZERO, ZERO, _c("1"))
    assert report.passed
    assert len(report.equations) == 4


@pytest.mark.parametrize("tag, params, names", [
    (CaseTag.CONSTANT, {"mu": 1.5}, ["X2"]),
    (CaseTag.EXPONENTIAL, {"sigma": 1.0, "mu": 1.0}, ["X1", "X3", "X4"]),
    (CaseTag.EXPONENTIAL, {"sigma": -1.0, "mu": 1.0}, ["X1", "X5"]),
    (CaseTag.EXPONENTIAL, {"sigma": 2.5, "mu": -0.7}, ["X3", "X4"]),
    (CaseTag.EXPONENTIAL, {"sigma": -0.6, "mu": 2.0}, ["X1", "X5"]),
])
def test_catalog_operators_pass_and_perturbations_fail(tag, params, names):
    ops = nonclassical_catalog((tag, params))
    assert [op.name for op in ops] == names
    for op in ops:
        v = op.vector_field
        assert verify_nonclassical(v.xi, v.eta, op.c).passed, op.name
        perturbed = verify_nonclassical(v.xi, v.eta + 0.01 * U, op.c)
        assert not perturbed.passed
        assert max(e.max_scaled_residual for e in perturbed.equations) >= 1e-3


def test_catalog_accepts_classification_and_is_empty_otherwise():
    case = classify_lie(_c("exp(t)"), (0.0, 1.0))
    assert [op.name for op in nonclassical_catalog(case)] == ["X1", "X3", "X4"]
    assert nonclassical_catalog((CaseTag.POWER, {"mu": 1.0, "gamma": 1.0, "delta": 1.0, "rho": 2.0})) == []
    assert nonclassical_catalog((CaseTag.ARBITRARY, {})) == []


def test_linear_in_u_operators():
    g = parse("-3/x")
    assert verify_case_two(g, _c("1")).passed
    assert not verify_case_two(g, _c("exp(t)")).passed
    v = case_two_operator(g, _c("1"))
    assert verify_nonclassical(v.xi, v.eta, _c("1")).passed
    assert verify_case_two(g, _c("1"), default_box()).passed


def test_invariant_surface_residual():
    wave = constant_solution("TW", 1)
    drift = VectorField(ONE, parse(f"{3.0 / math.sqrt(2.0)!r}"), ZERO)
    for point in [(0.0, 0.0), (0.4, -1.3), (0.9, 2.2)]:
        assert invariant_surface_residual(drift, wave, point) == pytest.approx(0.0, abs=1e-10)

    z4 = constant_solution("Z4", 0)
    assert invariant_surface_residual(VectorField(ONE, ZERO, ZERO), z4, (0.3, 1.2)) == pytest.approx(0.0, abs=1e-14)
    x2 = nonclassical_catalog((CaseTag.CONSTANT, {"mu": 1.0}))[0].vector_field
    assert invariant_surface_residual(x2, z4, (0.0, 1.0)) == pytest.approx(6.0 * math.sqrt(2.0))


@pytest.mark.parametrize("a, b, c, interval, tag", [
    ("1", "1 - 1/t", "t^2", (0.5, 3.0), CaseTag.EXPONENTIAL),
    ("exp(t)", "t", "2*exp(2*t - t^2 + 0.25)", (0.0, 1.0), CaseTag.CONSTANT),
    ("1", "1", "t^2*exp(-2*t)", (0.5, 3.0), CaseTag.POWER),
])
def test_gauged_weight_classifies_like_ungauged_triple(a, b, c, interval, tag):
    triple = CoefficientTriple.from_strings(a, b, c, interval)
    _, gauged = gauge_transform(triple)
    case = classify_lie(gauged.c, gauged.t_interval)
    assert case.tag is tag
    assert classify_lie(triple.c, triple.t_interval, triple).tag is tag
    if tag is CaseTag.EXPONENTIAL:
        assert case.params["sigma"] == pytest.approx(2.0, rel=1e-9)
    elif tag is CaseTag.CONSTANT:
        assert case.params["mu"] == pytest.approx(2.0, rel=1e-9)
    else:
        assert case.params["rho"] == pytest.approx(2.0, rel=1e-9)
