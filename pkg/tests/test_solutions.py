import math

import pytest

from nwskit.core import MATCHING_INSTANCES, VerificationRunner
from nwskit.equivalence import EquivTransform, reducibility_lambda
from nwskit.exceptions import (
    NotReducibleError, ParameterDomainError, RealValuednessError, SignMismatchError,
)
from nwskit.models import CoefficientTriple, Grid, LambdaSign, PDEInstance, residual_stats
from nwskit.solutions import (
    FAMILIES, FamilyParams, constant_solution, families_for, get_family, instantiate,
    list_families,
)

IDS = ["TW", "P1", "P2", "P3", "P4", "P5", "N1", "N2", "N3", "Z1", "Z2", "Z3", "Z4", "Z5", "Z6"]
EPS = {LambdaSign.POSITIVE: 1, LambdaSign.NEGATIVE: -1, LambdaSign.ZERO: 0}


def _constant_equation(eps):
    return PDEInstance(CoefficientTriple.from_strings("1", str(eps), "1", (0.0, 1.0)))


def test_catalog_order_and_formulas():
    assert [f.id for f in list_families()] == IDS
    assert len(FAMILIES) == 15
    assert get_family("Z4").formula == "u = sqrt(2)/X"
    assert get_family("P1").to_dict()["params"] == ["C1", "C1prime", "C2"]


@pytest.mark.parametrize("family_id", IDS)
def test_constant_coefficient_residual(family_id):
    family = get_family(family_id)
    eps = EPS[family.lambda_sign]
    s = constant_solution(family_id, eps)
    report = residual_stats(_constant_equation(eps), s, Grid(0.0, 1.0, 21, -1.5, 1.5, 31))
    assert report.max_abs <= 1e-8, family_id
    assert report.n_evaluated > 0


@pytest.mark.parametrize("family_id", ["Z4", "Z5", "Z6"])
def test_stationary_families(family_id):
    s = constant_solution(family_id, 0)
    for t in (0.0, 0.7):
        assert s.jet(t, 0.9).u_t == 0.0


def test_parameters_override_defaults():
    s = constant_solution("P1", 1, FamilyParams.parse("C1=2, C2=0.5"))
    assert s.params == {"C1": 2.0, "C1prime": 1.0, "C2": 0.5}
    report = residual_stats(_constant_equation(1), s, Grid(0.0, 1.0, 11, -2.0, 2.0, 21))
    assert report.max_abs <= 1e-8


def test_parameter_parse_flip():
    params = FamilyParams.parse("C2=3,flip=1")
    assert params.values == {"C2": 3.0}
    assert params.flipped
    assert FamilyParams.parse(None) == FamilyParams()


@pytest.mark.parametrize("family_id, text", [
    ("P2", "C1=0"),
    ("TW", "C1=1"),
    ("P1", "C1=0,C1prime=0"),
    ("N1", "C2=inf"),
])
def test_parameter_domain_errors(family_id, text):
    eps = EPS[get_family(family_id).lambda_sign]
    with pytest.raises(ParameterDomainError):
        constant_solution(family_id, eps, FamilyParams.parse(text))


def test_bad_parameter_text_and_unknown_family():
    with pytest.raises(ParameterDomainError):
        FamilyParams.parse("C1")
    with pytest.raises(ParameterDomainError):
        FamilyParams.parse("C1=abc")
    with pytest.raises(ParameterDomainError):
        get_family("Q9")


def test_sign_mismatch():
    with pytest.raises(SignMismatchError):
        constant_solution("TW", -1)
    with pytest.raises(SignMismatchError):
        constant_solution("Z1", 1)
    triple = CoefficientTriple.from_strings("1", "0", "exp(t)", (0.0, 2.0))
    with pytest.raises(SignMismatchError):
        instantiate("N1", triple, reducibility_lambda(triple))


def test_instantiated_wave_matches_closed_form():
    triple = CoefficientTriple.from_strings("1", "0.5", "exp(t)", (0.0, 2.0))
    r = reducibility_lambda(triple)
    lam = r.lambda_
    assert lam == pytest.approx(1.0)
    s = instantiate("TW", triple, r)
    assert isinstance(s.provenance[0], EquivTransform)
    for t in (0.3, 1.0, 1.7):
        for x in (-2.0, 0.5, 3.0):
            arg = math.sqrt(2.0 * lam) * x / 4.0 - 0.75 * lam * (t - triple.t_ref)
            want = 0.5 * math.sqrt(lam / math.exp(t)) * (1.0 - math.tanh(arg))
            assert s.value(t, x) == pytest.approx(want, rel=1e-10)


def test_instantiated_family_on_power_triple(power_triple):
    s = instantiate("P1", power_triple, reducibility_lambda(power_triple))
    report = residual_stats(PDEInstance(power_triple), s, Grid(0.5, 3.0, 11, -2.0, 2.0, 21))
    assert report.max_abs <= 1e-8


def test_instantiated_validity_is_limited_to_interval(exp_triple):
    s = instantiate("TW", exp_triple, reducibility_lambda(exp_triple))
    assert s.is_valid(1.0, 0.0)
    assert not s.is_valid(2.5, 0.0)


def test_instantiate_errors():
    negative = CoefficientTriple.from_strings("1", "0", "-exp(t)", (0.0, 1.0))
    with pytest.raises(RealValuednessError):
        instantiate("TW", negative, reducibility_lambda(negative))
    stuck = CoefficientTriple.from_strings("1", "t", "1", (0.0, 1.0))
    with pytest.raises(NotReducibleError):
        instantiate("TW", stuck, reducibility_lambda(stuck))


def test_flipped_instantiation():
    triple = MATCHING_INSTANCES[LambdaSign.ZERO].triple()
    s = instantiate("Z4", triple, reducibility_lambda(triple), FamilyParams(flipped=True))
    assert s.value(0.5, 2.0) == pytest.approx(-math.sqrt(2.0) / 2.0)
    assert s.params["flip"] == 1.0


def test_families_for_sign():
    assert [f.id for f in families_for(LambdaSign.NEGATIVE)] == ["N1", "N2", "N3"]
    assert len(families_for(LambdaSign.ZERO)) == 6
    assert families_for(LambdaSign.ANY) == []


def _check_matrix(results):
    assert [r.family for r in results] == IDS
    for r in results:
        assert r.passed, r.to_dict()
        assert r.to_dict()["residual"]["max_abs"] <= 1e-8


@pytest.mark.slow
def test_acceptance_matrix_full_grid():
    runner = VerificationRunner()
    assert (runner.nt, runner.nx) == (41, 81)
    results = runner.run()
    _check_matrix(results)
    for r in results:
        residual = r.to_dict()["residual"]
        assert residual["n_evaluated"] + residual["n_poles"] == 41 * 81


def test_acceptance_matrix_flipped():
    _check_matrix(VerificationRunner(nt=11, nx=21, flip=True).run())


def test_runner_records_errors():
    runner = VerificationRunner(nt=5, nx=5)
    result = runner.verify_family(get_family("P2"), FamilyParams({"C1": 0.0}))
    assert not result.passed
    assert "C1" in result.error
    assert "residual" not in result.to_dict()
