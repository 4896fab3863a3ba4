import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sysdep.exceptions import DomainError, InvalidParameter, SizeLimit
from sysdep.models import (EXAMPLES, FAMILIES, Baseline, IndExp, IndWeibull, MarginalProduct, example, from_dict,
                           independent_counterpart, joint_sf, marginal_sf, validate)

from conftest import model, random_mome

MOME_111 = {"family": "MOME", "n": 2, "rates": {"1": 1.0, "2": 1.0, "1,2": 1.0}}


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_examples_validate_and_round_trip(family):
    m = model(family)
    assert m.family == family
    again = from_dict(m.to_dict())
    assert again == m
    assert validate(m.to_dict()) == m


def test_validate_accepts_spec_example():
    m = validate({"family": "MOME", "n": 2, "rates": {"1": 1.0, "2": 1.0, "1,2": 0.5}})
    assert m.n == 2
    assert m.rates.aggregate() == pytest.approx(2.5)


@pytest.mark.parametrize("doc, field", [
    ({"family": "MOME", "n": 2, "rates": {"1,2": -0.5}}, "rates"),
    ({"family": "FGMW", "n": 2, "lambdas": [1, 1], "alphas": [1, 1], "gamma": 1.0}, "gamma"),
    ({"family": "LB2", "n": 2, "lambdas": [1, 1], "alphas": [1, 1], "gamma": 0.0}, "gamma"),
    ({"family": "IndWeibull", "n": 2, "lambdas": [1, 1], "alphas": [1, 0]}, "alphas"),
    ({"family": "IndExp", "n": 2, "lambdas": [1.0]}, "lambdas"),
    ({"family": "LB1", "n": 2, "lambdas": [1, 1], "alphas": [1, 1], "delta": 0.1, "m": 0.5}, "m"),
    ({"family": "Nope", "n": 2}, "family"),
    ({"family": "IndExp", "n": 0, "lambdas": []}, "n"),
])
def test_invalid_parameters_name_the_field(doc, field):
    with pytest.raises(InvalidParameter) as info:
        from_dict(doc)
    assert info.value.field.startswith(field)


def test_subset_key_out_of_range():
    with pytest.raises(InvalidParameter):
        from_dict({"family": "MOME", "n": 2, "rates": {"1,3": 0.5}})


def test_unexpected_field_rejected():
    with pytest.raises(InvalidParameter):
        from_dict({**example("IndExp"), "extra": 1})


def test_joint_sf_spec_examples():
    assert joint_sf(from_dict({"family": "IndExp", "n": 2, "lambdas": [1, 2]}), [0, 0]) == 1.0
    assert_allclose(joint_sf(from_dict(MOME_111), [1, 1]), math.exp(-3), rtol=1e-14)
    fgmw = from_dict({"family": "FGMW", "n": 2, "lambdas": [1, 1], "alphas": [1, 1], "gamma": 0.5})
    expected = math.exp(-2) * (1 + 0.5 * (1 - math.exp(-1)) ** 2)
    assert_allclose(joint_sf(fgmw, [1, 1]), expected, rtol=1e-14)
    assert_allclose(expected, 0.162374, atol=1e-6)


def test_joint_sf_domain_errors():
    m = from_dict(MOME_111)
    for bad in ([-1.0, 0.0], [np.inf, 1.0], [1.0]):
        with pytest.raises(DomainError):
            joint_sf(m, bad)


def test_marginal_sf_examples():
    assert_allclose(marginal_sf(from_dict({"family": "IndExp", "n": 2, "lambdas": [1, 2]}), 2, 1.0), math.exp(-2))
    assert_allclose(marginal_sf(from_dict(MOME_111), 1, 1.0), math.exp(-2))
    assert marginal_sf(model("FGMW"), 2, 0.0) == 1.0
    with pytest.raises(DomainError):
        marginal_sf(from_dict(MOME_111), 3, 1.0)
    with pytest.raises(DomainError):
        marginal_sf(from_dict(MOME_111), 1, -0.1)


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_marginal_equals_joint_with_other_slots_zero(family, rng):
    m = model(family)
    for t in rng.uniform(0.0, 3.0, 5):
        for i in range(1, m.n + 1):
            T = np.zeros(m.n)
            T[i - 1] = t
            assert_allclose(marginal_sf(m, i, t), joint_sf(m, T), rtol=1e-13)


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_joint_sf_origin_and_monotone(family, rng):
    m = model(family)
    assert joint_sf(m, np.zeros(m.n)) == 1.0
    for _ in range(20):
        a = rng.uniform(0, 2, m.n)
        b = a + rng.uniform(0, 1, m.n)
        assert joint_sf(m, b) <= joint_sf(m, a) + 1e-15
        assert 0.0 <= joint_sf(m, b) <= 1.0


def test_counterparts_spec_examples():
    m = from_dict(MOME_111)
    pl = independent_counterpart(m, Baseline.PAPER_LITERAL)
    tm = independent_counterpart(m, Baseline.TRUE_MARGINAL)
    assert isinstance(pl, IndExp) and list(pl.lambdas) == [1.0, 1.0]
    assert isinstance(tm, IndExp) and list(tm.lambdas) == [2.0, 2.0]
    w = model("IndWeibull")
    assert independent_counterpart(w, "paper-literal") == w
    assert independent_counterpart(w, "true-marginal") == w


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_true_marginal_counterpart_has_the_true_marginals(family, rng):
    m = model(family)
    ind = independent_counterpart(m, Baseline.TRUE_MARGINAL)
    assert ind.is_independent
    t = rng.uniform(0.01, 3.0, 7)
    for i in range(m.n):
        assert_allclose(ind.marginal_log_sf(i, t), m.marginal_log_sf(i, t), rtol=1e-12)


def test_crowder_true_marginal_is_marginal_product():
    ind = independent_counterpart(model("Crowder"), "true-marginal")
    assert isinstance(ind, MarginalProduct)


def test_mome_is_puod_against_true_marginals(rng):
    for n in (2, 3, 4):
        m = random_mome(rng, n)
        ind = independent_counterpart(m, "true-marginal")
        T = rng.uniform(0, 2, size=(50, n))
        assert np.all(m.log_joint_sf(T) >= ind.log_joint_sf(T) - 1e-14)


def test_weibull_shapes_match_mome_sampler_convention():
    w = from_dict({"family": "IndWeibull", "n": 1, "lambdas": [2.0], "alphas": [3.0]})
    assert isinstance(w, IndWeibull)
    assert_allclose(joint_sf(w, [0.5]), math.exp(-2 * 0.5**3))


def test_examples_dict_is_not_shared():
    doc = example("MOME")
    doc["rates"]["1"] = 99.0
    assert EXAMPLES["MOME"]["rates"]["1"] == 1.0


def test_subset_enumeration_cap():
    from sysdep._numerics import nonempty_subsets

    with pytest.raises(SizeLimit):
        nonempty_subsets(21)
