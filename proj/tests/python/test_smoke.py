from fractions import Fraction

import pytest

import forwardcf as fc


@pytest.fixture
def example():
    return fc.welfare_example(), fc.welfare_example_units()


def test_units_table(example):
    _, units = example
    assert units["X"] == [0, 0, 1, 1]
    assert units["Z"] == [0, 0, 0, 0]
    assert units["Y"] == [1, 2, 1, 2]


def test_ewm_cdfs(example):
    scm, units = example
    g0 = fc.ewm_post_treatment_cdf(scm, units, "X", {0.0})
    g1 = fc.ewm_post_treatment_cdf(scm, units, "X", {1.0})
    assert fc.gini_welfare(g0) == Fraction(56, 36)
    assert fc.gini_welfare(g1) == Fraction(46, 36)
    assert g0(0.0) == 0


def test_cf_optimum(example):
    scm, units = example
    best = fc.cf_optimize(scm, units, budget=2)
    assert best["assignment"] == [1, 0, 1, 0]
    assert best["welfare_exact"] == 2
    cdf = fc.cf_post_treatment_cdf(scm, units, [1, 1, 0, 0])
    assert fc.gini_welfare(cdf) == Fraction(26, 16)


def test_counterfactual_consistency(example):
    scm, units = example
    noise = fc.abduct(scm, units)
    assert noise["U_Y"] == [1, 2, 0, 1]
    same = fc.counterfactual_sample(scm, units, fc.shift("Z", 0.0, [0, 0, 0, 0]))
    assert same["Y"] == units["Y"]


def test_stepcdf_roundtrip():
    cdf = fc.StepCdf([0.0, 1.0, 3.0], [Fraction(1, 3), Fraction(2, 3), 1])
    assert cdf == fc.mixture_of_pointmasses([0, 1, 3])
    assert cdf.mean() == Fraction(4, 3)
    assert fc.welfare_functional("gini", cdf) == Fraction(2, 3)
    with pytest.raises(ValueError):
        fc.welfare_functional("median", cdf)


def test_knn_kl_identical_near_zero():
    p = [float(i) * 0.37 % 5 for i in range(200)]
    assert abs(fc.knn_kl(p, p, 10)) < 0.02
    with pytest.raises(ValueError):
        fc.knn_kl(p[:5], p, 10)


def test_two_step_and_grid():
    params = fc.StabilityParams(n=200, sigma_u=0.0, sigma_mu=1.0, seed=7)
    data = fc.simulate_two_step(params)
    assert data["y1_true"] == data["y1_counterfactual"]
    rows = fc.run_grid([0.0, 1.0], [0.5], [1.0], base=params, k=5, threads=2)
    assert [r["sigma_u"] for r in rows] == [0.0, 1.0]
    again = fc.run_grid([0.0, 1.0], [0.5], [1.0], base=params, k=5, threads=1)
    assert rows == again
    a = fc.analytic_variances(fc.StabilityParams(sigma_u=5, sigma_mu=5))
    assert a["y1_interventional"] > a["y0"] > a["y1_true"]


def test_scm_from_json():
    doc = """{"variables": [
      {"name": "A", "parents": [], "noise": {"law": "bernoulli", "p": 0.5}},
      {"name": "B", "parents": ["A"], "coeffs": [2],
       "noise": {"law": "normal", "mean": 0, "variance": 1}}]}"""
    scm = fc.scm_from_json(doc)
    assert scm.variable_names == ["A", "B"]
    values, noise = fc.sample_observational(scm, 50, 3)
    assert len(values["B"]) == 50 and set(noise) == {"U_A", "U_B"}


def test_intervention_handles(example):
    scm, units = example
    do1 = fc.atomic("Z", 1.0)
    assert do1.target == "Z"
    treated = fc.counterfactual_sample(scm, units, do1)
    assert treated["Z"] == [1, 1, 1, 1]
    fresh = fc.interventional_sample(scm, units, do1, {"U_Y"}, 11)
    assert fresh["X"] == units["X"]
