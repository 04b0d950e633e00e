import math

import numpy as np
import pytest

from bayesbounds.errors import InvalidDensity
from bayesbounds.hypothesis_testing import (
    BinaryContinuousProblem,
    appendix1_problem,
    bhattacharyya_risk_bound,
    chernoff_risk_bound,
    cos_laplace_density,
    decision_boundaries,
    exact_bayes_risk,
    gamma_sweep,
    gaussian_density,
    harmonic_risk_bounds,
    monte_carlo_bayes_risk,
    sample_cos_laplace,
    sweep_row,
)


def normal(mu, s2=1.0):
    c = 1.0 / math.sqrt(2 * math.pi * s2)
    return lambda y: c * np.exp(-((np.asarray(y, dtype=float) - mu) ** 2) / (2 * s2))


def uniform_on(a, b):
    return lambda y: np.where((np.asarray(y) >= a) & (np.asarray(y) <= b), 1.0 / (b - a), 0.0)


def test_identical_densities():
    prob = BinaryContinuousProblem(0.5, 0.5, normal(0), normal(0), points=(0.0,))
    assert exact_bayes_risk(prob) == pytest.approx(0.5, abs=1e-9)
    lo, hi = harmonic_risk_bounds(prob)
    assert (lo, hi) == pytest.approx((0.25, 0.5), abs=1e-9)
    assert chernoff_risk_bound(prob)[1] == pytest.approx(0.5, abs=1e-9)
    assert bhattacharyya_risk_bound(prob) == pytest.approx(0.5, abs=1e-9)
    assert decision_boundaries(prob) == []


def test_disjoint_supports():
    prob = BinaryContinuousProblem(0.5, 0.5, uniform_on(-2, -1), uniform_on(1, 2),
                                   points=(-2.0, -1.0, 1.0, 2.0))
    assert exact_bayes_risk(prob) == 0.0
    assert harmonic_risk_bounds(prob) == (0.0, 0.0)
    assert chernoff_risk_bound(prob)[1] == 0.0
    assert bhattacharyya_risk_bound(prob) == 0.0


def test_shifted_normals_oracle():
    prob = BinaryContinuousProblem(0.5, 0.5, normal(1), normal(-1), points=(-1.0, 0.0, 1.0))
    assert decision_boundaries(prob) == pytest.approx([0.0], abs=1e-9)
    # Phi(-1) through erfc
    assert exact_bayes_risk(prob) == pytest.approx(0.5 * math.erfc(1 / math.sqrt(2)), abs=1e-10)
    assert bhattacharyya_risk_bound(prob) == pytest.approx(0.5 * math.exp(-0.5), abs=1e-10)
    alpha, val = chernoff_risk_bound(prob)
    assert alpha == pytest.approx(0.5, abs=1e-3)
    assert val == pytest.approx(0.5 * math.exp(-0.5), abs=1e-9)
    lo, hi = harmonic_risk_bounds(prob)
    assert lo <= exact_bayes_risk(prob) <= hi


def test_unequal_priors_boundary():
    # 0.8 N(1,1) = 0.2 N(-1,1)  <=>  2y = ln(0.25)
    prob = BinaryContinuousProblem(0.8, 0.2, normal(1), normal(-1))
    assert decision_boundaries(prob) == pytest.approx([math.log(0.25) / 2], abs=1e-9)


def test_invalid_inputs():
    with pytest.raises(InvalidDensity):
        BinaryContinuousProblem(0.6, 0.6, normal(0), normal(0))
    with pytest.raises(InvalidDensity):
        BinaryContinuousProblem(0.5, 0.5, lambda y: 2 * normal(0)(y), normal(0))
    with pytest.raises(ValueError):
        appendix1_problem(0.0)


def test_cosine_laplace_densities():
    prob = appendix1_problem(0.125)
    assert prob.integrate(cos_laplace_density) == pytest.approx(1.0, abs=1e-10)
    assert prob.integrate(lambda y: y * y * cos_laplace_density(y)) == pytest.approx(1.0, abs=1e-10)
    f2 = gaussian_density(0.125)
    assert prob.integrate(f2) == pytest.approx(1.0, abs=1e-10)
    # variance 1 / (2 gamma)
    assert prob.integrate(lambda y: y * y * f2(y)) == pytest.approx(4.0, abs=1e-9)


def test_cosine_laplace_reference_values():
    row = sweep_row(0.125)
    assert row.orderings_hold()
    assert row.exact == pytest.approx(0.2951629077, abs=1e-8)
    assert row.p_ub == pytest.approx(2 * row.p_lb)
    assert row.p_lb < row.exact < row.chernoff <= row.bhattacharyya


def test_cosine_laplace_exact_matches_dense_grid():
    prob = appendix1_problem(0.125)
    y = np.linspace(-400, 400, 4_000_001)
    g = np.minimum(prob.joint1(y), prob.joint2(y))
    riemann = float(np.sum(g) * (y[1] - y[0]))
    assert exact_bayes_risk(prob) == pytest.approx(riemann, abs=1e-8)


def test_cosine_laplace_boundaries_symmetric():
    prob = appendix1_problem(0.125)
    roots = decision_boundaries(prob)
    assert len(roots) % 2 == 0 and roots
    np.testing.assert_allclose(roots, [-r for r in reversed(roots)], atol=1e-8)
    for r in roots:
        assert abs(prob.discriminant(r)) < 1e-9


def test_cosine_laplace_boundaries_match_dense_scan():
    prob = appendix1_problem(0.125)
    y = np.linspace(-20, 20, 2_000_001)
    s = np.sign(prob.discriminant(y))
    dense = int(np.count_nonzero(s[1:] * s[:-1] < 0))
    assert len(decision_boundaries(prob)) == dense


def test_monte_carlo_agrees_with_quadrature():
    prob = appendix1_problem(0.125)
    est, se = monte_carlo_bayes_risk(prob, 1_000_000, seed=3)
    assert abs(est - exact_bayes_risk(prob)) < 4 * se


def test_cos_laplace_sampler_moments():
    x = sample_cos_laplace(np.random.default_rng(5), 400_000)
    assert abs(x.mean()) < 0.01
    assert x.var() == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("gamma", [1e-3, 0.5, 2.0, 1e3, 1e4])
def test_sweep_orderings_extreme_gamma(gamma):
    row = sweep_row(gamma)
    assert row.orderings_hold()
    assert 0.0 <= row.exact <= 0.5 + 1e-9


def test_sweep_order_independent_of_jobs():
    gammas = [0.01, 0.1, 1.0, 10.0]
    assert gamma_sweep(gammas, n_jobs=1) == gamma_sweep(gammas, n_jobs=3)
