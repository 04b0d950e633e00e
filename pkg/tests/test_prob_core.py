import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bayesbounds.errors import EmptyPmf, NegativeWeight, SumOutOfTolerance, ZeroEvidence
from bayesbounds.prob_core import (
    Pmf,
    Posterior,
    check_pmf_array,
    collision_sum,
    entropy,
    make_pmf,
    map_conditional_error,
    posterior_from_likelihoods,
)

from conftest import random_pmf_batches


def test_make_pmf_examples():
    assert make_pmf([1.0]) == Pmf([1.0])
    assert make_pmf([0.5, 0.5]) == Pmf([0.5, 0.5])
    with pytest.raises(SumOutOfTolerance):
        make_pmf([0.3, 0.3, 0.3])


def test_make_pmf_clamps_and_renormalizes():
    p = make_pmf([0.5 + 4e-10, 0.5, -1e-13])
    assert p.weights[2] == 0.0
    assert math.fsum(p.weights) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(NegativeWeight):
        make_pmf([1.1, -0.1])
    with pytest.raises(EmptyPmf):
        make_pmf([])


def test_pmf_is_read_only():
    p = make_pmf([0.25, 0.75])
    with pytest.raises(ValueError):
        p.weights[0] = 1.0


@pytest.mark.parametrize("w, h", [([1.0], 0.0), ([0.5, 0.5], 1.0), ([0.5, 0.25, 0.25], 1.5)])
def test_entropy_examples(w, h):
    assert entropy(make_pmf(w)) == pytest.approx(h, abs=1e-15)


def test_entropy_ignores_zero_entries():
    assert entropy([0.5, 0.0, 0.5]) == pytest.approx(1.0, abs=1e-15)


def test_posterior_examples():
    assert posterior_from_likelihoods([0.5, 0.5], [1, 1]) == Posterior([0.5, 0.5])
    np.testing.assert_allclose(posterior_from_likelihoods([0.5, 0.5], [0.9, 0.1]).weights, [0.9, 0.1])
    # 0.25 * 0.8 = 0.2 against 0.75 * 0.4 = 0.3
    np.testing.assert_allclose(posterior_from_likelihoods([0.25, 0.75], [0.8, 0.4]).weights,
                               [0.4, 0.6], atol=1e-15)
    with pytest.raises(ZeroEvidence):
        posterior_from_likelihoods([0.5, 0.5], [0.0, 0.0])
    assert isinstance(posterior_from_likelihoods([1.0], [3.0]), Posterior)


@pytest.mark.parametrize("w, err", [([1, 0], 0.0), ([0.25] * 4, 0.75), ([0.5, 0.3, 0.2], 0.5)])
def test_map_conditional_error_examples(w, err):
    assert map_conditional_error(make_pmf(w)) == pytest.approx(err, abs=1e-15)


def test_stacked_input():
    w = np.array([[0.5, 0.5], [1.0, 0.0]])
    np.testing.assert_allclose(entropy(w), [1.0, 0.0])
    np.testing.assert_allclose(map_conditional_error(w), [0.5, 0.0])
    with pytest.raises(SumOutOfTolerance):
        check_pmf_array([[0.5, 0.5], [0.5, 0.4]])


pmfs = st.integers(1, 64).flatmap(
    lambda m: st.lists(st.floats(0.0, 1.0), min_size=m, max_size=m)
).filter(lambda xs: sum(xs) > 1e-6).map(lambda xs: make_pmf(np.array(xs) / sum(xs)))


@settings(max_examples=300, deadline=None)
@given(pmfs)
def test_entropy_range_and_map_error_cap(p):
    m = len(p)
    h = entropy(p)
    assert -1e-12 <= h <= math.log2(m) + 1e-12
    assert map_conditional_error(p) <= 1 - 1 / m + 1e-12


@settings(max_examples=300, deadline=None)
@given(pmfs)
def test_max_probability_inequalities(p):
    w = p.weights
    s = collision_sum(p)
    assert w.max() <= math.sqrt(s) + 1e-12
    assert w.max() >= s - 1e-12
    assert 2 * (1 - math.sqrt(s)) >= 1 - s - 1e-12
    assert s >= 2.0 ** -entropy(p) - 1e-12


def test_entropy_equals_log_m_only_at_uniform(rng):
    for m in range(2, 65):
        assert entropy(np.full(m, 1.0 / m)) == pytest.approx(math.log2(m), abs=1e-12)
    for m, batch in random_pmf_batches(rng, 2000, range(2, 65)):
        h = entropy(batch)
        flat = np.all(np.abs(batch - 1.0 / m) < 1e-9, axis=1)
        assert np.all(h[~flat] < math.log2(m) - 1e-12)


def test_collision_equality_cases():
    for m in range(1, 65):
        u = np.full(m, 1.0 / m)
        assert collision_sum(u) == pytest.approx(2.0 ** -entropy(u), abs=1e-12)
        d = np.eye(m)[0]
        assert collision_sum(d) == pytest.approx(2.0 ** -entropy(d), abs=1e-12)
