import math
from fractions import Fraction

import numpy as np
import pytest

from mixlearn import (
    CapExceededError,
    ContractError,
    Family,
    ParameterGrid,
    SampleDataset,
    SharedParams,
    candidate_family,
    empirical_measure,
    mde_select,
    pmf_or_pdf,
    precompute_mde,
    sample,
    scheffe_set,
    set_probability,
    uniform_spec,
)


def _poisson(indices, max_index=5):
    return uniform_spec(ParameterGrid(Family.POISSON, 1, 0, max_index), indices)


def _gaussian(indices, sigma=1.0):
    grid = ParameterGrid(Family.GAUSSIAN, 1, 0, 4)
    return uniform_spec(grid, indices, SharedParams(sigma=sigma))


def test_discrete_scheffe_set_pointwise_definition():
    a, b = _poisson((1, 4)), _poisson((2, 3))
    s = scheffe_set(a, b)
    for x in range(s.x_max + 1):
        inside = pmf_or_pdf(a, x) >= pmf_or_pdf(b, x)
        assert (x in s.points) == inside


def test_continuous_scheffe_set_single_crossing():
    a, b = _gaussian((0,)), _gaussian((3,))
    s = scheffe_set(a, b)
    assert s.kind == "intervals"
    assert len(s.intervals) == 1
    lo, hi = s.intervals[0]
    assert math.isinf(lo) and lo < 0
    assert hi == pytest.approx(1.5, abs=1e-6)


def test_identical_candidates_full_support_set():
    a = _gaussian((0, 3))
    s = scheffe_set(a, a)
    assert s.intervals == ((-math.inf, math.inf),)


def test_set_probability_discrete_and_complement():
    a, b = _poisson((1, 4)), _poisson((2, 3))
    s = scheffe_set(a, b)
    pa, pb = set_probability(a, s), set_probability(b, s)
    # by construction P_a(A) - P_b(A) equals the TV up to truncation
    assert pa >= pb
    assert 0.0 <= pa <= 1.0


def test_set_probability_continuous_matches_cdf():
    a, b = _gaussian((0,)), _gaussian((3,))
    s = scheffe_set(a, b)
    from mixlearn import cdf

    assert set_probability(a, s) == pytest.approx(cdf(a, 1.5), abs=1e-9)


def test_empirical_measure_exact_fraction():
    data = SampleDataset(Family.POISSON, np.array([0, 1, 1, 5, 9]))
    a, b = _poisson((1, 4)), _poisson((2, 3))
    s = scheffe_set(a, b)
    mass = empirical_measure(data, s)
    direct = Fraction(
        sum(1 for v in [0, 1, 1, 5, 9] if v <= s.x_max and v in s.points), 5
    )
    assert mass == direct


def test_empirical_measure_intervals():
    data = SampleDataset(Family.GAUSSIAN, np.array([-1.0, 0.2, 1.4, 1.6, 9.0]))
    s = scheffe_set(_gaussian((0,)), _gaussian((3,)))
    assert empirical_measure(data, s) == Fraction(3, 5)


def test_candidate_family_lexicographic_and_cap():
    grid = ParameterGrid(Family.POISSON, 1, 0, 5)
    cands = candidate_family(grid, 2)
    assert len(cands) == 15
    assert cands[0].indices == (0, 1)
    assert cands[-1].indices == (4, 5)
    with pytest.raises(CapExceededError):
        candidate_family(ParameterGrid(Family.POISSON, 1, 0, 400), 3, cap=100)


def test_mde_oracle_mode_selects_truth():
    grid = ParameterGrid(Family.POISSON, 1, 0, 5)
    cands = candidate_family(grid, 2)
    truth = _poisson((1, 4))
    result = mde_select(cands, truth=truth)
    assert cands[result.winner].indices == (1, 4)
    assert result.delta == pytest.approx(0.0, abs=1e-12)


def test_mde_sampled_mode_with_precompute():
    grid = ParameterGrid(Family.POISSON, 1, 0, 5)
    cands = candidate_family(grid, 2)
    pre = precompute_mde(cands)
    truth = _poisson((1, 4))
    data = sample(truth, 50_000, seed=41)
    r1 = mde_select(cands, data=data, precomputed=pre)
    r2 = mde_select(cands, data=data)
    assert cands[r1.winner].indices == (1, 4)
    assert r1.winner == r2.winner
    assert r1.delta == pytest.approx(r2.delta)


def test_mde_requires_exactly_one_of_data_and_truth():
    grid = ParameterGrid(Family.POISSON, 1, 0, 5)
    cands = candidate_family(grid, 2)
    with pytest.raises(ContractError):
        mde_select(cands)


def test_mde_guarantee_factor_on_perturbed_truth():
    # winner's distance to the sampling distribution is within 4*Delta + 3/m
    # of the best candidate (here truth is in the family, Delta ~ 0)
    grid = ParameterGrid(Family.POISSON, 1, 0, 5)
    cands = candidate_family(grid, 2)
    truth = _poisson((1, 4))
    m = 50_000
    data = sample(truth, m, seed=97)
    result = mde_select(cands, data=data)
    assert result.delta <= 4 * 0.0 + 3.0 * math.sqrt(math.log(len(cands)) / m)


def test_gaussian_mde_oracle():
    grid = ParameterGrid(Family.GAUSSIAN, 1, 0, 4)
    shared = SharedParams(sigma=1.0)
    cands = candidate_family(grid, 2, shared)
    result = mde_select(cands, truth=uniform_spec(grid, (0, 3), shared))
    assert cands[result.winner].indices == (0, 3)
