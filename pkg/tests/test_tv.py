import math
from fractions import Fraction

import pytest

from mixlearn import (
    CertificateUnavailableError,
    Family,
    FamilyMismatchError,
    ParameterGrid,
    SharedParams,
    g_transform,
    pmf_or_pdf,
    separation_survey,
    tail_certificate,
    tv_exact,
    tv_lower_bound_charfn,
    uniform_spec,
)
from mixlearn.special import normal_cdf
from mixlearn.tv import density_crossings, discrete_truncation


def _poisson(indices, max_index=5):
    return uniform_spec(ParameterGrid(Family.POISSON, 1, 0, max_index), indices)


def test_tv_self_distance_is_zero():
    a = _poisson((1, 4))
    iv = tv_exact(a, a)
    assert iv.hi <= 1e-9
    assert iv.lo >= 0.0


def test_tv_discrete_brackets_direct_sum():
    a, b = _poisson((1, 4)), _poisson((2, 3))
    direct = 0.5 * sum(
        abs(pmf_or_pdf(a, x) - pmf_or_pdf(b, x)) for x in range(200)
    )
    iv = tv_exact(a, b)
    assert iv.lo <= direct + 1e-12 <= iv.hi + 1e-9
    assert iv.hi - iv.lo <= 1e-9


def test_tv_gaussian_single_components_closed_form():
    # TV between N(mu, 1) and N(mu + d, 1) is 2 Phi(d/2) - 1
    grid = ParameterGrid(Family.GAUSSIAN, 1, 0, 4)
    shared = SharedParams(sigma=1.0)
    a = uniform_spec(grid, (0,), shared)
    b = uniform_spec(grid, (1,), shared)
    expected = 2.0 * normal_cdf(0.5, 0.0, 1.0) - 1.0
    iv = tv_exact(a, b, tol=1e-7)
    assert iv.lo <= expected <= iv.hi
    assert abs(0.5 * (iv.lo + iv.hi) - expected) < 1e-6


def test_tv_chi_squared_pair():
    grid = ParameterGrid(Family.CHI_SQUARED, 1, 1, 5)
    a = uniform_spec(grid, (2,))
    b = uniform_spec(grid, (5,))
    iv = tv_exact(a, b, tol=1e-6)
    assert 0.0 < iv.lo < iv.hi < 1.0
    # cross-check by dense numeric L1 integration
    import numpy as np

    xs = np.linspace(1e-9, 60, 600001)
    fa = np.array([pmf_or_pdf(a, float(x)) for x in xs[:: 100]])
    fb = np.array([pmf_or_pdf(b, float(x)) for x in xs[:: 100]])
    approx = 0.5 * np.trapezoid(np.abs(fa - fb), xs[:: 100])
    assert abs(0.5 * (iv.lo + iv.hi) - approx) < 1e-3


def test_tv_requires_matching_families():
    grid = ParameterGrid(Family.GAUSSIAN, 1, 0, 4)
    a = uniform_spec(grid, (0,), SharedParams(sigma=1.0))
    b = uniform_spec(grid, (0,), SharedParams(sigma=2.0))
    with pytest.raises(FamilyMismatchError):
        tv_exact(a, b)


def test_density_crossings_single_gaussians():
    grid = ParameterGrid(Family.GAUSSIAN, 1, 0, 4)
    shared = SharedParams(sigma=1.0)
    a = uniform_spec(grid, (0,), shared)
    b = uniform_spec(grid, (3,), shared)
    crossings = density_crossings(a, b)
    assert len(crossings) == 1
    assert crossings[0] == pytest.approx(1.5, abs=1e-6)


def test_discrete_truncation_certifies_tail():
    spec = _poisson((1, 4))
    r = discrete_truncation(spec, 1e-9)
    remaining = 1.0 - sum(pmf_or_pdf(spec, x) for x in range(r))
    assert remaining <= 1e-9


def test_tail_certificate_bounds_true_tail():
    spec = _poisson((1, 4))
    a, r = 1.5, 12
    bound = tail_certificate(
        Family.POISSON, SharedParams(), [Fraction(1), Fraction(4)], a, r,
        weights=[Fraction(1, 2), Fraction(1, 2)],
    )
    true_tail = sum(a**x * pmf_or_pdf(spec, x) for x in range(r, 200))
    assert true_tail <= bound


def test_tail_certificate_divergence():
    with pytest.raises(CertificateUnavailableError):
        tail_certificate(
            Family.GEOMETRIC_P, SharedParams(), [Fraction(1, 4)], 2.0, 10
        )


def test_charfn_lower_bound_below_tv():
    a, b = _poisson((1, 4)), _poisson((2, 3))
    cert = tv_lower_bound_charfn(a, b, L=1.0)
    iv = tv_exact(a, b)
    assert cert.value <= iv.hi + 1e-12
    assert abs(cert.witness_t) <= math.pi


def test_g_transform_expected_values_poisson():
    g = g_transform(Family.POISSON, SharedParams(), 0.7)
    total = sum(
        pmf_or_pdf(_poisson((3,)), x) * g.evaluate(x) for x in range(120)
    )
    assert abs(total - g.expected(3)) < 1e-9
    assert abs(g.expected(3)) == pytest.approx(1.0)


def test_g_transform_modulus_bounds_hold():
    for fam, shared in (
        (Family.POISSON, SharedParams()),
        (Family.CHI_SQUARED, SharedParams()),
        (Family.NEG_BINOMIAL, SharedParams(p=Fraction(1, 2))),
        (Family.GAUSSIAN, SharedParams(sigma=1.0)),
    ):
        g = g_transform(fam, shared, 0.4)
        for x in (0.0, 1.0, 2.5, 7.0):
            assert abs(g.evaluate(x)) <= g.modulus_bound(x) * (1 + 1e-12)


def test_survey_poisson_snapshot():
    # frozen separation snapshot: the least-separated pair of 2-subset
    # Poisson mixtures on {0..5} must never drop below this recorded value
    grid = ParameterGrid(Family.POISSON, 1, 0, 5)
    summary = separation_survey(Family.POISSON, SharedParams(), grid, 2)
    assert len(summary.rows) == 105
    assert summary.min_tv_lo == pytest.approx(0.09417182505593841, abs=1e-9)
    assert summary.L == pytest.approx(5.0 ** (1.0 / 3.0))


def test_survey_poisson_small():
    grid = ParameterGrid(Family.POISSON, 1, 0, 3)
    summary = separation_survey(Family.POISSON, SharedParams(), grid, 2)
    assert len(summary.rows) == 15  # C(C(4,2), 2)
    for row in summary.rows:
        assert row.charfn_bound <= row.tv_hi + 1e-12
        assert 0.0 <= row.tv_lo <= row.tv_hi <= 1.0
    assert summary.min_tv_lo > 0.0
    assert summary.implied_constant > 0.0
