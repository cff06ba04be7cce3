import math

import pytest
from hypothesis import given, strategies as st

scipy_stats = pytest.importorskip("scipy.stats")

from mixlearn.special import chi_squared_cdf, gammainc_lower, normal_cdf


@given(st.floats(min_value=-8, max_value=8),
       st.floats(min_value=-3, max_value=3),
       st.floats(min_value=0.1, max_value=4))
def test_normal_cdf_matches_scipy(x, mu, sigma):
    ours = normal_cdf(x, mu, sigma)
    ref = scipy_stats.norm.cdf(x, loc=mu, scale=sigma)
    assert abs(ours - ref) < 1e-12


@given(st.floats(min_value=0.25, max_value=10),
       st.floats(min_value=0, max_value=40))
def test_gammainc_matches_scipy(a, x):
    from scipy.special import gammainc

    assert abs(gammainc_lower(a, x) - gammainc(a, x)) < 1e-12


@given(st.integers(min_value=1, max_value=10),
       st.floats(min_value=0, max_value=60))
def test_chi_squared_cdf_matches_scipy(dof, x):
    ours = chi_squared_cdf(dof, x)
    ref = scipy_stats.chi2.cdf(x, df=dof)
    assert abs(ours - ref) < 1e-12


def test_cdf_limits():
    assert normal_cdf(-40.0, 0.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert normal_cdf(40.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert chi_squared_cdf(3, 0.0) == 0.0
    assert chi_squared_cdf(3, 1e6) == pytest.approx(1.0, abs=1e-15)
