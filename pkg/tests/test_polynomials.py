import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mixlearn import DegeneracyError, Family, SharedParams
from mixlearn.polynomials import (
    IntegerPolynomial,
    eulerian,
    eulerian_row,
    falling_factorial,
    moment_polynomial,
    stirling2,
    stirling2_row,
)


@given(st.integers(min_value=1, max_value=20), st.integers(min_value=0, max_value=20))
def test_stirling_recurrence(ell, j):
    assert stirling2(ell, j) == (
        j * stirling2(ell - 1, j) + stirling2(ell - 1, j - 1)
    )


@given(st.integers(min_value=1, max_value=12))
def test_eulerian_row_sums_to_factorial(ell):
    assert sum(eulerian_row(ell)) == math.factorial(ell)


def test_eulerian_small_values():
    assert eulerian_row(3) == (1, 4, 1)
    assert eulerian(4, 1) == 11
    assert eulerian(4, 2) == 11


def test_falling_factorial():
    assert falling_factorial(10, 3) == 720
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(3, 5) == 0


def test_polynomial_strips_trailing_zeros():
    p = IntegerPolynomial((1, 2, 0, 0))
    assert p.coefficients == (1, 2)
    assert p.degree == 1
    assert p.leading_coefficient == 2


def test_polynomial_evaluation_exact():
    p = IntegerPolynomial((3, -1, 2))
    assert p(Fraction(1, 2)) == 3 - Fraction(1, 2) + Fraction(1, 2)
    assert p(0) == 3


@given(
    st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=6),
    st.fractions(min_value=-3, max_value=3),
    st.fractions(min_value=-3, max_value=3),
    st.fractions(min_value=-3, max_value=3),
)
def test_compose_affine_matches_direct_evaluation(coeffs, a, b, y):
    p = IntegerPolynomial(tuple(coeffs))
    composed = p.compose_affine(a, b)
    direct = p(a + b * y)
    horner = Fraction(0)
    for c in reversed(composed):
        horner = horner * y + c
    assert horner == direct


def test_binomial_moment_degree_and_leading_coefficient():
    for n in range(1, 9):
        for ell in range(1, n + 1):
            poly = moment_polynomial(Family.BINOMIAL_P, SharedParams(n=n), ell)
            assert poly.degree == ell
            assert poly.leading_coefficient == falling_factorial(n, ell)


def test_binomial_moment_degenerate_when_n_below_order():
    with pytest.raises(DegeneracyError):
        moment_polynomial(Family.BINOMIAL_P, SharedParams(n=2), 3)


def test_binomial_moment_small_cases():
    # E X = n p and E X^2 = n p + n(n-1) p^2
    p1 = moment_polynomial(Family.BINOMIAL_P, SharedParams(n=10), 1)
    assert p1.coefficients == (0, 10)
    p2 = moment_polynomial(Family.BINOMIAL_P, SharedParams(n=10), 2)
    assert p2.coefficients == (0, 10, 90)


def test_geometric_u_moment_leading_coefficient_is_factorial():
    for ell in range(1, 8):
        poly = moment_polynomial(Family.GEOMETRIC_U, None, ell)
        assert poly.degree == ell
        assert poly.leading_coefficient == math.factorial(ell)


def test_geometric_u_moment_against_series():
    # E X^ell = sum_x x^ell (1-p)^x p, summed numerically at p = 1/3 (u = 3)
    for ell in range(1, 6):
        poly = moment_polynomial(Family.GEOMETRIC_U, None, ell)
        exact = float(poly(Fraction(3)))
        p = 1.0 / 3.0
        series = sum(x**ell * (1 - p) ** x * p for x in range(2000))
        assert abs(exact - series) < 1e-9 * max(1.0, exact)


def test_geometric_pmf_polynomial():
    # Pr(X = ell) = (1-p)^ell p
    for ell in range(6):
        poly = moment_polynomial(Family.GEOMETRIC_P, None, ell)
        assert poly.degree == ell + 1
        p = Fraction(1, 4)
        assert poly(p) == (1 - p) ** ell * p
