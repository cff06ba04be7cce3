"""Mixture densities, CDFs, characteristic functions, and exact moments."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Union

from .errors import ContractError, DomainError
from .grids import DISCRETE_FAMILIES, Family, MixtureSpec
from .polynomials import moment_polynomial
from .special import chi_squared_cdf, normal_cdf

Real = Union[int, float, Fraction]


def _as_count(x: Real) -> int:
    xf = float(x)
    if xf < 0 or xf != int(xf):
        raise DomainError(f"value {x} outside discrete support")
    return int(xf)


def _component_pmf(family: Family, shared, value: Fraction, x: int) -> float:
    if family is Family.POISSON:
        lam = float(value)
        if lam == 0.0:
            return 1.0 if x == 0 else 0.0
        return math.exp(-lam + x * math.log(lam) - math.lgamma(x + 1))
    if family is Family.BINOMIAL_P:
        n, p = shared.n, float(value)
        if x > n:
            raise DomainError(f"binomial value {x} exceeds trial count {n}")
        if p == 0.0:
            return 1.0 if x == 0 else 0.0
        if p == 1.0:
            return 1.0 if x == n else 0.0
        return comb(n, x) * p**x * (1.0 - p) ** (n - x)
    if family in (Family.GEOMETRIC_P, Family.GEOMETRIC_U):
        p = float(value) if family is Family.GEOMETRIC_P else 1.0 / float(value)
        # p = 0 is a degenerate grid point contributing zero mass everywhere.
        if p == 0.0:
            return 0.0
        return (1.0 - p) ** x * p
    if family is Family.NEG_BINOMIAL:
        r, p = int(value), float(shared.p)
        return comb(x + r - 1, x) * (1.0 - p) ** r * p**x
    raise ContractError(f"{family.value} is not a discrete family")


def _component_pdf(family: Family, shared, value: Fraction, x: float) -> float:
    if family is Family.GAUSSIAN:
        s = shared.sigma
        z = (x - float(value)) / s
        return math.exp(-0.5 * z * z) / (s * math.sqrt(2.0 * math.pi))
    if family is Family.CHI_SQUARED:
        d = int(value)
        if x < 0:
            raise DomainError("chi-squared support is nonnegative")
        if x == 0.0:
            if d == 1:
                raise DomainError("chi-squared(1) density diverges at 0")
            return 0.5 if d == 2 else 0.0
        return math.exp(
            (d / 2.0 - 1.0) * math.log(x) - x / 2.0
            - (d / 2.0) * math.log(2.0) - math.lgamma(d / 2.0)
        )
    raise ContractError(f"{family.value} is not a continuous family")


def pmf_or_pdf(spec: MixtureSpec, x: Real) -> float:
    """Mixture density (continuous) or mass (discrete) at x."""
    if spec.family in DISCRETE_FAMILIES:
        xi = _as_count(x)
        return sum(
            float(w) * _component_pmf(spec.family, spec.shared, v, xi)
            for w, v in spec.components()
        )
    return sum(
        float(w) * _component_pdf(spec.family, spec.shared, v, float(x))
        for w, v in spec.components()
    )


def cdf(spec: MixtureSpec, x: Real) -> float:
    """Mixture CDF, Gaussian and chi-squared families only."""
    if spec.family is Family.GAUSSIAN:
        return sum(
            float(w) * normal_cdf(float(x), float(v), spec.shared.sigma)
            for w, v in spec.components()
        )
    if spec.family is Family.CHI_SQUARED:
        return sum(
            float(w) * chi_squared_cdf(int(v), float(x))
            for w, v in spec.components()
        )
    raise ContractError(f"cdf unsupported for family {spec.family.value}")


def _component_charfn(family: Family, shared, value: Fraction, t: float) -> complex:
    z = cmath.exp(1j * t)
    if family is Family.GAUSSIAN:
        s = shared.sigma
        return cmath.exp(1j * t * float(value) - 0.5 * s * s * t * t)
    if family is Family.POISSON:
        return cmath.exp(float(value) * (z - 1.0))
    if family is Family.BINOMIAL_P:
        p = float(value)
        return (1.0 - p + p * z) ** shared.n
    if family in (Family.GEOMETRIC_P, Family.GEOMETRIC_U):
        p = float(value) if family is Family.GEOMETRIC_P else 1.0 / float(value)
        if p == 0.0:
            # degenerate zero-mass component
            return 0.0 + 0.0j
        return p / (1.0 - (1.0 - p) * z)
    if family is Family.CHI_SQUARED:
        return (1.0 - 2.0j * t) ** (-int(value) / 2.0)
    if family is Family.NEG_BINOMIAL:
        p = float(shared.p)
        return ((1.0 - p) / (1.0 - p * z)) ** int(value)
    raise ContractError(f"no characteristic function for {family.value}")


def char_fn(spec: MixtureSpec, t: float) -> complex:
    """Mixture characteristic function E[exp(itX)] in closed form."""
    return sum(
        complex(_component_charfn(spec.family, spec.shared, v, t)) * float(w)
        for w, v in spec.components()
    )


@lru_cache(maxsize=None)
def _poisson_moment(lam: Fraction, ell: int) -> Fraction:
    # Touchard recurrence: E X^(l+1) = lam * sum_j C(l, j) E X^j.
    if ell == 0:
        return Fraction(1)
    return lam * sum(
        comb(ell - 1, j) * _poisson_moment(lam, j) for j in range(ell)
    )


def mixture_moment_exact(spec: MixtureSpec, ell: int) -> Fraction:
    """Exact rational raw moment E X^ell of the mixture."""
    if ell < 0:
        raise ContractError("moment order must be nonnegative")
    if spec.family in (Family.BINOMIAL_P, Family.GEOMETRIC_U):
        poly = moment_polynomial(spec.family, spec.shared, ell)
        return sum((w * poly(v) for w, v in spec.components()), Fraction(0))
    if spec.family is Family.POISSON:
        return sum(
            (w * _poisson_moment(Fraction(v), ell) for w, v in spec.components()),
            Fraction(0),
        )
    raise ContractError(
        f"exact moments unsupported for family {spec.family.value}"
    )


def mixture_pmf_exact(spec: MixtureSpec, x: int) -> Fraction:
    """Exact rational pmf for the geometric p-grid (used by the pmf learner)."""
    if spec.family is not Family.GEOMETRIC_P:
        raise ContractError("exact pmf is provided for geometric-p only")
    if x < 0:
        raise DomainError("discrete support is nonnegative")
    return sum(
        (w * (1 - v) ** x * v for w, v in spec.components()), Fraction(0)
    )


def mgf_a2x(family: Family, shared, value: Fraction, a: float) -> float:
    """E[a^(2X)] for one component, used by tail certificates."""
    a2 = a * a
    if family is Family.POISSON:
        return math.exp(float(value) * (a2 - 1.0))
    if family is Family.BINOMIAL_P:
        p = float(value)
        return (1.0 - p + p * a2) ** shared.n
    if family in (Family.GEOMETRIC_P, Family.GEOMETRIC_U):
        p = float(value) if family is Family.GEOMETRIC_P else 1.0 / float(value)
        if p == 0.0:
            return math.inf
        if (1.0 - p) * a2 >= 1.0:
            return math.inf
        return p / (1.0 - (1.0 - p) * a2)
    if family is Family.NEG_BINOMIAL:
        p = float(shared.p)
        if p * a2 >= 1.0:
            return math.inf
        return ((1.0 - p) / (1.0 - p * a2)) ** int(value)
    raise ContractError(f"E[a^2X] unavailable for family {family.value}")
