"""Exact empirical moments, lattice rounding, and sample-size planning."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .errors import ContractError, DomainError
from .grids import Family, ParameterGrid, SharedParams
from .sampling import SampleDataset

#: residual above this fraction of the spacing flags a rounding as suspect
RESIDUAL_WARNING = Fraction(1, 4)


@dataclass(frozen=True)
class EmpiricalMoments:
    """Exact rational empirical raw moments S_0..S_T of an integer dataset."""

    T: int
    values: Tuple[Fraction, ...]
    t: int

    def __post_init__(self):
        if self.values[0] != 1:
            raise DomainError("zeroth empirical moment must be 1")


def _power_sum(values: np.ndarray, ell: int) -> int:
    """Sum of values**ell as an exact integer."""
    if ell == 0:
        return int(values.size)
    vmax = int(values.max(initial=0))
    if vmax**ell * values.size < 2**62:
        return int(np.sum(values.astype(np.int64) ** ell))
    # big-integer fallback: bucket by value, exact regardless of magnitude
    uniq, counts = np.unique(values, return_counts=True)
    return sum(int(v) ** ell * int(c) for v, c in zip(uniq, counts))


def estimate_moments(data: SampleDataset, T: int) -> EmpiricalMoments:
    """S_ell = sum Y_i^ell / t, held as exact rationals."""
    if len(data) == 0:
        raise DomainError("empty dataset")
    if data.values.dtype.kind not in "iu":
        raise DomainError("moment estimation needs an integer dataset")
    if T < 0:
        raise ContractError("T must be nonnegative")
    t = len(data)
    vals = tuple(Fraction(_power_sum(data.values, ell), t) for ell in range(T + 1))
    return EmpiricalMoments(T=T, values=vals, t=t)


def estimate_pmf(data: SampleDataset, T: int) -> List[Fraction]:
    """Empirical probabilities P_0..P_T as exact rationals."""
    if len(data) == 0:
        raise DomainError("empty dataset")
    if data.values.dtype.kind not in "iu":
        raise DomainError("pmf estimation needs an integer dataset")
    t = len(data)
    counts = np.bincount(data.values, minlength=T + 1)
    return [Fraction(int(counts[ell]), t) for ell in range(T + 1)]


@dataclass(frozen=True)
class LatticeRounding:
    rounded: Fraction
    residual: Fraction  # |value - rounded| / spacing, in [0, 1/2]
    flagged: bool  # residual above the diagnostic threshold


def round_to_lattice(value: Fraction, spacing: Fraction) -> LatticeRounding:
    """Nearest lattice multiple, ties to the even multiple."""
    value, spacing = Fraction(value), Fraction(spacing)
    if spacing <= 0:
        raise DomainError("lattice spacing must be positive")
    q = value / spacing
    lo = q.numerator // q.denominator
    frac = q - lo
    if frac > Fraction(1, 2):
        n = lo + 1
    elif frac < Fraction(1, 2):
        n = lo
    else:
        n = lo if lo % 2 == 0 else lo + 1
    rounded = n * spacing
    residual = abs(value - rounded) / spacing
    return LatticeRounding(rounded, residual, residual > RESIDUAL_WARNING)


def moment_lattice_spacing(step: Fraction, k: int, ell: int) -> Fraction:
    """Minimum gap between distinct mixtures' order-ell moments: step^ell / k."""
    return Fraction(step) ** ell / k


def pmf_lattice_spacing(step: Fraction, k: int, ell: int) -> Fraction:
    """Gap for pmf values, whose polynomials have degree ell + 1."""
    return Fraction(step) ** (ell + 1) / k


@dataclass(frozen=True)
class PlanEntry:
    order: int
    tolerance: Fraction
    failure_prob: Fraction
    samples: int


@dataclass(frozen=True)
class SamplePlan:
    scheme: str
    T: int
    per_moment: Tuple[PlanEntry, ...]
    total: int

    def to_report(self) -> str:
        lines = [f"scheme={self.scheme}", f"T={self.T}"]
        for e in self.per_moment:
            lines.append(
                f"ell={e.order} gamma={e.tolerance.numerator}/"
                f"{e.tolerance.denominator} t={e.samples}"
            )
        lines.append(f"total={self.total}")
        return "\n".join(lines) + "\n"


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _failure_prob(T: int, ell: int, uniform_delta: Optional[Fraction]) -> Fraction:
    if uniform_delta is not None:
        return Fraction(uniform_delta)
    return Fraction(1, 9 ** (1 + T - ell))


def plan_samples(
    family: Family,
    k: int,
    grid: ParameterGrid,
    shared: SharedParams,
    T: int,
    scheme: str,
    uniform_delta: Optional[Fraction] = None,
) -> SamplePlan:
    """Per-moment sample counts from the Chebyshev/Chernoff bounds.

    * binomial-p (chebyshev): t_ell = ceil(gamma^-2 n^(2 ell) / delta)
    * geometric-u (chebyshev): t_ell = ceil(2 gamma^-2 (4 ell / p_min)^(2 ell + 1) / delta)
    * geometric-p (chernoff, pmf): t_ell = ceil(3 gamma^-2 ln(2 / delta))

    with gamma_ell = step^ell / (2k) for moments and step^(ell+1) / (2k) for
    pmf values, and per-order failure probability delta = 9^-(1 + T - ell)
    (summing to < 1/8) unless a uniform override is given.
    """
    if T < 1:
        raise ContractError("plan needs T >= 1")
    eps = grid.step
    entries: List[PlanEntry] = []
    if family is Family.BINOMIAL_P and scheme == "chebyshev":
        if shared.n is None:
            raise ContractError("binomial-p plan needs shared n")
        for ell in range(1, T + 1):
            gamma = moment_lattice_spacing(eps, k, ell) / 2
            delta = _failure_prob(T, ell, uniform_delta)
            t = _ceil_fraction(gamma**-2 * shared.n ** (2 * ell) / delta)
            entries.append(PlanEntry(ell, gamma, delta, t))
    elif family is Family.GEOMETRIC_U and scheme == "chebyshev":
        p_min = Fraction(1, 1) / (1 + grid.max_index * eps)
        for ell in range(1, T + 1):
            gamma = moment_lattice_spacing(eps, k, ell) / 2
            delta = _failure_prob(T, ell, uniform_delta)
            t = _ceil_fraction(
                2 * gamma**-2 * (4 * ell / p_min) ** (2 * ell + 1) / delta
            )
            entries.append(PlanEntry(ell, gamma, delta, t))
    elif family is Family.GEOMETRIC_P and scheme == "chernoff":
        for ell in range(0, T + 1):
            gamma = pmf_lattice_spacing(eps, k, ell) / 2
            delta = _failure_prob(T, ell, uniform_delta)
            t = math.ceil(3 * float(gamma**-2) * math.log(2 / float(delta)))
            entries.append(PlanEntry(ell, gamma, delta, t))
    else:
        raise ContractError(f"unsupported plan: {family.value} / {scheme}")
    if sum(e.failure_prob for e in entries) >= 1:
        raise DomainError("plan failure probabilities must sum below 1")
    return SamplePlan(
        scheme=scheme,
        T=T,
        per_moment=tuple(entries),
        total=sum(e.samples for e in entries),
    )
