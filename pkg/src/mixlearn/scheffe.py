"""Scheffe sets and the minimum distance estimator over a finite candidate
family."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .distributions import cdf, pmf_or_pdf
from .errors import (
    CapExceededError,
    ContractError,
    DomainError,
    FamilyMismatchError,
)
from .grids import DISCRETE_FAMILIES, Family, MixtureSpec, ParameterGrid, SharedParams, uniform_spec
from .sampling import SampleDataset
from .tv import density_crossings, discrete_truncation

CANDIDATE_CAP = 100_000


@dataclass(frozen=True)
class ScheffeSet:
    """{x : M(x) >= M'(x)} for a candidate pair; discrete sets are the
    points of [0, x_max] where the inequality holds, continuous sets a
    union of disjoint closed intervals."""

    kind: str  # "discrete" | "intervals"
    points: Tuple[int, ...] = ()
    x_max: int = 0
    intervals: Tuple[Tuple[float, float], ...] = ()
    provenance: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.kind not in ("discrete", "intervals"):
            raise ContractError(f"unknown Scheffe set kind {self.kind!r}")
        if self.kind == "intervals":
            prev = -math.inf
            for lo, hi in self.intervals:
                if lo > hi or lo < prev:
                    raise DomainError("intervals must be disjoint and sorted")
                prev = hi


def scheffe_set(
    a: MixtureSpec,
    b: MixtureSpec,
    x_max: Optional[int] = None,
    provenance: Optional[Tuple[int, int]] = None,
) -> ScheffeSet:
    if a.family is not b.family or a.shared != b.shared:
        raise FamilyMismatchError("Scheffe sets need matching families")
    if a.family in DISCRETE_FAMILIES:
        if x_max is None:
            x_max = max(discrete_truncation(a, 1e-9), discrete_truncation(b, 1e-9))
        pts = tuple(
            x for x in range(x_max + 1) if pmf_or_pdf(a, x) >= pmf_or_pdf(b, x)
        )
        return ScheffeSet(kind="discrete", points=pts, x_max=x_max,
                          provenance=provenance)
    crossings = density_crossings(a, b)
    if not crossings:
        # no crossing: either identical (full support by convention) or one
        # density dominates everywhere in the scanned range
        probe = float(sum(a.values()) / len(a.values()))
        full = pmf_or_pdf(a, probe) >= pmf_or_pdf(b, probe)
        ivs = ((-math.inf, math.inf),) if full else ()
        return ScheffeSet(kind="intervals", intervals=ivs, provenance=provenance)
    edges = [-math.inf] + crossings + [math.inf]
    ivs: List[Tuple[float, float]] = []
    for lo, hi in zip(edges, edges[1:]):
        if math.isinf(lo) and math.isinf(hi):
            mid = crossings[0]
        elif math.isinf(lo):
            mid = hi - 1.0
        elif math.isinf(hi):
            mid = lo + 1.0
        else:
            mid = 0.5 * (lo + hi)
        if pmf_or_pdf(a, mid) >= pmf_or_pdf(b, mid):
            if ivs and ivs[-1][1] == lo:
                ivs[-1] = (ivs[-1][0], hi)
            else:
                ivs.append((lo, hi))
    return ScheffeSet(kind="intervals", intervals=tuple(ivs),
                      provenance=provenance)


def empirical_measure(data: SampleDataset, s: ScheffeSet) -> Fraction:
    """Exact fraction of the samples falling in the set."""
    if len(data) == 0:
        raise DomainError("empty dataset")
    vals = data.values
    if s.kind == "discrete":
        if not s.points:
            return Fraction(0)
        lut = np.zeros(s.x_max + 1, dtype=bool)
        lut[list(s.points)] = True
        in_range = vals <= s.x_max
        hits = int(lut[vals[in_range]].sum())
        return Fraction(hits, len(data))
    hits = 0
    xs = np.sort(vals)
    for lo, hi in s.intervals:
        hits += int(np.searchsorted(xs, hi, side="right")
                    - np.searchsorted(xs, lo, side="left"))
    return Fraction(hits, len(data))


def set_probability(spec: MixtureSpec, s: ScheffeSet) -> float:
    """Candidate probability of the set (exact pmf sum or CDF differences)."""
    if s.kind == "discrete":
        return sum(pmf_or_pdf(spec, x) for x in s.points)
    total = 0.0
    for lo, hi in s.intervals:
        hi_v = 1.0 if math.isinf(hi) else cdf(spec, hi)
        lo_v = 0.0 if math.isinf(lo) else cdf(spec, lo)
        total += hi_v - lo_v
    return total


def candidate_family(
    grid: ParameterGrid,
    k: int,
    shared: SharedParams = SharedParams(),
    distinct: bool = True,
    cap: int = CANDIDATE_CAP,
) -> List[MixtureSpec]:
    """All uniform k-subset (or k-multiset) mixtures on the grid, in
    lexicographic index order."""
    size = grid.size
    count = math.comb(size, k) if distinct else math.comb(size + k - 1, k)
    if distinct and k > size:
        raise DomainError(f"cannot pick {k} distinct indices from {size}")
    if count > cap:
        raise CapExceededError(f"{count} candidates exceed the cap {cap}")
    maker = combinations if distinct else combinations_with_replacement
    return [uniform_spec(grid, idx, shared) for idx in maker(grid.indices(), k)]


@dataclass(frozen=True)
class MdeResult:
    winner: int
    delta: float
    scores: Tuple[float, ...]
    tie_broken: bool
    sets: Tuple[ScheffeSet, ...] = ()


def _scheffe_sets(candidates: Sequence[MixtureSpec]) -> List[ScheffeSet]:
    if len(candidates) < 2:
        raise ContractError("MDE needs at least 2 candidates")
    fam, shared = candidates[0].family, candidates[0].shared
    for c in candidates[1:]:
        if c.family is not fam or c.shared != shared:
            raise FamilyMismatchError("candidates must share family/parameters")
    x_max = None
    if fam in DISCRETE_FAMILIES:
        x_max = max(discrete_truncation(c, 1e-9) for c in candidates)
    # complements carry the same discrepancy, so unordered pairs suffice
    return [
        scheffe_set(candidates[i], candidates[j], x_max=x_max, provenance=(i, j))
        for i, j in combinations(range(len(candidates)), 2)
    ]


def precompute_mde(
    candidates: Sequence[MixtureSpec],
) -> Tuple[List[ScheffeSet], np.ndarray]:
    """Scheffe sets and the candidate set-probability matrix, computed once
    and shared across repeated selections (read-only)."""
    sets = _scheffe_sets(candidates)
    probs = np.array(
        [[set_probability(c, s) for s in sets] for c in candidates]
    )
    return sets, probs


def mde_select(
    candidates: Sequence[MixtureSpec],
    data: Optional[SampleDataset] = None,
    truth: Optional[MixtureSpec] = None,
    precomputed: Optional[Tuple[List[ScheffeSet], np.ndarray]] = None,
) -> MdeResult:
    """Minimum distance estimator: pick the candidate minimizing the largest
    discrepancy to the empirical measure over all pairwise Scheffe sets.

    Oracle mode (``truth`` given instead of ``data``) scores against the true
    set probabilities, isolating the selection rule from sampling noise.
    """
    if (data is None) == (truth is None):
        raise ContractError("provide exactly one of data or truth")
    sets, probs = precomputed if precomputed is not None else precompute_mde(candidates)
    if truth is not None:
        emp = np.array([set_probability(truth, s) for s in sets])
    else:
        if len(data) == 0:
            raise DomainError("empty dataset")
        emp = np.array([float(empirical_measure(data, s)) for s in sets])
    scores = np.abs(probs - emp[None, :]).max(axis=1)
    best = float(scores.min())
    winners = [i for i, s in enumerate(scores) if s == best]
    winner = min(winners, key=lambda i: candidates[i].indices)
    return MdeResult(
        winner=winner,
        delta=best,
        scores=tuple(float(s) for s in scores),
        tie_broken=len(winners) > 1,
        sets=tuple(sets),
    )
