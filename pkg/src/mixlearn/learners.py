"""End-to-end learning pipelines and the seeded experiment runner."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .distributions import mixture_moment_exact, mixture_pmf_exact
from .errors import ContractError, DomainError
from .grids import (
    ANALYTIC_FAMILIES,
    Family,
    MixtureSpec,
    ParameterGrid,
    SharedParams,
    uniform_spec,
)
from .moments import (
    estimate_moments,
    estimate_pmf,
    moment_lattice_spacing,
    pmf_lattice_spacing,
    round_to_lattice,
)
from .powersums import moments_to_power_sums, pmf_to_power_sums, reconstruct_multiset
from .sampling import SampleDataset, sample
from .scheffe import candidate_family, mde_select, precompute_mde


def _ceil_sqrt_ratio(num: int, den: int) -> int:
    """Smallest integer T with T^2 >= num / den (exact)."""
    T = math.isqrt(num // den)
    while T * T * den < num:
        T += 1
    return T


def moments_order_binomial(eps: Fraction, k: int) -> int:
    """T = max(k, ceil(4 / sqrt(eps))): enough for uniqueness and for the
    constructive Newton path."""
    eps = Fraction(eps)
    return max(k, _ceil_sqrt_ratio(16 * eps.denominator, eps.numerator))


def moments_order_geometric_u(n: int, k: int) -> int:
    """T = max(k, ceil(4 sqrt(n)))."""
    return max(k, _ceil_sqrt_ratio(16 * n, 1))


@dataclass(frozen=True)
class LearnResult:
    recovered: Tuple[int, ...]
    method: str  # moments | pmf | mde
    diagnostics: Dict[str, float]
    exact_match: Optional[bool] = None


def _finish(
    recovered: Tuple[int, ...],
    method: str,
    diagnostics: Dict[str, float],
    truth: Optional[Sequence[int]],
) -> LearnResult:
    match = None if truth is None else tuple(sorted(truth)) == recovered
    return LearnResult(recovered, method, diagnostics, match)


def learn_binomial_moments(
    data: Optional[SampleDataset],
    n: int,
    eps: Fraction,
    k: int,
    oracle_spec: Optional[MixtureSpec] = None,
    truth: Optional[Sequence[int]] = None,
    T: Optional[int] = None,
) -> LearnResult:
    """Moment pipeline for Bin(n, p) mixtures on the p-grid of step eps."""
    eps = Fraction(eps)
    grid = ParameterGrid(Family.BINOMIAL_P, eps, 0, int(1 / eps))
    shared = SharedParams(n=n)
    if T is None:
        T = moments_order_binomial(eps, k)
    if n < T:
        raise DomainError(f"need n >= T = {T} trials, got {n}")
    if oracle_spec is not None:
        moments = [mixture_moment_exact(oracle_spec, ell) for ell in range(T + 1)]
        samples_used = 0
    else:
        if data is None:
            raise ContractError("provide data or an oracle spec")
        moments = list(estimate_moments(data, T).values)
        samples_used = len(data)
    max_residual = 0.0
    if grid.inverse_step_integral:
        rounded = [moments[0]]
        for ell in range(1, T + 1):
            r = round_to_lattice(moments[ell], moment_lattice_spacing(eps, k, ell))
            rounded.append(r.rounded)
            max_residual = max(max_residual, float(r.residual))
        moments = rounded
    sampled = oracle_spec is None
    psums, residuals = moments_to_power_sums(
        moments, Family.BINOMIAL_P, shared, grid, k,
        truncate_after=k if sampled else None,
    )
    recovered = reconstruct_multiset(
        psums, range(grid.min_index, grid.max_index + 1),
        verify_orders=k if sampled else None,
    )
    diag = {
        "max_lattice_residual": max_residual,
        "max_solve_residual": max(float(r) for r in residuals),
        "samples": float(samples_used),
        "T": float(T),
    }
    return _finish(recovered, "moments", diag, truth)


def learn_geometric(
    data: Optional[SampleDataset],
    grid: ParameterGrid,
    k: int,
    variant: str,
    oracle_spec: Optional[MixtureSpec] = None,
    truth: Optional[Sequence[int]] = None,
    T: Optional[int] = None,
) -> LearnResult:
    """Geometric mixtures: ``moments`` on the u-grid, ``pmf`` on the p-grid."""
    eps = grid.step
    if variant == "moments":
        if grid.family is not Family.GEOMETRIC_U:
            raise ContractError("moments variant needs the u-grid")
        if T is None:
            T = moments_order_geometric_u(grid.max_index, k)
        if oracle_spec is not None:
            moments = [mixture_moment_exact(oracle_spec, ell) for ell in range(T + 1)]
            samples_used = 0
        else:
            if data is None:
                raise ContractError("provide data or an oracle spec")
            moments = list(estimate_moments(data, T).values)
            samples_used = len(data)
        max_residual = 0.0
        if grid.inverse_step_integral:
            rounded = [moments[0]]
            for ell in range(1, T + 1):
                r = round_to_lattice(moments[ell], moment_lattice_spacing(eps, k, ell))
                rounded.append(r.rounded)
                max_residual = max(max_residual, float(r.residual))
            moments = rounded
        sampled = oracle_spec is None
        psums, residuals = moments_to_power_sums(
            moments, Family.GEOMETRIC_U, SharedParams(), grid, k,
            truncate_after=k if sampled else None,
        )
        recovered = reconstruct_multiset(
            psums, range(grid.min_index, grid.max_index + 1),
            verify_orders=k if sampled else None,
        )
        diag = {
            "max_lattice_residual": max_residual,
            "max_solve_residual": max(float(r) for r in residuals),
            "samples": float(samples_used),
            "T": float(T),
        }
        return _finish(recovered, "moments", diag, truth)
    if variant == "pmf":
        if grid.family is not Family.GEOMETRIC_P:
            raise ContractError("pmf variant needs the p-grid")
        if T is None:
            T = max(
                k, _ceil_sqrt_ratio(16 * eps.denominator, eps.numerator)
            )
        if oracle_spec is not None:
            probs = [mixture_pmf_exact(oracle_spec, x) for x in range(T + 1)]
            samples_used = 0
        else:
            if data is None:
                raise ContractError("provide data or an oracle spec")
            probs = estimate_pmf(data, T)
            samples_used = len(data)
        max_residual = 0.0
        if grid.inverse_step_integral:
            rounded = []
            for ell, p in enumerate(probs):
                r = round_to_lattice(p, pmf_lattice_spacing(eps, k, ell))
                rounded.append(r.rounded)
                max_residual = max(max_residual, float(r.residual))
            probs = rounded
        sampled = oracle_spec is None
        psums, residuals = pmf_to_power_sums(
            probs, grid, k, truncate_after=k if sampled else None
        )
        recovered = reconstruct_multiset(
            psums, range(grid.min_index, grid.max_index + 1),
            verify_orders=k if sampled else None,
        )
        diag = {
            "max_lattice_residual": max_residual,
            "max_solve_residual": max(float(r) for r in residuals),
            "samples": float(samples_used),
            "T": float(T),
        }
        return _finish(recovered, "pmf", diag, truth)
    raise ContractError(f"unknown geometric variant {variant!r}")


def gaussian_grid_from_data(
    data: SampleDataset, eps: Fraction, sigma: float
) -> ParameterGrid:
    """Bounded index range inferred from the data: min/max widened by 4 sigma."""
    lo = math.floor((float(data.values.min()) - 4.0 * sigma) / float(eps))
    hi = math.ceil((float(data.values.max()) + 4.0 * sigma) / float(eps))
    return ParameterGrid(Family.GAUSSIAN, Fraction(eps), lo, hi)


def learn_mde(
    data: Optional[SampleDataset],
    family: Family,
    grid: ParameterGrid,
    k: int,
    shared: SharedParams = SharedParams(),
    oracle_spec: Optional[MixtureSpec] = None,
    truth: Optional[Sequence[int]] = None,
    precomputed=None,
) -> LearnResult:
    """Minimum-distance estimation over all distinct k-subsets of the grid."""
    if family not in ANALYTIC_FAMILIES:
        raise ContractError(f"MDE learner covers the analytic families only")
    candidates = candidate_family(grid, k, shared, distinct=True)
    if oracle_spec is not None:
        result = mde_select(candidates, truth=oracle_spec, precomputed=precomputed)
        samples_used = 0
    else:
        if data is None or len(data) == 0:
            raise DomainError("MDE needs a nonempty dataset")
        result = mde_select(candidates, data=data, precomputed=precomputed)
        samples_used = len(data)
    recovered = candidates[result.winner].indices
    diag = {
        "delta": result.delta,
        "samples": float(samples_used),
        "candidates": float(len(candidates)),
        "tie_broken": float(result.tie_broken),
    }
    return _finish(recovered, "mde", diag, truth)


def mde_sample_size(n_candidates: int, delta: float, constant: float = 8.0) -> int:
    """m = C log|Theta| / delta^2 with the unspecified constant exposed."""
    if not 0 < delta:
        raise DomainError("delta must be positive")
    return math.ceil(constant * math.log(n_candidates) / (delta * delta))


@dataclass(frozen=True)
class ExperimentConfig:
    family: Family
    method: str  # moments | pmf | mde
    eps: Fraction
    min_index: int
    max_index: int
    k: int
    truth: Tuple[int, ...]
    samples: int
    trials: int
    seed: int
    n: Optional[int] = None
    sigma: Optional[float] = None
    p: Optional[Fraction] = None
    oracle: bool = False

    def grid(self) -> ParameterGrid:
        return ParameterGrid(self.family, Fraction(self.eps), self.min_index, self.max_index)

    def shared(self) -> SharedParams:
        return SharedParams(n=self.n, sigma=self.sigma, p=self.p)

    def truth_spec(self) -> MixtureSpec:
        return uniform_spec(self.grid(), self.truth, self.shared())


@dataclass(frozen=True)
class TrialRow:
    trial: int
    seed: int
    recovered: Tuple[int, ...]
    success: bool
    delta_or_residual: float


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    rows: Tuple[TrialRow, ...]
    successes: int
    trials: int
    wall_clock: float


def _learn_once(
    config: ExperimentConfig, dataset: Optional[SampleDataset], precomputed
) -> LearnResult:
    grid = config.grid()
    oracle = config.truth_spec() if config.oracle else None
    if config.method == "moments" and config.family is Family.BINOMIAL_P:
        return learn_binomial_moments(
            dataset, config.n, config.eps, config.k,
            oracle_spec=oracle, truth=config.truth,
        )
    if config.method in ("moments", "pmf") and config.family in (
        Family.GEOMETRIC_U, Family.GEOMETRIC_P
    ):
        return learn_geometric(
            dataset, grid, config.k, config.method,
            oracle_spec=oracle, truth=config.truth,
        )
    if config.method == "mde":
        return learn_mde(
            dataset, config.family, grid, config.k, config.shared(),
            oracle_spec=oracle, truth=config.truth, precomputed=precomputed,
        )
    raise ContractError(
        f"unsupported method {config.method!r} for family {config.family.value}"
    )


def _run_trial(config: ExperimentConfig, trial: int, precomputed) -> TrialRow:
    dataset = None
    if not config.oracle:
        dataset = sample(config.truth_spec(), config.samples, config.seed, stream=trial)
    result = _learn_once(config, dataset, precomputed)
    diag = result.diagnostics
    score = diag.get("delta", diag.get("max_solve_residual", 0.0))
    return TrialRow(
        trial=trial,
        seed=config.seed,
        recovered=result.recovered,
        success=bool(result.exact_match),
        delta_or_residual=score,
    )


def worker_count() -> int:
    """Parallelism cap from MIXLEARN_THREADS (0 or unset = auto -> 1)."""
    raw = os.environ.get("MIXLEARN_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"MIXLEARN_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise DomainError("MIXLEARN_THREADS must be nonnegative")
    return n if n > 0 else 1


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Per-trial sample -> learn -> compare; deterministic in the base seed
    (trial i uses sampling stream i)."""
    start = time.monotonic()
    precomputed = None
    if config.method == "mde":
        candidates = candidate_family(config.grid(), config.k, config.shared())
        precomputed = precompute_mde(candidates)
    workers = worker_count()
    trials = list(range(config.trials))
    if workers > 1 and not config.oracle:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(_run_trial, [config] * len(trials), trials,
                         [precomputed] * len(trials))
            )
    else:
        rows = [_run_trial(config, i, precomputed) for i in trials]
    return ExperimentReport(
        config=config,
        rows=tuple(rows),
        successes=sum(r.success for r in rows),
        trials=config.trials,
        wall_clock=time.monotonic() - start,
    )
