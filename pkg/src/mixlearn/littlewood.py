"""Littlewood polynomials ({-1,0,1} coefficients) and certified arc maxima
of |A(e^{it})| on [-pi/L, pi/L]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .errors import DomainError

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LittlewoodPoly:
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if any(c not in (-1, 0, 1) for c in coeffs):
            raise DomainError("coefficients must lie in {-1, 0, 1}")
        if not any(coeffs):
            raise DomainError("the zero polynomial has no arc bound")
        object.__setattr__(self, "coefficients", coeffs)

    def modulus_at(self, t: float) -> float:
        z = complex(math.cos(t), math.sin(t))
        acc = 0j
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return abs(acc)


def _grid(L: float, resolution: int) -> np.ndarray:
    # conjugate symmetry for real coefficients: scan [0, pi/L] only
    arc = math.pi / L
    points = max(int(resolution * arc) + 1, 9)
    return np.linspace(0.0, arc, points)


def littlewood_arc_max(
    poly: LittlewoodPoly, L: float, resolution: int = 256
) -> Tuple[float, float]:
    """(t*, value): a certified lower bound on max |A(e^{it})| over the arc,
    from a uniform grid refined by golden-section search."""
    if resolution < 64:
        raise DomainError("resolution must be at least 64 points per unit arc")
    if L <= 0:
        raise DomainError("L must be positive")
    ts = _grid(L, resolution)
    vals = np.abs(
        np.exp(1j * np.outer(ts, np.arange(len(poly.coefficients))))
        @ np.array(poly.coefficients, dtype=np.float64)
    )
    best = int(np.argmax(vals))
    lo = ts[max(best - 1, 0)]
    hi = ts[min(best + 1, len(ts) - 1)]
    # golden-section refinement around the best grid point
    a, b = lo, hi
    fa_t = a + (1 - _GOLDEN) * (b - a)
    fb_t = a + _GOLDEN * (b - a)
    fa, fb = poly.modulus_at(fa_t), poly.modulus_at(fb_t)
    for _ in range(60):
        if fa < fb:
            a, fa_t, fa = fa_t, fb_t, fb
            fb_t = a + _GOLDEN * (b - a)
            fb = poly.modulus_at(fb_t)
        else:
            b, fb_t, fb = fb_t, fa_t, fa
            fa_t = a + (1 - _GOLDEN) * (b - a)
            fa = poly.modulus_at(fa_t)
    candidates = [(float(vals[best]), float(ts[best])), (fa, fa_t), (fb, fb_t)]
    value, t_star = max(candidates)
    return float(t_star), float(value)


def arc_max_batch(
    coeff_rows: np.ndarray, L: float, resolution: int = 256
) -> np.ndarray:
    """Grid-evaluated arc maxima for many coefficient rows at once.

    Returns one lower bound per row; used by the exhaustive oracle and the
    regression sweep, where golden-section refinement per polynomial would be
    needlessly slow.
    """
    ts = _grid(L, resolution)
    degrees = np.arange(coeff_rows.shape[1])
    phases = np.exp(1j * np.outer(ts, degrees))  # (points, degree+1)
    out = np.empty(coeff_rows.shape[0])
    chunk = max(1, 2**22 // len(ts))
    for start in range(0, coeff_rows.shape[0], chunk):
        block = coeff_rows[start : start + chunk].astype(np.float64)
        out[start : start + chunk] = np.abs(block @ phases.T).max(axis=1)
    return out


def all_coefficient_rows(max_len: int) -> np.ndarray:
    """Every nonzero {-1,0,1} vector of length ``max_len`` (shorter vectors
    are the rows with trailing zeros)."""
    grids = np.meshgrid(*([np.array([-1, 0, 1], dtype=np.int8)] * max_len),
                        indexing="ij")
    rows = np.stack([g.ravel() for g in grids], axis=1)
    return rows[np.any(rows != 0, axis=1)]
