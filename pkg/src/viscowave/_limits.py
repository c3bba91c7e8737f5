"""Extrapolation of p -> infinity limits sampled on geometric grids."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import IndeterminateLimitError

_EPS = np.finfo(float).eps


def aitken(values: np.ndarray) -> np.ndarray:
    """One sweep of Aitken's delta-squared process.

    Returns ``len(values) - 2`` accelerated terms. Where the second difference
    is lost in round-off the latest raw value is kept instead.
    """
    v = np.asarray(values, dtype=float)
    v0, v1, v2 = v[:-2], v[1:-1], v[2:]
    d1 = v2 - v1
    d2 = d1 - (v1 - v0)
    scale = np.maximum(np.abs(v2), np.abs(v1))
    noisy = (np.abs(d2) <= 64 * _EPS * scale) | (np.abs(d1) <= 64 * _EPS * scale)
    with np.errstate(divide="ignore", invalid="ignore"):
        acc = v2 - d1 * d1 / d2
    return np.where(noisy | ~np.isfinite(acc), v2, acc)


def limit_at_infinity(
    f: Callable[[np.ndarray], np.ndarray],
    p_max: float,
    *,
    decades: float = 6.0,
    per_decade: int = 8,
    rtol: float = 1e-4,
    growth_per_decade: float = 0.10,
    zero_rtol: float = 1e-9,
) -> float:
    """Limit of a real sequence ``f(p)`` as ``p -> inf``.

    ``f`` is sampled on a geometric grid spanning ``decades`` decades and
    ending at ``p_max``. Returns ``math.inf`` when the top decade increases
    monotonically by more than ``growth_per_decade``. Otherwise two Aitken
    sweeps are applied and the result is accepted when the last two
    accelerated values (or the last two raw values) agree to ``rtol``.
    Limits that are negligible next to the sampled magnitudes are snapped
    to exactly zero.

    Raises
    ------
    IndeterminateLimitError
        If the sequence neither converges nor clearly diverges.
    """
    n = int(round(decades * per_decade)) + 1
    p = p_max * 10.0 ** (-np.arange(n - 1, -1, -1) / per_decade)
    v = np.asarray(f(p))
    if np.iscomplexobj(v):
        v = v.real
    v = v.astype(float)
    if not np.all(np.isfinite(v)):
        raise IndeterminateLimitError("non-finite samples while extrapolating a limit")

    top = v[-per_decade - 1 :]
    if np.all(np.diff(top) > 0) and top[0] > 0 and top[-1] > (1 + growth_per_decade) * top[0]:
        return math.inf

    magnitude = np.max(np.abs(v))
    acc = aitken(aitken(v))
    est, prev = acc[-1], acc[-2]
    floor = zero_rtol * magnitude
    tol = rtol * max(abs(est), floor)
    raw_change = abs(v[-1] - v[-2])
    if abs(est) <= floor and abs(prev) <= floor and abs(v[-1]) < abs(v[0]):
        return 0.0
    if abs(est - prev) <= tol or raw_change <= rtol * max(abs(v[-1]), floor):
        if abs(est) <= floor:
            return 0.0
        return float(est)
    raise IndeterminateLimitError(
        f"limit extrapolation inconclusive near p={p_max:g}: "
        f"last values {v[-2]:.6g}, {v[-1]:.6g}; accelerated {prev:.6g}, {est:.6g}"
    )
