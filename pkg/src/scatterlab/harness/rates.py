"""Power-law rate fits by least squares on log-log data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float


def fit_rate(samples) -> RateFit:
    """Fit y = exp(intercept) x^slope by ordinary least squares on (log x, log y).

    Parameters
    ----------
    samples : iterable of (x, y)
        At least three pairs, all strictly positive.
    """
    arr = np.asarray(list(samples), dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be (x, y) pairs")
    if len(arr) < 3:
        raise ValueError(f"need at least 3 samples, got {len(arr)}")
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("power-law fits need finite, strictly positive samples")
    lx, ly = np.log(arr[:, 0]), np.log(arr[:, 1])
    design = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return RateFit(float(slope), float(intercept), r2)


def fit_plane(xs, ys, zs) -> tuple[float, float, float]:
    """Least squares log z = a log x + b log y + c; returns (a, b, c)."""
    lx, ly, lz = (np.log(np.asarray(v, dtype=float)) for v in (xs, ys, zs))
    design = np.column_stack([lx, ly, np.ones_like(lx)])
    coef, *_ = np.linalg.lstsq(design, lz, rcond=None)
    return float(coef[0]), float(coef[1]), float(coef[2])
