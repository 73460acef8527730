"""Neighbourhood gray tone difference matrix features (8-neighborhood)."""

from __future__ import annotations

import numpy as np

from ._common import NEIGHBORS_8, shifted
from .catalog import NGTDM_NAMES
from .discretize import DiscretizedImage

COARSENESS_CAP = 1e6


def ngtdm(d: DiscretizedImage) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-level (n_i, s_i) over pixels with at least one in-grid neighbor.

    Returns ``(n, s, n_valid)`` indexed by level - 1.
    """
    lv = d.levels
    total = np.zeros(lv.shape, dtype=np.float64)
    count = np.zeros(lv.shape, dtype=np.int64)
    valid_grid = np.ones(lv.shape, dtype=np.int64)
    for dr, dc in NEIGHBORS_8:
        total += shifted(lv, dr, dc, fill=0)
        count += shifted(valid_grid, dr, dc, fill=0)
    has_nb = count > 0
    avg = np.zeros(lv.shape, dtype=np.float64)
    avg[has_nb] = total[has_nb] / count[has_nb]
    lev = lv[has_nb] - 1
    n = np.bincount(lev, minlength=d.bin_count).astype(np.float64)
    s = np.bincount(lev, weights=np.abs(lv[has_nb] - avg[has_nb]), minlength=d.bin_count)
    return n, s, int(has_nb.sum())


def ngtdm_features(d: DiscretizedImage) -> dict[str, float]:
    n, s, n_valid = ngtdm(d)
    if n_valid == 0:
        return {"Coarseness": COARSENESS_CAP, "Contrast": 0.0, "Busyness": 0.0, "Complexity": 0.0, "Strength": 0.0}
    p = n / n_valid
    present = p > 0
    g = np.arange(1, d.bin_count + 1, dtype=np.float64)[present]
    p = p[present]
    s = s[present]
    ngp = p.size
    ps = p * s
    sum_ps = float(ps.sum())
    sum_s = float(s.sum())

    coarseness = 1.0 / sum_ps if sum_ps != 0 else COARSENESS_CAP
    gi = g[:, None]
    gj = g[None, :]
    dg2 = (gi - gj) ** 2
    if ngp > 1:
        contrast = float(np.sum(p[:, None] * p[None, :] * dg2)) / (ngp * (ngp - 1)) * sum_s / n_valid
    else:
        contrast = 0.0
    busy_den = float(np.sum(np.abs(gi * p[:, None] - gj * p[None, :])))
    busyness = sum_ps / busy_den if busy_den != 0 else 0.0
    complexity = float(
        np.sum(np.abs(gi - gj) * (ps[:, None] + ps[None, :]) / (p[:, None] + p[None, :]))
    ) / n_valid
    strength = float(np.sum((p[:, None] + p[None, :]) * dg2)) / sum_s if sum_s != 0 else 0.0
    return {
        "Coarseness": coarseness,
        "Contrast": contrast,
        "Busyness": busyness,
        "Complexity": complexity,
        "Strength": strength,
    }
