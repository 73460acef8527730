"""First-order intensity statistics.

All statistics use the raw (filtered, undiscretized) grid values except
Entropy and Uniformity, which are computed on the discretized histogram.
Pixel area is 1, so TotalEnergy equals Energy.
"""

from __future__ import annotations

import numpy as np

from ._common import entropy2
from .catalog import FIRST_ORDER_NAMES
from .discretize import DEFAULT_BIN_COUNT, discretize


def first_order_features(grid, bin_count: int = DEFAULT_BIN_COUNT, levels=None) -> dict[str, float]:
    """Compute the 18 first-order features of a finite 2D grid.

    ``levels`` may carry an already discretized version of ``grid`` to avoid
    redoing the binning.
    """
    x = np.asarray(grid, dtype=np.float64).ravel()
    if levels is None:
        levels = discretize(grid, bin_count)
    hist = np.bincount(levels.levels.ravel() - 1, minlength=levels.bin_count) / x.size

    p10, p25, median, p75, p90 = np.percentile(x, [10, 25, 50, 75, 90])
    lo, hi = float(x.min()), float(x.max())
    # summation rounding must not turn a constant grid into a tiny spread
    mean = float(x.mean()) if hi > lo else lo
    dev = x - mean
    m2 = float(np.mean(dev**2))
    if m2 > 0:
        skew = float(np.mean(dev**3)) / m2**1.5
        kurt = float(np.mean(dev**4)) / m2**2
    else:
        skew = kurt = 0.0
    robust = x[(x >= p10) & (x <= p90)]
    energy = float(np.sum(x * x))
    feats = {
        "Energy": energy,
        "TotalEnergy": energy,
        "Entropy": entropy2(hist),
        "Minimum": float(x.min()),
        "P10": float(p10),
        "P90": float(p90),
        "Maximum": float(x.max()),
        "Mean": mean,
        "Median": float(median),
        "InterquartileRange": float(p75 - p25),
        "Range": float(x.max() - x.min()),
        "MeanAbsoluteDeviation": float(np.mean(np.abs(dev))),
        "RobustMeanAbsoluteDeviation": float(np.mean(np.abs(robust - robust.mean()))),
        "RootMeanSquared": float(np.sqrt(energy / x.size)),
        "Skewness": skew,
        "Kurtosis": kurt,
        "Variance": m2,
        "Uniformity": float(np.sum(hist * hist)),
    }
    return {n: feats[n] for n in FIRST_ORDER_NAMES}
