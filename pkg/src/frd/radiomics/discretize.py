from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_BIN_COUNT = 32


@dataclass(frozen=True, eq=False)
class DiscretizedImage:
    """Integer gray levels in ``1..bin_count`` for one filtered grid."""

    levels: np.ndarray
    bin_count: int

    @property
    def ng(self) -> int:
        """Number of distinct gray levels actually present."""
        return int(np.unique(self.levels).size)

    @property
    def shape(self) -> tuple[int, int]:
        return self.levels.shape


def discretize(grid, bin_count: int = DEFAULT_BIN_COUNT) -> DiscretizedImage:
    """Fixed bin-count discretization using the grid's own min and max.

    level(p) = min(floor((p - min) / (max - min) * bin_count) + 1, bin_count),
    and every pixel maps to level 1 when the grid is constant.
    """
    if int(bin_count) < 2:
        raise ValueError(f"bin_count must be >= 2, got {bin_count}")
    bin_count = int(bin_count)
    x = np.asarray(grid, dtype=np.float64)
    lo = x.min()
    hi = x.max()
    if hi == lo:
        levels = np.ones(x.shape, dtype=np.int64)
    else:
        levels = np.floor((x - lo) / (hi - lo) * bin_count).astype(np.int64) + 1
        np.minimum(levels, bin_count, out=levels)
    levels.setflags(write=False)
    return DiscretizedImage(levels, bin_count)
