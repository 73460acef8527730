"""Gray level run length matrix features, averaged over four directions."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._common import DIRECTIONS, item_statistics
from .catalog import GLRLM_NAMES
from .discretize import DiscretizedImage

_KEYMAP = {
    "ShortRunEmphasis": "short",
    "LongRunEmphasis": "long",
    "GrayLevelNonUniformity": "gln",
    "GrayLevelNonUniformityNormalized": "glnn",
    "RunLengthNonUniformity": "szn",
    "RunLengthNonUniformityNormalized": "sznn",
    "RunPercentage": "percentage",
    "GrayLevelVariance": "glv",
    "RunVariance": "szv",
    "RunEntropy": "entropy",
    "LowGrayLevelRunEmphasis": "low_gl",
    "HighGrayLevelRunEmphasis": "high_gl",
    "ShortRunLowGrayLevelEmphasis": "short_low",
    "ShortRunHighGrayLevelEmphasis": "short_high",
    "LongRunLowGrayLevelEmphasis": "long_low",
    "LongRunHighGrayLevelEmphasis": "long_high",
}


@lru_cache(maxsize=32)
def _line_order(h: int, w: int, dr: int, dc: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat pixel indices grouped into scan lines along (dr, dc).

    Returns the permutation and a mask marking the first pixel of each line.
    """
    r, c = np.indices((h, w))
    if dr == 0:
        line, pos = r, c
    elif dc == 0:
        line, pos = c, r
    elif dr == -dc:
        line, pos = r + c, c
    else:
        line, pos = c - r, r
    order = np.lexsort((pos.ravel(), line.ravel()))
    keys = line.ravel()[order]
    starts = np.ones(order.size, dtype=bool)
    starts[1:] = keys[1:] != keys[:-1]
    order.setflags(write=False)
    starts.setflags(write=False)
    return order, starts


def runs(d: DiscretizedImage, dr: int, dc: int) -> tuple[np.ndarray, np.ndarray]:
    """(gray level, run length) of every maximal run along direction (dr, dc)."""
    h, w = d.levels.shape
    order, line_starts = _line_order(h, w, dr, dc)
    vals = d.levels.ravel()[order]
    starts = line_starts.copy()
    starts[1:] |= vals[1:] != vals[:-1]
    idx = np.flatnonzero(starts)
    lengths = np.diff(np.append(idx, vals.size))
    return vals[idx], lengths


def glrlm_features(d: DiscretizedImage) -> dict[str, float]:
    n_pixels = d.levels.size
    per_dir = []
    for dr, dc in DIRECTIONS:
        gray, length = runs(d, dr, dc)
        stats = item_statistics(gray, length, n_pixels)
        per_dir.append([stats[_KEYMAP[n]] for n in GLRLM_NAMES])
    values = np.mean(np.array(per_dir), axis=0)
    return dict(zip(GLRLM_NAMES, values.tolist()))
