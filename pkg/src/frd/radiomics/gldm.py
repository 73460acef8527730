"""Gray level dependence matrix features.

A neighbor is dependent on the center pixel when their gray levels differ by
at most ``alpha`` (0 here, i.e. equal levels). The dependence size of a pixel
is the number of dependent 8-neighbors plus one, so it ranges over 1..9.
"""

from __future__ import annotations

import numpy as np

from ._common import NEIGHBORS_8, item_statistics, shifted
from .catalog import GLDM_NAMES
from .discretize import DiscretizedImage

ALPHA = 0

_KEYMAP = {
    "SmallDependenceEmphasis": "short",
    "LargeDependenceEmphasis": "long",
    "GrayLevelNonUniformity": "gln",
    "DependenceNonUniformity": "szn",
    "DependenceNonUniformityNormalized": "sznn",
    "GrayLevelVariance": "glv",
    "DependenceVariance": "szv",
    "DependenceEntropy": "entropy",
    "LowGrayLevelEmphasis": "low_gl",
    "HighGrayLevelEmphasis": "high_gl",
    "SmallDependenceLowGrayLevelEmphasis": "short_low",
    "SmallDependenceHighGrayLevelEmphasis": "short_high",
    "LargeDependenceLowGrayLevelEmphasis": "long_low",
    "LargeDependenceHighGrayLevelEmphasis": "long_high",
}


def dependence_sizes(d: DiscretizedImage, alpha: int = ALPHA) -> np.ndarray:
    lv = d.levels
    count = np.ones(lv.shape, dtype=np.int64)
    for dr, dc in NEIGHBORS_8:
        nb = shifted(lv, dr, dc, fill=0)
        count += (nb > 0) & (np.abs(nb - lv) <= alpha)
    return count


def gldm_features(d: DiscretizedImage) -> dict[str, float]:
    dep = dependence_sizes(d)
    stats = item_statistics(d.levels.ravel(), dep.ravel(), d.levels.size)
    return {n: stats[_KEYMAP[n]] for n in GLDM_NAMES}
