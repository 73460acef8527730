"""Gray level size zone matrix features (8-connected zones)."""

from __future__ import annotations

import numpy as np
from skimage.measure import label

from ._common import item_statistics
from .catalog import GLSZM_NAMES
from .discretize import DiscretizedImage

_KEYMAP = {
    "SmallAreaEmphasis": "short",
    "LargeAreaEmphasis": "long",
    "GrayLevelNonUniformity": "gln",
    "GrayLevelNonUniformityNormalized": "glnn",
    "SizeZoneNonUniformity": "szn",
    "SizeZoneNonUniformityNormalized": "sznn",
    "ZonePercentage": "percentage",
    "GrayLevelVariance": "glv",
    "ZoneVariance": "szv",
    "ZoneEntropy": "entropy",
    "LowGrayLevelZoneEmphasis": "low_gl",
    "HighGrayLevelZoneEmphasis": "high_gl",
    "SmallAreaLowGrayLevelEmphasis": "short_low",
    "SmallAreaHighGrayLevelEmphasis": "short_high",
    "LargeAreaLowGrayLevelEmphasis": "long_low",
    "LargeAreaHighGrayLevelEmphasis": "long_high",
}


def zones(d: DiscretizedImage) -> tuple[np.ndarray, np.ndarray]:
    """(gray level, zone size) for every 8-connected equal-level zone."""
    # levels start at 1, so background=0 never masks a pixel
    labels, n = label(d.levels, connectivity=2, background=0, return_num=True)
    flat = labels.ravel()
    sizes = np.bincount(flat, minlength=n + 1)[1:]
    gray = np.zeros(n + 1, dtype=np.int64)
    gray[flat] = d.levels.ravel()
    return gray[1:], sizes


def glszm_features(d: DiscretizedImage) -> dict[str, float]:
    gray, size = zones(d)
    stats = item_statistics(gray, size, d.levels.size)
    return {n: stats[_KEYMAP[n]] for n in GLSZM_NAMES}
