"""Shared helpers for the gray-level matrix families.

GLRLM, GLSZM and GLDM are all matrices P(i, j) counting "items" (runs,
zones, or pixels) with gray level i and size/length/dependence j. Every
feature of these families is a sum over matrix cells, so it can be computed
directly from the item list without materializing P, which would be huge for
zone sizes on a 256 x 256 grid.
"""

from __future__ import annotations

import numpy as np


def entropy2(p: np.ndarray) -> float:
    """Shannon entropy in bits; empty cells contribute 0."""
    p = np.asarray(p, dtype=np.float64).ravel()
    p = p[p > 0]
    if p.size == 0:
        return 0.0
    return float(-np.sum(p * np.log2(p))) + 0.0


def item_statistics(gray: np.ndarray, size: np.ndarray, n_pixels: int) -> dict[str, float]:
    """All size-matrix quantities from per-item (gray level, size) pairs.

    Keys use generic names (``short``, ``long``, ``gln`` ...); the family
    modules map them to their feature names.
    """
    i = np.asarray(gray, dtype=np.float64)
    j = np.asarray(size, dtype=np.float64)
    n = i.size
    if n == 0:
        return dict.fromkeys(_KEYS, 0.0)
    i2 = i * i
    j2 = j * j
    gray_i = np.asarray(gray, dtype=np.int64)
    size_i = np.asarray(size, dtype=np.int64)
    gl_counts = np.bincount(gray_i)
    sz_counts = np.bincount(size_i)
    span = int(size_i.max()) + 1
    cell = gray_i * span + size_i
    if (int(gray_i.max()) + 1) * span <= _BINCOUNT_LIMIT:
        cell_counts = np.bincount(cell)
    else:
        cell_counts = np.unique(cell, return_counts=True)[1]
    cell_counts = cell_counts[cell_counts > 0]
    gl_sq = float(np.sum(gl_counts.astype(np.float64) ** 2))
    sz_sq = float(np.sum(sz_counts.astype(np.float64) ** 2))
    return {
        "short": float(np.mean(1.0 / j2)),
        "long": float(np.mean(j2)),
        "gln": gl_sq / n,
        "glnn": gl_sq / (n * n),
        "szn": sz_sq / n,
        "sznn": sz_sq / (n * n),
        "percentage": n / n_pixels,
        "glv": float(np.mean((i - i.mean()) ** 2)),
        "szv": float(np.mean((j - j.mean()) ** 2)),
        "entropy": entropy2(cell_counts / n),
        "low_gl": float(np.mean(1.0 / i2)),
        "high_gl": float(np.mean(i2)),
        "short_low": float(np.mean(1.0 / (i2 * j2))),
        "short_high": float(np.mean(i2 / j2)),
        "long_low": float(np.mean(j2 / i2)),
        "long_high": float(np.mean(i2 * j2)),
    }


_BINCOUNT_LIMIT = 1 << 16

_KEYS = (
    "short",
    "long",
    "gln",
    "glnn",
    "szn",
    "sznn",
    "percentage",
    "glv",
    "szv",
    "entropy",
    "low_gl",
    "high_gl",
    "short_low",
    "short_high",
    "long_low",
    "long_high",
)

# 2D neighbor offsets (dr, dc) for the 8-neighborhood
NEIGHBORS_8 = tuple((dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0))

# one offset per direction; 0, 45, 90, 135 degrees
DIRECTIONS = ((0, 1), (-1, 1), (-1, 0), (-1, -1))


def shifted(levels: np.ndarray, dr: int, dc: int, fill=0) -> np.ndarray:
    """out[r, c] = levels[r + dr, c + dc], with ``fill`` outside the grid."""
    h, w = levels.shape
    out = np.full((h, w), fill, dtype=levels.dtype)
    r_dst = slice(max(0, -dr), min(h, h - dr))
    c_dst = slice(max(0, -dc), min(w, w - dc))
    r_src = slice(max(0, dr), min(h, h + dr))
    c_src = slice(max(0, dc), min(w, w + dc))
    out[r_dst, c_dst] = levels[r_src, c_src]
    return out
