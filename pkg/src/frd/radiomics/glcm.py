"""Gray level co-occurrence matrix features.

One symmetric GLCM is built per direction (0, 45, 90, 135 degrees) at
distance 1. Features are computed on each normalized matrix and averaged over
the directions that contain at least one pixel pair. Matrices are restricted
to the gray levels present in the image; gray level values (not indices) enter
every formula, and the Idmn/Idn normalization uses the bin count.
"""

from __future__ import annotations

import numpy as np

from .catalog import GLCM_NAMES
from .discretize import DiscretizedImage
from ._common import DIRECTIONS


def cooccurrence(d: DiscretizedImage, dr: int, dc: int) -> np.ndarray:
    """Symmetric (unnormalized) bin_count x bin_count counts for offset (dr, dc)."""
    lv = d.levels
    h, w = lv.shape
    nb = d.bin_count
    a = lv[max(0, -dr) : h - max(0, dr), max(0, -dc) : w - max(0, dc)]
    b = lv[max(0, dr) : h + min(0, dr), max(0, dc) : w + min(0, dc)]
    counts = np.bincount(((a - 1) * nb + (b - 1)).ravel(), minlength=nb * nb).reshape(nb, nb)
    return (counts + counts.T).astype(np.float64)


def glcm_matrices(d: DiscretizedImage) -> tuple[np.ndarray, np.ndarray]:
    """Normalized GLCMs stacked as (directions, n, n) plus the gray values.

    Directions without any pixel pair are dropped.
    """
    present = np.unique(d.levels)
    idx = present - 1
    mats = []
    for dr, dc in DIRECTIONS:
        counts = cooccurrence(d, dr, dc)[np.ix_(idx, idx)]
        total = counts.sum()
        if total > 0:
            mats.append(counts / total)
    if not mats:
        return np.zeros((0, idx.size, idx.size)), present.astype(np.float64)
    return np.stack(mats), present.astype(np.float64)


def _xlog2x(p: np.ndarray, axes) -> np.ndarray:
    safe = np.where(p > 0, p, 1.0)
    return -np.sum(p * np.log2(safe), axis=axes) + 0.0


def _mcc(p: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    # Q = Dx^-1 P Dy^-1 P^T is similar to M M^T with M = Dx^-1/2 P Dy^-1/2
    rx = np.where(px > 0, 1.0 / np.sqrt(np.where(px > 0, px, 1.0)), 0.0)
    ry = np.where(py > 0, 1.0 / np.sqrt(np.where(py > 0, py, 1.0)), 0.0)
    m = p * rx[:, :, None] * ry[:, None, :]
    if p.shape[1] < 2:
        return np.ones(p.shape[0])
    ev = np.linalg.eigvalsh(m @ np.swapaxes(m, 1, 2))
    out = np.sqrt(np.maximum(ev[:, -2], 0.0))
    return np.where((px > 0).sum(axis=1) < 2, 1.0, out)


def _batched_features(p: np.ndarray, g: np.ndarray, bin_count: int) -> np.ndarray:
    """Feature table of shape (directions, 24) for stacked normalized GLCMs."""
    nd, n, _ = p.shape
    axes = (1, 2)
    i = g[None, :, None]
    j = g[None, None, :]
    px = p.sum(axis=2)
    py = p.sum(axis=1)
    ux = px @ g
    uy = py @ g
    sigx = np.sqrt(np.sum((g[None, :] - ux[:, None]) ** 2 * px, axis=1))
    sigy = np.sqrt(np.sum((g[None, :] - uy[:, None]) ** 2 * py, axis=1))

    gi = np.broadcast_to(g[:, None], (n, n))
    gj = np.broadcast_to(g[None, :], (n, n))
    diff = np.abs(gi - gj)
    diff2 = diff * diff
    # p_{x+y}(k) and p_{x-y}(k) over k = 2..2*bin_count and k = 0..bin_count-1
    k_sum = np.arange(2, 2 * bin_count + 1, dtype=np.float64)
    k_diff = np.arange(bin_count, dtype=np.float64)
    sum_idx = (gi + gj).astype(np.int64).ravel() - 2
    diff_idx = diff.astype(np.int64).ravel()
    flat = p.reshape(nd, n * n)
    p_sum = np.zeros((nd, k_sum.size))
    p_diff = np.zeros((nd, k_diff.size))
    for t in range(nd):
        p_sum[t] = np.bincount(sum_idx, weights=flat[t], minlength=k_sum.size)
        p_diff[t] = np.bincount(diff_idx, weights=flat[t], minlength=k_diff.size)

    hx = _xlog2x(px, 1)
    hy = _xlog2x(py, 1)
    hxy = _xlog2x(p, axes)
    pxpy = px[:, :, None] * py[:, None, :]
    safe = np.where(p > 0, pxpy, 1.0)
    hxy1 = -np.sum(p * np.log2(safe), axis=axes)
    hxy2 = _xlog2x(pxpy, axes)

    autocorr = np.sum(p * (i * j), axis=axes)
    centered = i + j - ux[:, None, None] - uy[:, None, None]
    c2 = centered * centered
    da = p_diff @ k_diff
    sig = sigx * sigy
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(sig > 0, (autocorr - ux * uy) / np.where(sig > 0, sig, 1.0), 1.0)
        hmax = np.maximum(hx, hy)
        imc1 = np.where(hmax > 0, (hxy - hxy1) / np.where(hmax > 0, hmax, 1.0), 0.0)
    off = diff > 0
    inv_diff2 = np.where(off, 1.0 / np.where(off, diff2, 1.0), 0.0)

    feats = {
        "Autocorrelation": autocorr,
        "JointAverage": ux,
        "ClusterProminence": np.sum(c2 * c2 * p, axis=axes),
        "ClusterShade": np.sum(c2 * centered * p, axis=axes),
        "ClusterTendency": np.sum(c2 * p, axis=axes),
        "Contrast": np.sum(diff2 * p, axis=axes),
        "Correlation": corr,
        "DifferenceAverage": da,
        "DifferenceEntropy": _xlog2x(p_diff, 1),
        "DifferenceVariance": np.sum((k_diff[None, :] - da[:, None]) ** 2 * p_diff, axis=1),
        "JointEnergy": np.sum(p * p, axis=axes),
        "JointEntropy": hxy,
        "Imc1": imc1,
        "Imc2": np.sqrt(1.0 - np.exp(-2.0 * np.maximum(hxy2 - hxy, 0.0))),
        "Idm": np.sum(p / (1.0 + diff2), axis=axes),
        "MCC": _mcc(p, px, py),
        "Idmn": np.sum(p / (1.0 + diff2 / float(bin_count) ** 2), axis=axes),
        "Id": np.sum(p / (1.0 + diff), axis=axes),
        "Idn": np.sum(p / (1.0 + diff / float(bin_count)), axis=axes),
        "InverseVariance": np.sum(p * inv_diff2, axis=axes),
        "MaximumProbability": p.max(axis=axes),
        "SumAverage": p_sum @ k_sum,
        "SumEntropy": _xlog2x(p_sum, 1),
        "SumSquares": np.sum((i - ux[:, None, None]) ** 2 * p, axis=axes),
    }
    return np.stack([feats[name] for name in GLCM_NAMES], axis=1)


def glcm_features(d: DiscretizedImage) -> dict[str, float]:
    p, g = glcm_matrices(d)
    if p.shape[0] == 0:
        return dict.fromkeys(GLCM_NAMES, 0.0)
    values = _batched_features(p, g, d.bin_count).mean(axis=0)
    return dict(zip(GLCM_NAMES, values.tolist()))
