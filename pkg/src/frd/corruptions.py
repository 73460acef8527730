"""Seeded, severity-controlled image corruptions.

Severity ``p`` runs from 0 (identity) to 100. Randomness comes from numpy's
Philox counter-based generator keyed by ``seed XOR blake2b(image id)``, so each
image's corruption depends only on the image, its CorruptionSpec and the seed, never on
processing order or worker count.
"""

from __future__ import annotations

import enum
import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ParamError
from .imageio import Image, ImageSet, as_image_set
from .wavelet import filter_1d

SWAP_PATCH = 15
BIAS_DEGREE = 3
BIAS_SCALE = 0.5
_U64 = (1 << 64) - 1


class CorruptionKind(enum.Enum):
    GaussianNoise = "noise"
    GaussianBlur = "blur"
    RandomSwap = "swap"
    BiasField = "bias"


@dataclass(frozen=True)
class CorruptionSpec:
    kind: CorruptionKind
    severity: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", CorruptionKind(self.kind))
        p = float(self.severity)
        if not 0.0 <= p <= 100.0:
            raise ParamError(f"severity must lie in [0, 100], got {self.severity!r}")
        object.__setattr__(self, "severity", p)
        if not 0 <= int(self.seed) <= _U64:
            raise ParamError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))


def id_hash(image_id: str) -> int:
    return int.from_bytes(hashlib.blake2b(image_id.encode("utf-8"), digest_size=8).digest(), "little")


def rng_for(image_id: str, seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed ^ id_hash(image_id)) & _U64))


def blur_kernel_size(p: float, max_side: int) -> int:
    """``(p / 100) * max_side`` rounded to the nearest odd integer."""
    k = p / 100.0 * max_side
    return 2 * int(math.floor(k / 2.0)) + 1


def gaussian_taps(k: int) -> np.ndarray:
    sigma = k / 6.0
    x = np.arange(k, dtype=np.float64) - (k - 1) / 2.0
    taps = np.exp(-0.5 * (x / sigma) ** 2)
    return taps / taps.sum()


def _noise(px, p, rng):
    return np.clip(px + (p / 100.0) * rng.standard_normal(px.shape), 0.0, 1.0)


def _blur(px, p, rng):
    k = blur_kernel_size(p, max(px.shape))
    if k < 3:
        return px.copy()
    taps = gaussian_taps(k)
    a = (k - 1) // 2
    out = filter_1d(filter_1d(px, taps, axis=1, anchor=a), taps, axis=0, anchor=a)
    return np.clip(out, 0.0, 1.0)


def _swap(px, p, rng):
    out = px.copy()
    h, w = px.shape
    size_r, size_c = min(SWAP_PATCH, h), min(SWAP_PATCH, w)
    for _ in range(int(math.floor(p + 0.5))):
        r1, r2 = rng.integers(0, h - size_r + 1, size=2)
        c1, c2 = rng.integers(0, w - size_c + 1, size=2)
        _swap_patches(out, (r1, c1), (r2, c2), (size_r, size_c))
    return out


def _swap_patches(out, p, q, size):
    (r1, c1), (r2, c2), (sr, sc) = p, q, size
    if abs(r1 - r2) >= sr or abs(c1 - c2) >= sc:
        a = out[r1 : r1 + sr, c1 : c1 + sc].copy()
        out[r1 : r1 + sr, c1 : c1 + sc] = out[r2 : r2 + sr, c2 : c2 + sc]
        out[r2 : r2 + sr, c2 : c2 + sc] = a
        return
    # overlapping patches: exchange corresponding pixels one at a time in raster
    # order, so the result is always a permutation of the input
    for i in range(sr):
        for j in range(sc):
            u, v = (r1 + i, c1 + j), (r2 + i, c2 + j)
            out[u], out[v] = out[v], out[u]


def bias_field(shape: tuple[int, int], p: float, rng: np.random.Generator) -> np.ndarray:
    """Smooth positive multiplicative field with mean 1.

    The log-field is a degree-3 polynomial in coordinates scaled to [-1, 1],
    with coefficients uniform in [-c, c], c = 0.5 p / 100.
    """
    h, w = shape
    y = np.linspace(-1.0, 1.0, h)[:, None]
    x = np.linspace(-1.0, 1.0, w)[None, :]
    c = BIAS_SCALE * p / 100.0
    poly = np.zeros(shape)
    for i in range(BIAS_DEGREE + 1):
        for j in range(BIAS_DEGREE + 1 - i):
            poly = poly + rng.uniform(-c, c) * (y**i) * (x**j)
    field = np.exp(poly)
    return field / field.mean()


def _bias(px, p, rng):
    return np.clip(px * bias_field(px.shape, p, rng), 0.0, 1.0)


_APPLY = {
    CorruptionKind.GaussianNoise: _noise,
    CorruptionKind.GaussianBlur: _blur,
    CorruptionKind.RandomSwap: _swap,
    CorruptionKind.BiasField: _bias,
}


def apply(img: Image, spec: CorruptionSpec) -> Image:
    """Corrupted copy of ``img`` (same id)."""
    if spec.severity == 0.0:
        return Image(img.id, img.pixels.copy())
    rng = rng_for(img.id, spec.seed)
    return Image(img.id, _APPLY[spec.kind](img.pixels, spec.severity, rng))


def apply_to_set(images: ImageSet | Iterable[Image], spec: CorruptionSpec, workers: int = 1) -> ImageSet:
    image_set = as_image_set(list(images) if not isinstance(images, ImageSet) else images)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(lambda im: apply(im, spec), image_set))
    else:
        out = [apply(im, spec) for im in image_set]
    return ImageSet(out, name=image_set.name)
