"""Single-level undecimated (stationary) separable wavelet filter bank.

Each image yields five grids: the original plus the LL, LH, HL and HH
sub-bands. The first letter of a sub-band names the filter applied along the
rows (horizontal direction, axis 1), the second the filter applied along the
columns (vertical direction, axis 0). Filtering is done directly in the spatial
domain with mirror padding (``d c b a | a b c d | d c b a``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import KernelError


class FilterVariant(enum.Enum):
    Original = "original"
    LL = "wavelet-LL"
    LH = "wavelet-LH"
    HL = "wavelet-HL"
    HH = "wavelet-HH"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> "FilterVariant":
        for v in cls:
            if v.value == label:
                return v
        raise ValueError(f"unknown filter variant {label!r}")


VARIANTS: tuple[FilterVariant, ...] = tuple(FilterVariant)
WAVELET_VARIANTS: tuple[FilterVariant, ...] = VARIANTS[1:]


@dataclass(frozen=True)
class WaveletKernel:
    name: str
    low: tuple[float, ...]
    high: tuple[float, ...]

    def __post_init__(self):
        for label, taps in (("low", self.low), ("high", self.high)):
            if len(taps) == 0:
                raise KernelError(f"{self.name}: empty {label}-pass kernel")
            norm = math.sqrt(math.fsum(t * t for t in taps))
            if abs(norm - 1.0) > 1e-9:
                raise KernelError(f"{self.name}: {label}-pass kernel has L2 norm {norm!r}, expected 1")

    @property
    def anchor(self) -> int:
        return (len(self.low) - 1) // 2


_S = 1.0 / math.sqrt(2.0)
HAAR = WaveletKernel("haar", (_S, _S), (_S, -_S))

# Coiflet-1 decomposition filters (6 taps).
_COIF1_LO = (
    -0.01565572813546454,
    -0.0727326195128539,
    0.38486484686420286,
    0.8525720202122554,
    0.3378976624578092,
    -0.0727326195128539,
)
_COIF1_HI = tuple(((-1) ** (k + 1)) * c for k, c in enumerate(reversed(_COIF1_LO)))
COIF1 = WaveletKernel("coif1", _COIF1_LO, _COIF1_HI)

KERNELS = {"haar": HAAR, "coif1": COIF1}


def get_kernel(name: str | None) -> WaveletKernel | None:
    """Look up a kernel by CLI name; ``"none"`` returns ``None``."""
    if name is None or name == "none":
        return None
    try:
        return KERNELS[name]
    except KeyError:
        raise KernelError(f"unknown wavelet {name!r} (choose from haar, coif1, none)") from None


@dataclass(frozen=True, eq=False)
class FilterBankOutput:
    variant: FilterVariant
    pixels: np.ndarray


def filter_1d(grid: np.ndarray, taps, axis: int, anchor: int) -> np.ndarray:
    """out[n] = sum_k taps[k] * x[n + k - anchor] along ``axis``, mirror padded."""
    taps = tuple(float(t) for t in taps)
    n_taps = len(taps)
    x = np.moveaxis(np.asarray(grid, dtype=np.float64), axis, -1)
    n = x.shape[-1]
    pad = [(0, 0)] * (x.ndim - 1) + [(anchor, n_taps - 1 - anchor)]
    xp = np.pad(x, pad, mode="symmetric")
    out = taps[0] * xp[..., 0:n]
    for k in range(1, n_taps):
        out = out + taps[k] * xp[..., k : k + n]
    return np.moveaxis(out, -1, axis)


def filter_bank(img, kernel: WaveletKernel | None = HAAR) -> list[FilterBankOutput]:
    """Return the Original grid followed by the LL, LH, HL, HH sub-bands.

    ``img`` may be an :class:`~frd.imageio.Image` or a bare 2D array. With
    ``kernel=None`` only the Original variant is produced.
    """
    pixels = np.asarray(getattr(img, "pixels", img), dtype=np.float64)
    out = [FilterBankOutput(FilterVariant.Original, pixels.copy())]
    if kernel is None:
        return out
    if not isinstance(kernel, WaveletKernel):
        raise KernelError(f"expected a WaveletKernel, got {type(kernel).__name__}")
    a = kernel.anchor
    rows = {
        "L": filter_1d(pixels, kernel.low, axis=1, anchor=a),
        "H": filter_1d(pixels, kernel.high, axis=1, anchor=a),
    }
    for variant in WAVELET_VARIANTS:
        row_band, col_band = variant.name[0], variant.name[1]
        taps = kernel.low if col_band == "L" else kernel.high
        out.append(FilterBankOutput(variant, filter_1d(rows[row_band], taps, axis=0, anchor=a)))
    return out
