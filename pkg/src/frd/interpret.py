"""Which features moved, and which images moved most, between two sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import CatalogError, PairingError, SampleSizeError
from .metrics import _values, fit_normalization
from .radiomics.catalog import CatalogEntry, FeatureCatalog
from .radiomics.extract import FeatureMatrix


class NormalizeRef(enum.Enum):
    A = "a"
    Joint = "joint"


@dataclass
class DeltaReport:
    catalog: FeatureCatalog
    delta: np.ndarray
    abs_delta: np.ndarray
    order: np.ndarray  # feature indices, largest |delta| first
    coverage: np.ndarray  # coverage[k - 1] = share of total |delta| in the top k
    k50: int
    normalize_ref: NormalizeRef

    @property
    def ranked_features(self) -> list[tuple[CatalogEntry, float]]:
        return [(self.catalog.entries[i], float(self.abs_delta[i])) for i in self.order]

    def to_dict(self, top_k: int | None = None) -> dict:
        order = self.order if top_k is None else self.order[:top_k]
        return {
            "normalize_ref": self.normalize_ref.value,
            "m": self.catalog.m,
            "k50": self.k50,
            "total_abs_delta": float(self.abs_delta.sum()),
            "top_features": [
                {
                    "feature": self.catalog.entries[i].label,
                    "delta": float(self.delta[i]),
                    "abs_delta": float(self.abs_delta[i]),
                }
                for i in order
            ],
            "coverage_curve": [[k + 1, float(c)] for k, c in enumerate(self.coverage)],
        }


@dataclass
class ImageChangeRanking:
    pairs: list[tuple[str, float]]

    def to_dict(self, top_k: int | None = None) -> list[dict]:
        pairs = self.pairs if top_k is None else self.pairs[:top_k]
        return [{"id": i, "change": v} for i, v in pairs]


def _catalog_of(a, b) -> FeatureCatalog | None:
    if isinstance(a, FeatureMatrix) and isinstance(b, FeatureMatrix):
        if a.catalog != b.catalog:
            raise CatalogError("matrices use different feature catalogs")
        return a.catalog
    for x in (a, b):
        if isinstance(x, FeatureMatrix):
            return x.catalog
    return None


def coverage_curve(abs_delta: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """(rank order, cumulative coverage, k50); ties keep catalog order."""
    abs_delta = np.asarray(abs_delta, dtype=np.float64)
    order = np.lexsort((np.arange(abs_delta.size), -abs_delta))
    total = float(abs_delta.sum())
    if total == 0.0:
        return order, np.zeros(0), 0
    cov = np.minimum(np.cumsum(abs_delta[order]) / total, 1.0)
    cov[-1] = 1.0
    k50 = int(np.argmax(cov >= 0.5)) + 1
    return order, cov, k50


def delta_report(a, b, normalize_ref: NormalizeRef | str = NormalizeRef.A) -> DeltaReport:
    """Mean feature change from ``a`` to ``b`` in z-scored units."""
    normalize_ref = NormalizeRef(normalize_ref)
    catalog = _catalog_of(a, b)
    va, vb = _values(a), _values(b)
    if va.shape[1] != vb.shape[1]:
        raise CatalogError(f"feature counts differ: {va.shape[1]} vs {vb.shape[1]}")
    for label, v in (("a", va), ("b", vb)):
        if v.shape[0] < 2:
            raise SampleSizeError(f"set {label} needs at least 2 rows, got {v.shape[0]}")
    if catalog is None:
        raise CatalogError("delta_report needs FeatureMatrix inputs to name the features")
    stats = fit_normalization(va if normalize_ref is NormalizeRef.A else np.vstack([va, vb]))
    delta = stats.apply(vb).mean(axis=0) - stats.apply(va).mean(axis=0)
    abs_delta = np.abs(delta)
    order, cov, k50 = coverage_curve(abs_delta)
    return DeltaReport(catalog, delta, abs_delta, order, cov, k50, normalize_ref)


def rank_image_changes(a: FeatureMatrix, b: FeatureMatrix) -> ImageChangeRanking:
    """Per-image L2 feature change between paired rows, largest first.

    Both matrices are z-scored with the statistics of ``a``.
    """
    _catalog_of(a, b)
    if sorted(a.ids) != sorted(b.ids) or len(set(a.ids)) != len(a.ids):
        missing = sorted(set(a.ids) ^ set(b.ids))
        detail = f": unmatched ids {', '.join(missing[:5])}" if missing else ""
        raise PairingError(f"input and output sets must contain the same ids{detail}")
    stats = fit_normalization(a)
    pos_b = {i: k for k, i in enumerate(b.ids)}
    vb = b.values[[pos_b[i] for i in a.ids]]
    diff = stats.apply(vb) - stats.apply(a.values)
    norms = np.sqrt(np.sum(diff * diff, axis=1))
    pairs = sorted(zip(a.ids, norms.tolist()), key=lambda t: (-t[1], t[0]))
    return ImageChangeRanking(pairs)
