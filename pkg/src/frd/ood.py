"""Radiomic out-of-distribution detection.

A test image's score is the L2 distance of its z-scored features from the
reference mean. Reference images are scored leave-one-out against the other
reference images, and the chosen percentile of those scores is the threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CatalogError, DimError, EmptyInput, ParamError, SampleSizeError
from .metrics import NormalizationStats, _values, fit_normalization
from .radiomics.extract import FeatureMatrix

DEFAULT_PERCENTILE = 95.0


@dataclass(frozen=True)
class OODScoreSet:
    ids: list[str]
    scores: np.ndarray
    reference_name: str = ""

    def __len__(self) -> int:
        return len(self.ids)


@dataclass
class OODReport:
    threshold: float
    percentile: float
    ids: list[str]
    scores: list[float]
    labels: list[bool]
    auc: float | None
    nfrd_group: float | None
    n_id_ref: int
    n_test: int
    reference_scores: list[float] = field(default_factory=list, repr=False)

    @property
    def ood_fraction(self) -> float:
        return sum(self.labels) / len(self.labels) if self.labels else 0.0

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "percentile": self.percentile,
            "auc": self.auc,
            "nfrd_group": self.nfrd_group,
            "counts": {"n_id_ref": self.n_id_ref, "n_test": self.n_test},
            "ood_fraction": self.ood_fraction,
            "images": [
                {"id": i, "score": s, "ood": lab} for i, s, lab in zip(self.ids, self.scores, self.labels)
            ],
        }


@dataclass(frozen=True)
class Classification:
    label: int
    score_a: float
    score_b: float


def _ids(x, n: int) -> list[str]:
    return list(x.ids) if isinstance(x, FeatureMatrix) else [str(k) for k in range(n)]


def _check_catalogs(*mats) -> None:
    cats = [m.catalog for m in mats if isinstance(m, FeatureMatrix)]
    if any(c != cats[0] for c in cats[1:]):
        raise CatalogError("feature matrices use different catalogs")


def _stats_for(ref: np.ndarray, stats: NormalizationStats | None) -> NormalizationStats:
    stats = fit_normalization(ref) if stats is None else stats
    if stats.mean.size != ref.shape[1]:
        raise DimError(f"normalization has {stats.mean.size} features, reference has {ref.shape[1]}")
    return stats


def ood_score(x, ref, stats: NormalizationStats | None = None) -> float:
    """L2 distance between z-scored ``x`` and the z-scored reference mean."""
    r = _values(ref)
    stats = _stats_for(r, stats)
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != r.shape[1]:
        raise DimError(f"feature vector has {x.size} entries, reference has {r.shape[1]}")
    diff = stats.apply(x) - stats.apply(r.mean(axis=0))
    return float(np.sqrt(diff @ diff))


def score_matrix(test, ref, stats: NormalizationStats | None = None) -> OODScoreSet:
    """``ood_score`` for every row of ``test``."""
    _check_catalogs(test, ref)
    t, r = _values(test), _values(ref)
    if t.shape[1] != r.shape[1]:
        raise DimError(f"feature dimensions differ: {t.shape[1]} vs {r.shape[1]}")
    stats = _stats_for(r, stats)
    diff = stats.apply(t) - stats.apply(r.mean(axis=0))
    return OODScoreSet(_ids(test, t.shape[0]), np.sqrt(np.sum(diff * diff, axis=1)))


def loo_reference_scores(ref, stats: NormalizationStats | None = None, name: str = "") -> OODScoreSet:
    """Score each reference row against the mean of the other rows.

    Normalization uses the statistics of the full reference set.
    """
    r = _values(ref)
    n = r.shape[0]
    if n < 3:
        raise SampleSizeError(f"leave-one-out scoring needs at least 3 reference rows, got {n}")
    stats = _stats_for(r, stats)
    loo_mean = (n * r.mean(axis=0) - r) / (n - 1)
    diff = stats.apply(r) - stats.apply(loo_mean)
    return OODScoreSet(_ids(ref, n), np.sqrt(np.sum(diff * diff, axis=1)), name)


def _check_percentile(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 100.0:
        raise ParamError(f"percentile must lie in [0, 100], got {p!r}")
    return p


def select_threshold(scores, percentile: float = DEFAULT_PERCENTILE) -> float:
    """Linear-interpolation percentile of ``scores``."""
    p = _check_percentile(percentile)
    s = np.sort(np.asarray(getattr(scores, "scores", scores), dtype=np.float64).ravel())
    if s.size == 0:
        raise EmptyInput("cannot select a threshold from no scores")
    r = p / 100.0 * (s.size - 1)
    lo = int(math.floor(r))
    hi = min(lo + 1, s.size - 1)
    return float(s[lo] + (r - lo) * (s[hi] - s[lo]))


def auc(pos_scores: Sequence[float], neg_scores: Sequence[float]) -> float:
    """P(pos > neg) + 0.5 P(pos == neg) over all pairs (Mann-Whitney)."""
    pos = np.asarray(pos_scores, dtype=np.float64).ravel()
    neg = np.sort(np.asarray(neg_scores, dtype=np.float64).ravel())
    if pos.size == 0 or neg.size == 0:
        raise EmptyInput("AUC needs at least one positive and one negative score")
    below = np.searchsorted(neg, pos, side="left")
    not_above = np.searchsorted(neg, pos, side="right")
    # integer sums are exact; halve ties at the end
    wins = 2 * int(below.sum()) + int((not_above - below).sum())
    return wins / (2.0 * pos.size * neg.size)


def detect(test, ref, percentile: float = DEFAULT_PERCENTILE, with_auc: bool = True) -> OODReport:
    p = _check_percentile(percentile)
    _check_catalogs(test, ref)
    r = _values(ref)
    stats = fit_normalization(r)
    ref_scores = loo_reference_scores(r, stats)
    threshold = select_threshold(ref_scores, p)
    test_scores = score_matrix(test, r, stats)
    scores = test_scores.scores
    a = auc(scores, ref_scores.scores) if with_auc else None
    return OODReport(
        threshold=threshold,
        percentile=p,
        ids=test_scores.ids,
        scores=scores.tolist(),
        labels=(scores >= threshold).tolist(),
        auc=a,
        nfrd_group=None if a is None else 2.0 * (a - 0.5),
        n_id_ref=r.shape[0],
        n_test=scores.size,
        reference_scores=ref_scores.scores.tolist(),
    )


def nfrd_group(test, ref) -> float:
    """2 (AUC[test scores, leave-one-out reference scores] - 0.5); signed."""
    return detect(test, ref).nfrd_group


def classify_by_reference(x, ref_a, ref_b) -> Classification:
    """Label 1 when ``x`` is at least as far from ``ref_a`` as from ``ref_b``.

    Each reference set is normalized with its own statistics.
    """
    _check_catalogs(ref_a, ref_b)
    sa = ood_score(x, ref_a)
    sb = ood_score(x, ref_b)
    return Classification(int(sa >= sb), sa, sb)


def classify_matrix(test, ref_a, ref_b) -> list[tuple[str, Classification]]:
    _check_catalogs(test, ref_a, ref_b)
    a, b = _values(ref_a), _values(ref_b)
    for label, v in (("ref-a", a), ("ref-b", b)):
        if v.shape[0] < 2:
            raise SampleSizeError(f"{label} needs at least 2 rows, got {v.shape[0]}")
    sa = score_matrix(test, a).scores
    sb = score_matrix(test, b).scores
    ids = _ids(test, sa.size)
    return [(i, Classification(int(x >= y), float(x), float(y))) for i, x, y in zip(ids, sa, sb)]
