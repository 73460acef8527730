"""Distances between two feature matrices.

``frd`` is the log Fréchet distance between Gaussian fits of features that were
z-scored with the reference set's statistics. ``frd_v0`` is the older
min-max/rescale variant, ``frechet`` the same quantity as ``frd`` before the
log, and ``mmd`` a kernel two-sample alternative to the Gaussian fit.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import CatalogError, DimError, NumericError, SampleSizeError
from .radiomics.extract import FeatureMatrix
from .wavelet import FilterVariant

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-12
EIG_TOL = 1e-10
V0_SCALE = 7.456
ASYMMETRY_TOL = 1e-12
# covariance bracket values below this fraction of tr A + tr B are round-off
BRACKET_NOISE = math.sqrt(np.finfo(np.float64).eps)


class Metric(enum.Enum):
    FRD = "frd"
    FRDv0 = "frd-v0"
    Frechet = "frechet"
    MMD = "mmd"


@dataclass(frozen=True)
class NormalizationStats:
    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray

    def apply(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        if values.shape[-1] != self.mean.size:
            raise DimError(f"expected {self.mean.size} features, got {values.shape[-1]}")
        return (values - self.mean) / self.std


@dataclass(frozen=True)
class GaussianSummary:
    mean: np.ndarray
    covariance: np.ndarray
    sample_count: int

    @property
    def m(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class FrechetTerms:
    """Pieces of the squared distance, kept for diagnostics."""

    mean_term: float
    trace_a: float
    trace_b: float
    cross_trace: float  # tr sqrt(A^1/2 B A^1/2) after clamping
    clamped: int  # eigenvalues zeroed by the relative clamp
    clamp_floor: float  # tol * lambda_max

    @property
    def bracket(self) -> float:
        total = self.trace_a + self.trace_b
        value = total - 2.0 * self.cross_trace
        return 0.0 if value <= BRACKET_NOISE * total else value

    @property
    def squared(self) -> float:
        return self.mean_term + self.bracket

    @property
    def distance(self) -> float:
        return math.sqrt(max(self.squared, 0.0))


@dataclass(frozen=True)
class DistanceResult:
    value: float
    metric: Metric
    m_used: int
    n_ref: int
    n_test: int
    epsilon_clamped: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        out["metric"] = self.metric.value
        return out


def _values(x) -> np.ndarray:
    values = x.values if isinstance(x, FeatureMatrix) else np.asarray(x, dtype=np.float64)
    if values.ndim != 2:
        raise DimError(f"expected a 2D feature matrix, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise NumericError("feature matrix contains non-finite values")
    return values


def _pair(ref, test, min_rows: int = 2) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(ref, FeatureMatrix) and isinstance(test, FeatureMatrix) and ref.catalog != test.catalog:
        raise CatalogError("reference and test matrices use different feature catalogs")
    a, b = _values(ref), _values(test)
    if a.shape[1] != b.shape[1]:
        raise DimError(f"feature dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    for label, v in (("reference", a), ("test", b)):
        if v.shape[0] < min_rows:
            raise SampleSizeError(f"{label} set needs at least {min_rows} rows, got {v.shape[0]}")
    return a, b


def fit_normalization(ref) -> NormalizationStats:
    """Per-feature mean and population standard deviation of ``ref``."""
    values = _values(ref)
    if values.shape[0] < 2:
        raise SampleSizeError(f"normalization needs at least 2 rows, got {values.shape[0]}")
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    constant = std == 0
    std = np.where(constant, 1.0, std)
    return NormalizationStats(mean, std, constant)


def fit_gaussian(values) -> GaussianSummary:
    """Sample mean and unbiased covariance."""
    values = _values(values)
    n = values.shape[0]
    if n < 2:
        raise SampleSizeError(f"a Gaussian fit needs at least 2 rows, got {n}")
    mean = values.mean(axis=0)
    centered = values - mean
    cov = centered.T @ centered / (n - 1)
    asym = np.max(np.abs(cov - cov.T)) if cov.size else 0.0
    scale = max(float(np.max(np.abs(cov))), 1.0) if cov.size else 1.0
    if asym > ASYMMETRY_TOL * scale:
        raise NumericError(f"covariance asymmetry {asym:.3g} exceeds tolerance")
    cov = 0.5 * (cov + cov.T)
    return GaussianSummary(mean, cov, n)


def _psd_sqrt(cov: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(cov)
    return (v * np.sqrt(np.maximum(w, 0.0))) @ v.T


def frechet_terms(a: GaussianSummary, b: GaussianSummary, tol: float = EIG_TOL) -> FrechetTerms:
    if a.mean.shape != b.mean.shape or a.covariance.shape != b.covariance.shape:
        raise DimError(f"summary dimensions differ: {a.m} vs {b.m}")
    for s in (a, b):
        if not (np.all(np.isfinite(s.mean)) and np.all(np.isfinite(s.covariance))):
            raise NumericError("Gaussian summary contains non-finite values")
    diff = a.mean - b.mean
    root_a = _psd_sqrt(a.covariance)
    sym = root_a @ b.covariance @ root_a
    sym = 0.5 * (sym + sym.T)
    lam = np.linalg.eigvalsh(sym)
    lam_max = float(lam[-1]) if lam.size else 0.0
    floor = tol * max(lam_max, 0.0)
    keep = lam > floor
    cross = float(np.sum(np.sqrt(lam[keep])))
    return FrechetTerms(
        mean_term=float(diff @ diff),
        trace_a=float(np.trace(a.covariance)),
        trace_b=float(np.trace(b.covariance)),
        cross_trace=cross,
        clamped=int(lam.size - keep.sum()),
        clamp_floor=floor,
    )


def frechet_distance(a: GaussianSummary, b: GaussianSummary, tol: float = EIG_TOL) -> float:
    """2-Wasserstein distance between two Gaussian summaries."""
    return frechet_terms(a, b, tol).distance


def frechet(ref, test) -> DistanceResult:
    """Fréchet distance of reference-normalized features (``frd`` without the log)."""
    a, b = _pair(ref, test)
    stats = fit_normalization(a)
    value = frechet_distance(fit_gaussian(stats.apply(a)), fit_gaussian(stats.apply(b)))
    return DistanceResult(value, Metric.Frechet, a.shape[1], a.shape[0], b.shape[0])


def frd(ref, test, epsilon: float = DEFAULT_EPSILON) -> DistanceResult:
    """Log Fréchet distance after z-scoring both sets with ``ref`` statistics."""
    if not epsilon > 0:
        raise NumericError(f"epsilon must be positive, got {epsilon!r}")
    d = frechet(ref, test)
    clamped = d.value < epsilon
    value = math.log(max(d.value, epsilon))
    return DistanceResult(value, Metric.FRD, d.m_used, d.n_ref, d.n_test, clamped)


def _minmax(values: np.ndarray) -> np.ndarray:
    lo = values.min(axis=0)
    span = values.max(axis=0) - lo
    out = np.zeros_like(values)
    ok = span > 0
    out[:, ok] = (values[:, ok] - lo[ok]) / span[ok]
    return out


def frd_v0(ref, test) -> DistanceResult:
    """Legacy variant: each set min-max scaled on its own, to [0, 7.456]; no log."""
    a, b = _pair(ref, test)
    for x in (ref, test):
        if isinstance(x, FeatureMatrix) and any(e.variant is not FilterVariant.Original for e in x.catalog):
            log.warning("frd-v0 is defined on original-image features only; catalog includes wavelet features")
            break
    value = frechet_distance(fit_gaussian(_minmax(a) * V0_SCALE), fit_gaussian(_minmax(b) * V0_SCALE))
    return DistanceResult(value, Metric.FRDv0, a.shape[1], a.shape[0], b.shape[0])


def _sq_dists(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = np.sum(x * x, axis=1)[:, None] + np.sum(y * y, axis=1)[None, :] - 2.0 * (x @ y.T)
    return np.maximum(d, 0.0)


def median_bandwidth(x: np.ndarray, y: np.ndarray) -> float:
    """Median pairwise Euclidean distance over the pooled samples (1 if that is 0)."""
    pooled = np.vstack([x, y])
    d = _sq_dists(pooled, pooled)
    iu = np.triu_indices(pooled.shape[0], k=1)
    med = float(np.median(np.sqrt(d[iu])))
    return med if med > 0 else 1.0


def mmd_squared(x: np.ndarray, y: np.ndarray, bandwidth: float) -> float:
    """Unbiased MMD^2 with k(u, v) = exp(-|u - v|^2 / (2 bw^2))."""
    if not bandwidth > 0:
        raise NumericError(f"bandwidth must be positive, got {bandwidth!r}")
    n, m = x.shape[0], y.shape[0]
    g = -0.5 / (bandwidth * bandwidth)
    kxx = np.exp(g * _sq_dists(x, x))
    kyy = np.exp(g * _sq_dists(y, y))
    kxy = np.exp(g * _sq_dists(x, y))
    sxx = (kxx.sum() - np.trace(kxx)) / (n * (n - 1))
    syy = (kyy.sum() - np.trace(kyy)) / (m * (m - 1))
    return float(sxx + syy - 2.0 * kxy.mean())


def mmd(ref, test, bandwidth: float | str = "median") -> DistanceResult:
    a, b = _pair(ref, test)
    stats = fit_normalization(a)
    x, y = stats.apply(a), stats.apply(b)
    bw = median_bandwidth(x, y) if bandwidth == "median" else float(bandwidth)
    value = math.sqrt(max(mmd_squared(x, y, bw), 0.0))
    return DistanceResult(value, Metric.MMD, a.shape[1], a.shape[0], b.shape[0])


def distance(ref, test, metric: Metric | str = Metric.FRD, epsilon: float = DEFAULT_EPSILON,
             bandwidth: float | str = "median") -> DistanceResult:
    metric = Metric(metric)
    if metric is Metric.FRD:
        return frd(ref, test, epsilon)
    if metric is Metric.FRDv0:
        return frd_v0(ref, test)
    if metric is Metric.Frechet:
        return frechet(ref, test)
    return mmd(ref, test, bandwidth)
