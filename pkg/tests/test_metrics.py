import math

import numpy as np
import pytest

from frd.errors import CatalogError, DimError, NumericError, SampleSizeError
from frd.metrics import (
    EIG_TOL,
    GaussianSummary,
    Metric,
    distance,
    fit_gaussian,
    fit_normalization,
    frd,
    frd_v0,
    frechet,
    frechet_distance,
    frechet_terms,
    median_bandwidth,
    mmd,
    mmd_squared,
)
from frd.radiomics import FULL_CATALOG, FeatureCatalog, FeatureMatrix


def _g(mean, cov, n=10):
    return GaussianSummary(np.atleast_1d(np.asarray(mean, float)), np.atleast_2d(np.asarray(cov, float)), n)


def _fm(values):
    values = np.asarray(values, float)
    catalog = FeatureCatalog(FULL_CATALOG.entries[: values.shape[1]])
    return FeatureMatrix(values, [f"r{k:03d}" for k in range(values.shape[0])], catalog)


# ---------------------------------------------------------------- normalization


def test_normalization_examples():
    s = fit_normalization(np.array([[0.0, 5.0], [2.0, 5.0]]))
    assert s.mean.tolist() == [1.0, 5.0] and s.std.tolist() == [1.0, 1.0]
    assert s.constant.tolist() == [False, True]
    assert fit_normalization(np.array([[5.0], [5.0], [5.0]])).apply(np.array([[5.0]])).tolist() == [[0.0]]
    x = np.random.default_rng(0).normal(3, 7, (100, 5))
    z = fit_normalization(x).apply(x)
    assert np.all(np.abs(z.mean(axis=0)) <= 1e-12)
    assert np.all(np.abs(z.std(axis=0) - 1) <= 1e-12)
    with pytest.raises(SampleSizeError):
        fit_normalization(np.zeros((1, 3)))


def test_fit_gaussian_unbiased():
    x = np.random.default_rng(1).random((30, 4))
    g = fit_gaussian(x)
    assert np.allclose(g.covariance, np.cov(x, rowvar=False), atol=1e-15)
    assert np.array_equal(g.covariance, g.covariance.T) and g.sample_count == 30


# ---------------------------------------------------------------- Fréchet


def test_frechet_closed_forms():
    assert frechet_distance(_g(0, 1), _g(3, 1)) == pytest.approx(3.0, abs=1e-9)
    a = _g([0, 0], np.diag([1.0, 4.0]))
    b = _g([0, 0], np.diag([9.0, 1.0]))
    assert frechet_distance(a, b) == pytest.approx(math.sqrt(5), abs=1e-9)
    assert frechet_distance(a, a) == pytest.approx(0.0, abs=1e-9)


def test_frechet_matches_scipy_sqrtm_on_full_rank():
    from scipy.linalg import sqrtm

    rng = np.random.default_rng(2)
    for _ in range(5):
        m = 6
        x, y = rng.normal(size=(40, m)), rng.normal(1, 2, size=(50, m)) @ rng.normal(size=(m, m))
        a, b = fit_gaussian(x), fit_gaussian(y)
        cross = np.real(np.trace(sqrtm(a.covariance @ b.covariance)))
        want = math.sqrt(np.sum((a.mean - b.mean) ** 2) + np.trace(a.covariance) + np.trace(b.covariance) - 2 * cross)
        assert frechet_distance(a, b) == pytest.approx(want, rel=1e-8)
        assert frechet_distance(b, a) == pytest.approx(want, rel=1e-8)


def test_frechet_errors():
    with pytest.raises(DimError):
        frechet_distance(_g([0, 0], np.eye(2)), _g(0, 1))
    with pytest.raises(NumericError):
        frechet_distance(_g(np.nan, 1), _g(0, 1))


def test_clamp_bound_singular():
    # N << m: rank-deficient covariances exercise the eigenvalue clamp
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = 30
        a = fit_gaussian(rng.normal(size=(5, m)) * rng.uniform(0.1, 10, m))
        b = fit_gaussian(rng.normal(size=(8, m)))
        t = frechet_terms(a, b)
        t0 = frechet_terms(a, b, tol=0.0)
        shift = abs(t0.cross_trace - t.cross_trace)
        lam_max = t.clamp_floor / EIG_TOL
        # each clamped eigenvalue is below tol * lam_max, so it contributed < sqrt(tol * lam_max)
        assert 2 * shift <= 2 * m * math.sqrt(EIG_TOL * lam_max)


# ---------------------------------------------------------------- frd


def test_frd_identity_clamps():
    x = _fm(np.random.default_rng(4).random((20, 6)))
    r = frd(x, x)
    assert r.epsilon_clamped and r.value == pytest.approx(math.log(1e-12))
    assert r.metric is Metric.FRD and r.m_used == 6 and r.n_ref == r.n_test == 20


def test_frd_asymmetric():
    rng = np.random.default_rng(5)
    a = _fm(rng.normal(0, 1, (40, 3)))
    b = _fm(rng.normal(1, 3, (40, 3)))
    assert frd(a, b).value != pytest.approx(frd(b, a).value, abs=1e-3)


def test_frd_is_log_of_frechet():
    rng = np.random.default_rng(6)
    a, b = rng.random((30, 4)), rng.random((25, 4)) + 0.3
    assert frd(a, b).value == pytest.approx(math.log(frechet(a, b).value), abs=1e-12)


def test_frd_catalog_mismatch():
    a = _fm(np.random.default_rng(7).random((5, 3)))
    b = FeatureMatrix(a.values, a.ids, FeatureCatalog(FULL_CATALOG.entries[100:103]))
    with pytest.raises(CatalogError):
        frd(a, b)
    with pytest.raises(SampleSizeError):
        frd(a.values[:1], a.values)


# ---------------------------------------------------------------- frd_v0


def test_frd_v0_examples():
    x = np.random.default_rng(8).random((10, 4))
    assert frd_v0(x, x).value == pytest.approx(0.0, abs=1e-9)
    assert frd_v0(np.array([[0.0], [1.0]]), np.array([[0.0], [2.0]])).value == pytest.approx(0.0, abs=1e-12)
    y = np.random.default_rng(9).random((12, 4))
    scale, shift = np.array([2.0, 0.5, 9.0, 1e-3]), np.array([1.0, -4.0, 0.0, 7.0])
    assert frd_v0(x, y).value == pytest.approx(frd_v0(x, y * scale + shift).value, rel=1e-9)
    assert frd_v0(x, y).metric is Metric.FRDv0


def test_frd_v0_warns_on_wavelet_catalog(caplog):
    fm = FeatureMatrix(np.random.default_rng(1).random((4, 465)), list("abcd"), FULL_CATALOG)
    with caplog.at_level("WARNING"):
        frd_v0(fm, fm)
    assert "original-image" in caplog.text


# ---------------------------------------------------------------- mmd


def _mmd2_oracle(x, y, bw):
    k = lambda u, v: math.exp(-sum((a - b) ** 2 for a, b in zip(u, v)) / (2 * bw * bw))
    n, m = len(x), len(y)
    sxx = sum(k(x[i], x[j]) for i in range(n) for j in range(n) if i != j) / (n * (n - 1))
    syy = sum(k(y[i], y[j]) for i in range(m) for j in range(m) if i != j) / (m * (m - 1))
    sxy = sum(k(u, v) for u in x for v in y) / (n * m)
    return sxx + syy - 2 * sxy


def test_mmd_point_masses():
    x = np.array([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
    y = np.array([[3.0, 0.0], [3.0, 0.0], [3.0, 0.0]])
    # within-set kernels are 1, cross kernels exp(-9/2)
    assert mmd_squared(x, y, 1.0) == pytest.approx(2 - 2 * math.exp(-4.5), abs=1e-15)
    rng = np.random.default_rng(10)
    u, v = rng.normal(size=(4, 3)), rng.normal(1, 1, size=(5, 3))
    assert mmd_squared(u, v, 1.3) == pytest.approx(_mmd2_oracle(u.tolist(), v.tolist(), 1.3), abs=1e-12)
    assert mmd_squared(u, v, 0.7) == pytest.approx(mmd_squared(v, u, 0.7), abs=1e-15)


def test_mmd_identity_and_median():
    x = np.random.default_rng(11).random((15, 3))
    assert mmd(x, x).value == 0.0
    pooled = np.vstack([x, x])
    d = [np.linalg.norm(pooled[i] - pooled[j]) for i in range(30) for j in range(i + 1, 30)]
    assert median_bandwidth(x, x) == pytest.approx(float(np.median(d)), rel=1e-12)
    assert median_bandwidth(np.zeros((2, 2)), np.zeros((2, 2))) == 1.0
    y = x + 2.0
    assert distance(x, y, "mmd").value > 0.5


def test_distance_dispatch():
    x = np.random.default_rng(12).random((10, 3))
    y = x + 0.1
    assert distance(x, y, "frechet").value == frechet(x, y).value
    assert distance(x, y, Metric.FRD).value == frd(x, y).value
    assert distance(x, y, "frd-v0").metric is Metric.FRDv0
    d = distance(x, y, "frd").to_dict()
    assert d["metric"] == "frd" and set(d) == {"value", "metric", "m_used", "n_ref", "n_test", "epsilon_clamped"}
