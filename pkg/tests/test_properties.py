"""Property tests for the per-module invariants.

Hypothesis draws seeds and shapes; numpy generates the data from the seed.
"""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from frd.corruptions import CorruptionSpec, apply
from frd.imageio import Image
from frd.interpret import delta_report, rank_image_changes
from frd.metrics import fit_gaussian, frechet_distance
from frd.ood import detect
from frd.radiomics import (
    FULL_CATALOG,
    FeatureCatalog,
    FeatureMatrix,
    discretize,
    first_order_features,
    glcm_features,
    gldm_features,
    glrlm_features,
    glszm_features,
    ngtdm_features,
)
from frd.wavelet import COIF1, HAAR, filter_bank

CASES = settings(max_examples=60, deadline=None, derandomize=True, suppress_health_check=list(HealthCheck))
seeds = st.integers(0, 2**32 - 1)


def _fm(values, prefix="i"):
    ids = [f"{prefix}{k:03d}" for k in range(values.shape[0])]
    return FeatureMatrix(values, ids, FeatureCatalog(FULL_CATALOG.entries[: values.shape[1]]))


def _affine(rng, m):
    return rng.uniform(0.05, 20, m) * rng.choice([-1.0, 1.0], m), rng.uniform(-50, 50, m)


@CASES
@given(seeds, st.integers(3, 10), st.integers(3, 10))
def test_texture_features_ignore_positive_affine_intensity(seed, h, w):
    rng = np.random.default_rng(seed)
    grid = rng.random((h, w))
    scale, shift = rng.uniform(0.01, 100), rng.uniform(-10, 10)
    d0, d1 = discretize(grid), discretize(scale * grid + shift)
    assert np.array_equal(d0.levels, d1.levels)
    for fn in (glcm_features, glrlm_features, glszm_features, gldm_features, ngtdm_features):
        a, b = fn(d0), fn(d1)
        assert all(abs(a[k] - b[k]) <= 1e-9 * max(1.0, abs(a[k])) for k in a)


@CASES
@given(seeds, st.integers(2, 10), st.integers(2, 10))
def test_first_order_location_features_are_equivariant(seed, h, w):
    rng = np.random.default_rng(seed)
    grid = rng.random((h, w))
    scale, shift = rng.uniform(0.1, 10), rng.uniform(-10, 10)
    a, b = first_order_features(grid), first_order_features(scale * grid + shift)
    for key in ("Mean", "Minimum", "Maximum", "Median", "P10", "P90"):
        assert abs(b[key] - (scale * a[key] + shift)) <= 1e-9 * max(1.0, abs(b[key]))
    for key in ("Skewness", "Kurtosis"):
        assert abs(a[key] - b[key]) <= 1e-7 * max(1.0, abs(a[key]))


@CASES
@given(seeds, st.integers(2, 9), st.integers(2, 9), st.sampled_from([HAAR, COIF1]))
def test_filter_bank_is_linear(seed, h, w, kernel):
    rng = np.random.default_rng(seed)
    x, y = rng.random((h, w)), rng.random((h, w))
    a, b = rng.normal(size=2)
    fx, fy, fz = filter_bank(x, kernel), filter_bank(y, kernel), filter_bank(a * x + b * y, kernel)
    for u, v, z in zip(fx, fy, fz):
        assert np.allclose(z.pixels, a * u.pixels + b * v.pixels, rtol=0, atol=1e-9)


@CASES
@given(seeds, st.integers(1, 6), st.integers(3, 30), st.integers(3, 30))
def test_frechet_nonnegative_and_symmetric(seed, m, n1, n2):
    rng = np.random.default_rng(seed)
    a = fit_gaussian(rng.normal(size=(n1, m)) * rng.uniform(0.1, 3, m))
    b = fit_gaussian(rng.normal(size=(n2, m)) + rng.normal(size=m))
    d_ab, d_ba = frechet_distance(a, b), frechet_distance(b, a)
    assert d_ab >= 0
    assert abs(d_ab - d_ba) <= 1e-8 * max(1.0, d_ab)
    assert frechet_distance(a, a) == 0.0


@CASES
@given(seeds, st.integers(2, 6), st.integers(5, 40), st.floats(0, 100))
def test_detect_labels_survive_joint_affine_maps(seed, m, n, percentile):
    rng = np.random.default_rng(seed)
    ref, test = rng.normal(size=(n, m)), rng.normal(size=(n, m)) * 1.5
    scale, shift = _affine(rng, m)
    r0 = detect(test, ref, percentile)
    r1 = detect(test * scale + shift, ref * scale + shift, percentile)
    assert r0.labels == r1.labels
    assert -1.0 <= r0.nfrd_group <= 1.0


@CASES
@given(seeds, st.integers(2, 8), st.integers(3, 20))
def test_rankings_survive_joint_affine_maps(seed, m, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, m))
    b = a + rng.normal(size=(n, m)) * rng.uniform(0, 2, m) + rng.normal(size=m)
    scale, shift = _affine(rng, m)
    r0, r1 = delta_report(_fm(a), _fm(b)), delta_report(_fm(a * scale + shift), _fm(b * scale + shift))
    assert np.array_equal(r0.order, r1.order) and r0.k50 == r1.k50
    assert 1 <= r0.k50 <= m
    assert np.all(np.diff(r0.coverage) >= 0) and r0.coverage[-1] == 1.0
    p0, p1 = rank_image_changes(_fm(a), _fm(b)), rank_image_changes(_fm(a * scale + shift), _fm(b * scale + shift))
    assert [i for i, _ in p0.pairs] == [i for i, _ in p1.pairs]


@CASES
@given(seeds, st.integers(2, 8), st.integers(3, 20))
def test_joint_delta_is_antisymmetric(seed, m, n):
    rng = np.random.default_rng(seed)
    a, b = _fm(rng.normal(size=(n, m))), _fm(rng.normal(size=(n, m)) + 1, prefix="j")
    ab, ba = delta_report(a, b, "joint"), delta_report(b, a, "joint")
    assert np.allclose(ab.delta, -ba.delta, rtol=0, atol=1e-12)


@CASES
@given(seeds, st.sampled_from(["noise", "blur", "swap", "bias"]), st.floats(0, 100), st.integers(0, 2**64 - 1))
def test_corruption_is_a_function_of_image_spec_and_seed(img_seed, kind, p, seed):
    px = np.random.default_rng(img_seed).random((20, 17))
    img = Image(f"im{img_seed}", px)
    spec = CorruptionSpec(kind, p, seed)
    out1, out2 = apply(img, spec), apply(Image(img.id, px.copy()), spec)
    assert np.array_equal(out1.pixels, out2.pixels)
    assert out1.pixels.shape == px.shape and out1.pixels.min() >= 0 and out1.pixels.max() <= 1
    if kind == "swap":
        assert np.array_equal(np.sort(out1.pixels, axis=None), np.sort(px, axis=None))
