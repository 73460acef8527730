import numpy as np
import pytest

from frd.radiomics import (
    discretize,
    first_order_features,
    glcm_features,
    gldm_features,
    glrlm_features,
    glszm_features,
    ngtdm_features,
)

import oracles

SHAPES = [(8, 8), (7, 11), (1, 9), (9, 1), (2, 2), (5, 3)]


def _grids():
    rng = np.random.default_rng(7)
    for k, shape in enumerate(SHAPES):
        yield rng.random(shape)
        # few levels so that runs, zones and dependences are long
        yield np.floor(rng.random(shape) * 3) / 2
    yield np.full((6, 6), 0.3)
    yield np.tile(np.array([[0.0, 1.0]]), (5, 3))


GRIDS = list(_grids())


def _close(got, want, rtol=1e-9, atol=1e-9):
    assert set(got) == set(want)
    for k in want:
        assert got[k] == pytest.approx(want[k], rel=rtol, abs=atol), k


@pytest.mark.parametrize("grid", GRIDS)
@pytest.mark.parametrize("bins", [32, 4])
def test_discretize_matches_oracle(grid, bins):
    assert discretize(grid, bins).levels.tolist() == oracles.discretize(grid, bins)


@pytest.mark.parametrize("grid", GRIDS)
@pytest.mark.parametrize("bins", [32, 5])
def test_first_order_matches_oracle(grid, bins):
    _close(first_order_features(grid, bins), oracles.first_order(grid, bins))


@pytest.mark.parametrize("grid", GRIDS)
@pytest.mark.parametrize("bins", [32, 6])
def test_texture_families_match_oracle(grid, bins):
    d = discretize(grid, bins)
    lv = oracles.discretize(grid, bins)
    _close(glrlm_features(d), oracles.glrlm(lv))
    _close(glszm_features(d), oracles.glszm(lv))
    _close(gldm_features(d), oracles.gldm(lv))
    _close(ngtdm_features(d), oracles.ngtdm(lv, bins))
    if grid.size > 1:
        _close(glcm_features(d), oracles.glcm(lv, bins), atol=1e-8)


def test_constant_grid_fallbacks():
    d = discretize(np.full((5, 5), 0.4), 32)
    g = glcm_features(d)
    assert g["Correlation"] == 1.0
    assert g["MCC"] == 1.0
    assert ngtdm_features(d)["Coarseness"] == 1e6
    fo = first_order_features(np.full((5, 5), 0.4))
    assert fo["Skewness"] == 0.0 and fo["Kurtosis"] == 0.0 and fo["Variance"] == 0.0
    assert glszm_features(d)["SmallAreaEmphasis"] == pytest.approx(1 / 25**2)


def test_known_runs_on_stripes():
    # vertical stripes, 4 x 4: horizontal runs of 1, vertical runs of 4
    grid = np.tile(np.array([0.0, 1.0, 0.0, 1.0]), (4, 1))
    d = discretize(grid, 2)
    f = glrlm_features(d)
    # directions: 0 deg -> 16 runs of 1; 90 deg -> 4 runs of 4; diagonals -> all runs length 1
    sre = (1 + 1 / 16 + 1 + 1) / 4
    assert f["ShortRunEmphasis"] == pytest.approx(sre)
    z = glszm_features(d)
    # 8-connectivity does not join stripes two columns apart
    assert z["ZonePercentage"] == pytest.approx(4 / 16)
