import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from scriptid.errors import RegionOutOfBounds
from scriptid.profiles import horizontal_profile, nonzero_runs, vertical_profile

from helpers import random_binary
from oracles import column_counts, row_counts

GRID = np.array([[1, 0, 1], [0, 0, 0], [1, 1, 1]], dtype=np.uint8)

binary_images = arrays(np.uint8, st.tuples(st.integers(1, 15), st.integers(1, 15)),
                       elements=st.integers(0, 1))


def test_horizontal_grid():
    p = horizontal_profile(GRID)
    assert p.counts == (2, 0, 3)
    assert p.axis == "horizontal"
    assert p.region == (0, 0, 2, 2)


def test_vertical_grid():
    assert vertical_profile(GRID).counts == (2, 1, 2)


def test_zero_image():
    z = np.zeros((4, 6), dtype=np.uint8)
    assert horizontal_profile(z).counts == (0,) * 4
    assert vertical_profile(z).counts == (0,) * 6


def test_single_column():
    img = np.zeros((5, 5), dtype=np.uint8)
    img[:, 3] = 1
    assert vertical_profile(img).counts == (0, 0, 0, 5, 0)


def test_region_restricts_counts():
    p = horizontal_profile(GRID, (1, 0, 2, 2))
    assert p.counts == (1, 0, 2)
    assert vertical_profile(GRID, (0, 1, 2, 2)).counts == (1, 1, 1)


@pytest.mark.parametrize("region", [(0, 0, 3, 2), (2, 0, 1, 2), (-1, 0, 1, 1), (0, 0, 2)])
def test_region_out_of_bounds(region):
    with pytest.raises(RegionOutOfBounds):
        horizontal_profile(GRID, region)


def test_random_against_counter(rng):
    for _ in range(20):
        img = random_binary(rng, (64, 64))
        assert list(horizontal_profile(img).counts) == row_counts(img)
        assert list(vertical_profile(img).counts) == column_counts(img)


@settings(max_examples=100, deadline=None)
@given(binary_images, st.data())
def test_sum_identity_and_bounds(img, data):
    h, w = img.shape
    x0 = data.draw(st.integers(0, w - 1))
    x1 = data.draw(st.integers(x0, w - 1))
    y0 = data.draw(st.integers(0, h - 1))
    y1 = data.draw(st.integers(y0, h - 1))
    hp = horizontal_profile(img, (x0, y0, x1, y1))
    vp = vertical_profile(img, (x0, y0, x1, y1))
    assert len(hp) == y1 - y0 + 1 and len(vp) == x1 - x0 + 1
    assert hp.total == vp.total == int(img[y0:y1 + 1, x0:x1 + 1].sum())
    assert max(hp.counts) <= x1 - x0 + 1
    assert max(vp.counts) <= y1 - y0 + 1


@settings(max_examples=100, deadline=None)
@given(binary_images)
def test_transpose_duality(img):
    assert horizontal_profile(img).counts == vertical_profile(img.T.copy()).counts


def test_all_ones_region(rng):
    img = np.ones((7, 4), dtype=np.uint8)
    assert horizontal_profile(img).counts == (4,) * 7
    assert vertical_profile(img).counts == (7,) * 4


def test_nonzero_runs():
    assert nonzero_runs([0, 1, 2, 0, 0, 3]) == [(1, 2), (5, 5)]
    assert nonzero_runs([0, 0]) == []
    assert nonzero_runs([4]) == [(0, 0)]
