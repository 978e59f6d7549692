from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from scriptid.errors import DegenerateWord, EmptyWord, InvalidParameter
from scriptid.features import (
    FEATURE_NAMES,
    crop_features,
    extract_features,
    peak_features,
    stroke_count,
    vertical_strokes,
    word_height,
)
from scriptid.segmenter import WordBox

from oracles import peak_trace


def _word_from_rows(counts, width=None):
    """Left-aligned rows with the given ink counts."""
    width = width or max(counts)
    img = np.zeros((len(counts), width), dtype=np.uint8)
    for y, c in enumerate(counts):
        img[y, :c] = 1
    return img


def test_worked_trace():
    pk = peak_features([1, 5, 2, 4, 3])
    assert (pk.l1, pk.l1_pos, pk.l2, pk.l2_pos) == (5, 1, 4, 3)
    assert pk.lm == pytest.approx(11 / 3, abs=1e-12)
    assert pk.lp == 2
    assert abs(pk.ratio - 6 / 11) < 1e-9
    assert peak_trace([1, 5, 2, 4, 3])[-1] == Fraction(6, 11)


def test_tied_peaks_take_earliest_rows():
    pk = peak_features([7, 7])
    assert (pk.l1_pos, pk.l2_pos, pk.l1, pk.l2) == (0, 1, 7, 7)
    assert pk.lm == 7 and pk.lp == 7 and pk.ratio == 1.0


def test_l2_can_precede_l1():
    pk = peak_features([4, 1, 6])
    assert (pk.l1_pos, pk.l2_pos) == (2, 0)
    assert pk.lp == 1
    assert pk.lm == pytest.approx(11 / 3)


def test_single_row_is_degenerate():
    with pytest.raises(DegenerateWord):
        peak_features([4])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 40), min_size=2, max_size=30))
def test_peaks_match_oracle(profile):
    assume(max(profile) > 0)
    l1, i1, l2, i2, lm, lp, ratio = peak_trace(profile)
    pk = peak_features(profile)
    assert (pk.l1, pk.l1_pos, pk.l2, pk.l2_pos, pk.lp) == (l1, i1, l2, i2, lp)
    assert abs(pk.lm - float(lm)) < 1e-9
    assert abs(pk.ratio - float(ratio)) < 1e-9


def test_word_height_uses_ink_rows():
    img = np.zeros((5, 3), dtype=np.uint8)
    img[1, 0] = img[2, :] = img[3, :2] = 1
    box = WordBox(0, 0, 2, 0, 4, 0)
    assert word_height(box, img) == 3


def test_empty_word_box():
    with pytest.raises(EmptyWord):
        word_height(WordBox(0, 0, 2, 0, 2, 0), np.zeros((3, 3), dtype=np.uint8))


def test_stroke_count_merges_adjacent_columns():
    assert stroke_count([5, 0, 5, 5, 0, 2], 5) == 2
    assert stroke_count([5, 5, 5], 5) == 1
    assert stroke_count([4, 4], 5) == 0


def test_stroke_count_tau():
    assert stroke_count([5, 4, 0, 3], 5, tau=0.8) == 1
    assert stroke_count([5, 0, 4, 0, 3], 5, tau=0.6) == 3
    with pytest.raises(InvalidParameter):
        stroke_count([1], 1, tau=0)
    with pytest.raises(InvalidParameter):
        stroke_count([1], 1, tau=1.5)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=1, max_size=20), st.integers(1, 12),
       st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_lower_tau_never_finds_fewer_columns(cols, h, t1, t2):
    lo, hi = sorted((t1, t2))
    need = lambda t: sum(1 for c in cols if c >= np.ceil(t * h - 1e-9))
    assert need(lo) >= need(hi)
    assert stroke_count(cols, h, hi) <= len(cols)


def test_vertical_strokes_on_word():
    img = np.zeros((4, 6), dtype=np.uint8)
    img[:, 0] = img[:, 2] = img[:, 3] = 1
    img[0, :] = 1
    assert vertical_strokes(WordBox(0, 0, 5, 0, 3, 0), img) == 2


def test_extract_features_fields():
    img = _word_from_rows([1, 5, 2, 4, 3])
    f = crop_features(img)
    assert (f.wh, f.l1, f.l2, f.lp) == (5, 5, 4, 2)
    assert abs(f.ratio - 6 / 11) < 1e-9
    assert f.vs == 1  # only column 0 is inked on every row
    assert f.aspect_ratio == 1.0
    assert set(f.to_dict()) == set(FEATURE_NAMES)


def test_single_row_word_has_no_ratio():
    f = crop_features(np.ones((1, 6), dtype=np.uint8))
    assert f.wh == 1 and f.lp is None and f.ratio is None
    assert f.to_dict()["ratio"] is None
    assert np.isnan(f.as_row()[FEATURE_NAMES.index("ratio")])


profiles = st.lists(st.integers(0, 8), min_size=2, max_size=12).filter(
    lambda p: p[0] > 0 and p[-1] > 0)


@settings(max_examples=100, deadline=None)
@given(profiles, st.integers(0, 5), st.integers(0, 5), st.integers(0, 6))
def test_ratio_translation_and_padding_invariant(counts, dy, dx, pad):
    word = _word_from_rows(counts, width=8)
    base = crop_features(word)
    page = np.zeros((word.shape[0] + dy + pad, word.shape[1] + dx + pad), dtype=np.uint8)
    page[dy:dy + word.shape[0], dx:dx + word.shape[1]] = word
    box = WordBox(0, 0, page.shape[1] - 1, 0, page.shape[0] - 1, 0)
    moved = extract_features(page, box)
    assert moved.ratio == base.ratio
    assert moved.wh == base.wh


@settings(max_examples=60, deadline=None)
@given(profiles, st.integers(2, 4))
def test_ratio_invariant_under_integer_scaling(counts, k):
    word = _word_from_rows(counts, width=8)
    scaled = np.kron(word, np.ones((1, k), dtype=np.uint8))
    assert crop_features(scaled).ratio == pytest.approx(crop_features(word).ratio, abs=1e-12)
