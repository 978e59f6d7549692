"""Per-word projection-profile features.

For each word the horizontal profile (ink per row, over the word's own rows)
yields the word height, the two largest values and their positions, the mean
between those positions and the value just below the earlier peak; the
vertical profile yields the number of full-height strokes.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from ._validation import check_binary_image
from .errors import DegenerateWord, EmptyWord, InvalidParameter
from .profiles import horizontal_profile, nonzero_runs, vertical_profile
from .segmenter import WordBox

FEATURE_NAMES = ("wh", "vs", "l1", "l2", "lm", "lp", "ratio", "aspect_ratio")


@dataclass(frozen=True)
class PeakFeatures:
    l1: int
    l1_pos: int
    l2: int
    l2_pos: int
    lm: float
    lp: int
    ratio: float


@dataclass(frozen=True)
class WordFeatures:
    wh: int
    vs: int
    l1: int
    l2: int
    l1_pos: int
    l2_pos: int
    lm: float
    lp: int | None
    ratio: float | None
    aspect_ratio: float

    def to_dict(self):
        """JSON form; only the externally documented fields, ``None`` as null."""
        d = asdict(self)
        return {name: d[name] for name in FEATURE_NAMES}

    def as_row(self):
        """Numeric row in ``FEATURE_NAMES`` order, NaN for undefined values."""
        return [np.nan if v is None else float(v) for v in
                (getattr(self, name) for name in FEATURE_NAMES)]


def _check_tau(tau):
    if not 0 < tau <= 1:
        raise InvalidParameter(f"tau must lie in (0, 1], got {tau!r}")


def _ink_rows(img, word):
    counts = horizontal_profile(img, word.rect).counts
    inked = [i for i, c in enumerate(counts) if c]
    if not inked:
        raise EmptyWord(f"word box {word.rect} contains no ink")
    return counts, inked[0], inked[-1]


def word_height(word, img):
    """Row span of the word's non-zero horizontal profile."""
    _, first, last = _ink_rows(check_binary_image(img), word)
    return last - first + 1


def stroke_count(column_counts, height, tau=1.0):
    """Number of maximal column runs whose counts all reach ``ceil(tau*height)``."""
    _check_tau(tau)
    need = math.ceil(tau * height - 1e-9)
    qualifying = [1 if c >= need else 0 for c in column_counts]
    return len(nonzero_runs(qualifying))


def vertical_strokes(word, img, tau=1.0):
    """Full-height vertical strokes in the word; adjacent columns merge."""
    img = check_binary_image(img)
    _, first, last = _ink_rows(img, word)
    rows = (word.x_left, word.y_top + first, word.x_right, word.y_top + last)
    return stroke_count(vertical_profile(img, rows).counts, last - first + 1, tau)


def peak_features(profile):
    """Peak statistics of a word's (tightened) horizontal profile.

    The largest value is taken at its earliest row, the second largest is the
    maximum of the remaining rows (again earliest). ``lm`` averages the
    profile between both positions inclusive, ``lp`` is the value one row
    after the earlier of the two.
    """
    counts = [int(c) for c in profile]
    if len(counts) < 2:
        raise DegenerateWord(f"need at least two rows, got {len(counts)}")
    l1_pos = int(np.argmax(counts))
    rest = counts[:l1_pos] + [-1] + counts[l1_pos + 1:]
    l2_pos = int(np.argmax(rest))
    lo, hi = min(l1_pos, l2_pos), max(l1_pos, l2_pos)
    span = counts[lo:hi + 1]
    lm = sum(span) / len(span)
    if lm <= 0:
        raise DegenerateWord("profile has no ink between its peaks")
    lp = counts[lo + 1]
    return PeakFeatures(counts[l1_pos], l1_pos, counts[l2_pos], l2_pos, lm, lp, lp / lm)


def aspect_ratio(word):
    """Box height divided by box width (a diagnostic, not a decision input)."""
    return word.height / word.width


def extract_features(img, word, tau=1.0):
    """All features of one word box on a binary page."""
    img = check_binary_image(img)
    counts, first, last = _ink_rows(img, word)
    wh = last - first + 1
    rows = (word.x_left, word.y_top + first, word.x_right, word.y_top + last)
    vs = stroke_count(vertical_profile(img, rows).counts, wh, tau)
    tight = counts[first:last + 1]
    aspect = wh / word.width
    try:
        pk = peak_features(tight)
    except DegenerateWord:
        top = max(tight)
        return WordFeatures(wh, vs, top, top, 0, 0, float(top), None, None, aspect)
    return WordFeatures(wh, vs, pk.l1, pk.l2, pk.l1_pos, pk.l2_pos, pk.lm, pk.lp,
                        pk.ratio, aspect)


def crop_features(word_img, tau=1.0):
    """Features of a standalone word raster (the whole array is the word box)."""
    word_img = check_binary_image(word_img)
    h, w = word_img.shape
    return extract_features(word_img, WordBox(0, 0, w - 1, 0, h - 1, 0), tau)
