"""Line and word segmentation at zero-valleys of projection profiles."""

import math
from dataclasses import asdict, dataclass, field

from ._validation import check_binary_image
from .errors import InvalidParameter
from .profiles import horizontal_profile, nonzero_runs, vertical_profile


@dataclass(frozen=True)
class LineBand:
    y_top: int
    y_bottom: int  # inclusive
    index: int

    @property
    def height(self):
        return self.y_bottom - self.y_top + 1


@dataclass(frozen=True)
class WordBox:
    line_index: int
    x_left: int
    x_right: int  # inclusive
    y_top: int
    y_bottom: int  # inclusive
    index_in_line: int

    @property
    def width(self):
        return self.x_right - self.x_left + 1

    @property
    def height(self):
        return self.y_bottom - self.y_top + 1

    @property
    def rect(self):
        """Inclusive ``(x0, y0, x1, y1)``."""
        return (self.x_left, self.y_top, self.x_right, self.y_bottom)

    def to_dict(self):
        x0, y0, x1, y1 = self.rect
        return {"box": {"x0": x0, "y0": y0, "x1": x1, "y1": y1},
                "line": self.line_index, "index": self.index_in_line}


def default_min_gap(line_height):
    """Smallest zero-run (in columns) that separates two words on a line."""
    return max(2, int(math.floor(0.2 * line_height + 0.5)))


@dataclass(frozen=True)
class SegmenterConfig:
    min_line_height: int = 3
    min_word_width: int = 2
    min_gap: int | None = None  # None: derived from each line's height

    def __post_init__(self):
        if int(self.min_line_height) < 1:
            raise InvalidParameter("min_line_height must be >= 1")
        if int(self.min_word_width) < 1:
            raise InvalidParameter("min_word_width must be >= 1")
        if self.min_gap is not None and int(self.min_gap) < 1:
            raise InvalidParameter("min_gap must be >= 1")

    def gap_for(self, line):
        return default_min_gap(line.height) if self.min_gap is None else int(self.min_gap)


@dataclass
class PageSegmentation:
    """Everything the segmenter found, including what it threw away."""

    lines: list = field(default_factory=list)
    words: list = field(default_factory=list)
    discarded_lines: list = field(default_factory=list)
    discarded_words: list = field(default_factory=list)

    def to_dict(self):
        return {
            "lines": [asdict(b) for b in self.lines],
            "words": [w.to_dict() for w in self.words],
            "discarded_lines": [asdict(b) for b in self.discarded_lines],
            "discarded_words": [w.to_dict() for w in self.discarded_words],
        }


def _split_lines(img, min_line_height):
    kept, dropped = [], []
    for top, bottom in nonzero_runs(horizontal_profile(img).counts):
        if bottom - top + 1 >= min_line_height:
            kept.append(LineBand(top, bottom, len(kept)))
        else:
            dropped.append(LineBand(top, bottom, -1))
    return kept, dropped


def segment_lines(img, min_line_height=3):
    """Bands of consecutive inked rows, top to bottom; short bands are noise."""
    if int(min_line_height) < 1:
        raise InvalidParameter("min_line_height must be >= 1")
    img = check_binary_image(img)
    return _split_lines(img, int(min_line_height))[0]


def _tighten(img, line, x_left, x_right):
    rows = horizontal_profile(img, (x_left, line.y_top, x_right, line.y_bottom)).counts
    inked = [i for i, c in enumerate(rows) if c]
    return line.y_top + inked[0], line.y_top + inked[-1]


def _split_words(img, line, min_gap, min_word_width):
    width = img.shape[1]
    cols = vertical_profile(img, (0, line.y_top, width - 1, line.y_bottom)).counts
    merged = []
    for start, end in nonzero_runs(cols):
        if merged and start - merged[-1][1] - 1 < min_gap:
            merged[-1][1] = end
        else:
            merged.append([start, end])
    kept, dropped = [], []
    for x_left, x_right in merged:
        y_top, y_bottom = _tighten(img, line, x_left, x_right)
        if x_right - x_left + 1 >= min_word_width:
            kept.append(WordBox(line.index, x_left, x_right, y_top, y_bottom, len(kept)))
        else:
            dropped.append(WordBox(line.index, x_left, x_right, y_top, y_bottom, -1))
    return kept, dropped


def segment_words(img, line, min_gap=None, min_word_width=2):
    """Words of one text line, left to right.

    Zero-runs of the line's vertical profile at least ``min_gap`` columns wide
    separate words; shorter ones are inter-character space. Each box's rows
    are tightened to the word's own ink.
    """
    img = check_binary_image(img)
    if not 0 <= line.y_top <= line.y_bottom < img.shape[0]:
        raise InvalidParameter(f"line {line} lies outside the image")
    gap = default_min_gap(line.height) if min_gap is None else int(min_gap)
    if gap < 1 or int(min_word_width) < 1:
        raise InvalidParameter("min_gap and min_word_width must be >= 1")
    return _split_words(img, line, gap, int(min_word_width))[0]


def analyze_page(img, cfg=None):
    """Full segmentation record of a page, retained and discarded regions."""
    cfg = cfg or SegmenterConfig()
    img = check_binary_image(img)
    seg = PageSegmentation()
    seg.lines, seg.discarded_lines = _split_lines(img, int(cfg.min_line_height))
    for line in seg.lines:
        kept, dropped = _split_words(img, line, cfg.gap_for(line), int(cfg.min_word_width))
        seg.words.extend(kept)
        seg.discarded_words.extend(dropped)
    return seg


def segment_page(img, cfg=None):
    """All word boxes of a page in reading order."""
    return analyze_page(img, cfg).words
