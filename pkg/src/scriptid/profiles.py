"""Horizontal and vertical projection profiles of binary image regions."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_binary_image, check_region

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True)
class ProjectionProfile:
    """Ink counts per row (horizontal) or per column (vertical) of ``region``.

    ``region`` is the inclusive ``(x0, y0, x1, y1)`` rectangle the counts were
    taken from, so callers can map profile offsets back to page coordinates.
    """

    axis: str
    counts: tuple
    region: tuple

    def __len__(self):
        return len(self.counts)

    def __getitem__(self, i):
        return self.counts[i]

    def __iter__(self):
        return iter(self.counts)

    def as_array(self):
        return np.asarray(self.counts, dtype=np.int64)

    @property
    def total(self):
        return sum(self.counts)

    def to_dict(self):
        x0, y0, x1, y1 = self.region
        return {
            "axis": self.axis,
            "region": {"x0": x0, "y0": y0, "x1": x1, "y1": y1},
            "counts": list(self.counts),
        }


def _crop(img, region):
    img = check_binary_image(img)
    x0, y0, x1, y1 = check_region(img.shape, region)
    return img[y0:y1 + 1, x0:x1 + 1], (x0, y0, x1, y1)


def horizontal_profile(img, region=None):
    """Number of ink pixels in each row of ``region`` (whole image by default)."""
    sub, region = _crop(img, region)
    counts = sub.sum(axis=1, dtype=np.int64)
    return ProjectionProfile(HORIZONTAL, tuple(int(c) for c in counts), region)


def vertical_profile(img, region=None):
    """Number of ink pixels in each column of ``region``."""
    sub, region = _crop(img, region)
    counts = sub.sum(axis=0, dtype=np.int64)
    return ProjectionProfile(VERTICAL, tuple(int(c) for c in counts), region)


def nonzero_runs(counts):
    """Maximal ``(start, end)`` inclusive index runs where ``counts > 0``."""
    arr = np.asarray(counts) > 0
    if not arr.any():
        return []
    edges = np.diff(np.concatenate(([0], arr.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    return [(int(s), int(e)) for s, e in zip(starts, ends)]
