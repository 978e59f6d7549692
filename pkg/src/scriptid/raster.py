"""Page rasters: file I/O, binarization, binary morphology and deskew.

Gray images are 2-D ``uint8`` arrays (0 black, 255 white). Binary images are
2-D ``uint8`` arrays where 1 marks ink and 0 marks background.
"""

import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError

from ._validation import check_binary_image, check_gray_image
from .errors import CorruptImage, InvalidParameter, UnsupportedFormat

logger = logging.getLogger(__name__)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
PGM_MAGICS = (b"P2", b"P5")

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------

def _sniff(path):
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head.startswith(PNG_MAGIC):
        return "PNG"
    if head[:2] in PGM_MAGICS:
        return "PGM"
    raise UnsupportedFormat(f"{path}: not a PNG or PGM (P2/P5) file")


def rgb_to_gray(rgb):
    """Rec.601 luma, rounded half up to the nearest integer."""
    rgb = np.asarray(rgb, dtype=np.float64)
    luma = rgb[..., 0] * LUMA_WEIGHTS[0] + rgb[..., 1] * LUMA_WEIGHTS[1] + rgb[..., 2] * LUMA_WEIGHTS[2]
    return np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)


def load_image(path):
    """Read a PNG (8-bit gray or RGB) or PGM (P2/P5) file as a gray image.

    Raises ``FileNotFoundError`` for a missing path, ``UnsupportedFormat`` for
    any other file type or pixel layout and ``CorruptImage`` when decoding fails.
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"no such image file: {path}")
    kind = _sniff(path)
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            if mode == "1":
                im = im.convert("L")
                mode = "L"
            arr = np.asarray(im)
    except UnidentifiedImageError as exc:
        raise CorruptImage(f"{path}: cannot decode {kind} data ({exc})") from exc
    except (OSError, ValueError, SyntaxError) as exc:
        raise CorruptImage(f"{path}: truncated or malformed {kind} data ({exc})") from exc

    if mode == "L":
        gray = arr.astype(np.uint8, copy=True)
    elif mode == "LA":
        gray = arr[..., 0].astype(np.uint8, copy=True)
    elif mode in ("RGB", "RGBA"):
        gray = rgb_to_gray(arr[..., :3])
    else:
        raise UnsupportedFormat(f"{path}: pixel mode {mode!r} is not 8-bit gray or RGB")
    if gray.ndim != 2 or gray.size == 0:
        raise CorruptImage(f"{path}: decoded to an empty raster")
    return gray


def binary_to_gray(binary):
    """Render a binary image as gray: ink 0 (black), background 255."""
    binary = check_binary_image(binary)
    return np.where(binary == 1, 0, 255).astype(np.uint8)


def save_png(img, path):
    """Write a gray ``uint8`` array or an ``(H, W, 3)`` RGB array as PNG."""
    arr = np.asarray(img)
    if arr.ndim == 2:
        im = Image.fromarray(check_gray_image(arr), mode="L")
    elif arr.ndim == 3 and arr.shape[2] == 3:
        im = Image.fromarray(arr.astype(np.uint8), mode="RGB")
    else:
        raise InvalidParameter(f"cannot save array of shape {arr.shape} as PNG")
    im.save(os.fspath(path), format="PNG")


def save_pgm(img, path):
    """Write a gray image as binary PGM (P5)."""
    gray = check_gray_image(img)
    h, w = gray.shape
    with open(os.fspath(path), "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(gray.tobytes())


# ---------------------------------------------------------------------------
# Binarization
# ---------------------------------------------------------------------------

def gray_histogram(img, bins=256):
    gray = check_gray_image(img)
    return np.bincount(gray.ravel(), minlength=bins)


def otsu_threshold(hist):
    """Threshold ``T`` maximising between-class variance of ``hist``.

    Classes are ``intensity <= T`` and ``intensity > T``. Ties resolve to the
    smallest ``T``. Returns ``None`` when no split separates two non-empty
    classes (a single occupied bin).
    """
    hist = np.asarray(hist, dtype=np.int64)
    levels = np.arange(hist.size, dtype=np.int64)
    n0 = np.cumsum(hist)
    s0 = np.cumsum(hist * levels)
    n, s = int(n0[-1]), int(s0[-1])
    n1 = n - n0
    valid = (n0 > 0) & (n1 > 0)
    if not valid.any():
        return None

    # sigma_b^2 * n^2 == (s0*n - s*n0)^2 / (n0*n1)
    diff = s0.astype(np.float64) * n - float(s) * n0
    denom = np.where(valid, n0.astype(np.float64) * n1, 1.0)
    score = np.where(valid, diff * diff / denom, -1.0)
    best = score.max()
    # float scores only shortlist candidates; exact integers settle ties
    candidates = np.flatnonzero(valid & (score >= best * (1.0 - 1e-9)))
    best_t, best_num, best_den = None, 0, 1
    for t in candidates:
        d = int(s0[t]) * n - s * int(n0[t])
        num, den = d * d, int(n0[t]) * int(n1[t])
        if best_t is None or num * best_den > best_num * den:
            best_t, best_num, best_den = int(t), num, den
    if best_num == 0:
        return None
    return best_t


def binarize(img, method="otsu", threshold=None):
    """Convert a gray page to ink (1) / background (0).

    Pixels with intensity ``<= T`` become ink. ``method="fixed"`` uses
    ``threshold`` as ``T``; ``method="otsu"`` computes it from the histogram.
    A page with a single intensity is returned as all background.
    """
    gray = check_gray_image(img)
    if method == "fixed":
        if threshold is None or not 0 <= int(threshold) <= 255:
            raise InvalidParameter(f"fixed threshold must be in [0, 255], got {threshold!r}")
        t = int(threshold)
    elif method == "otsu":
        t = otsu_threshold(gray_histogram(gray))
        if t is None:
            return np.zeros_like(gray, dtype=np.uint8)
    else:
        raise InvalidParameter(f"unknown binarization method {method!r}")
    return (gray <= t).astype(np.uint8)


# ---------------------------------------------------------------------------
# Morphology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructuringElement:
    """Binary mask with odd sides, anchored at its centre."""

    mask: np.ndarray = field(default_factory=lambda: np.ones((3, 3), dtype=np.uint8))

    def __post_init__(self):
        mask = np.asarray(self.mask)
        if mask.ndim != 2:
            raise InvalidParameter("structuring element mask must be 2-D")
        h, w = mask.shape
        if h % 2 == 0 or w % 2 == 0:
            raise InvalidParameter(f"structuring element sides must be odd, got {w}x{h}")
        mask = check_binary_image(mask)
        if not mask.any():
            raise InvalidParameter("structuring element mask must contain at least one 1")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def rect(cls, width=3, height=None):
        height = width if height is None else height
        return cls(np.ones((height, width), dtype=np.uint8))

    @property
    def width(self):
        return self.mask.shape[1]

    @property
    def height(self):
        return self.mask.shape[0]

    @property
    def anchor(self):
        """``(x, y)`` of the centre pixel."""
        return ((self.width - 1) // 2, (self.height - 1) // 2)

    def offsets(self):
        """``(dy, dx)`` displacements of the mask's 1-pixels from the anchor."""
        ax, ay = self.anchor
        ys, xs = np.nonzero(self.mask)
        return [(int(y) - ay, int(x) - ax) for y, x in zip(ys, xs)]

    def __eq__(self, other):
        return isinstance(other, StructuringElement) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash((self.mask.shape, self.mask.tobytes()))


DEFAULT_SE = StructuringElement.rect(3)


def _shifted_views(img, se):
    """Yield, per SE offset (dy, dx), the array ``v[y, x] = img[y + dy, x + dx]``
    with zero padding outside the image."""
    ax, ay = se.anchor
    ry, rx = se.height - 1 - ay, se.width - 1 - ax
    pad_y, pad_x = max(ay, ry), max(ax, rx)
    padded = np.pad(img, ((pad_y, pad_y), (pad_x, pad_x)))
    h, w = img.shape
    for dy, dx in se.offsets():
        yield dy, dx, padded[pad_y + dy: pad_y + dy + h, pad_x + dx: pad_x + dx + w]


def dilate(img, se=DEFAULT_SE):
    """Binary dilation: ``out[p] = OR_b img[p - b]`` over SE offsets ``b``."""
    img = check_binary_image(img)
    out = np.zeros_like(img)
    reflected = StructuringElement(se.mask[::-1, ::-1])
    for _, _, view in _shifted_views(img, reflected):
        out |= view
    return out


def erode(img, se=DEFAULT_SE):
    """Binary erosion: ``out[p] = AND_b img[p + b]``; outside pixels count as 0."""
    img = check_binary_image(img)
    out = np.ones_like(img)
    for _, _, view in _shifted_views(img, se):
        out &= view
    return out


def close(img, se=DEFAULT_SE):
    """Morphological closing (dilate, then erode) to bridge broken glyphs."""
    return erode(dilate(img, se), se)


# ---------------------------------------------------------------------------
# Deskew (projection-variance search; the source method is unspecified)
# ---------------------------------------------------------------------------

def rotate_nearest(img, angle):
    """Rotate a binary image by ``angle`` degrees counter-clockwise about its
    centre, keeping the canvas size. Nearest-neighbour sampling, background fill."""
    img = check_binary_image(img)
    if angle == 0:
        return img.copy()
    h, w = img.shape
    theta = math.radians(angle)
    c, s = math.cos(theta), math.sin(theta)
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    dy, dx = yy - cy, xx - cx
    # inverse mapping with y pointing down
    src_x = np.floor(c * dx - s * dy + cx + 0.5).astype(np.int64)
    src_y = np.floor(s * dx + c * dy + cy + 0.5).astype(np.int64)
    inside = (src_x >= 0) & (src_x < w) & (src_y >= 0) & (src_y < h)
    out = np.zeros_like(img)
    out[inside] = img[src_y[inside], src_x[inside]]
    return out


def _profile_spread(img):
    # n * sum(x^2) - (sum x)^2 is n^2 * variance; exact in integers
    rows = img.sum(axis=1, dtype=np.int64)
    n = rows.size
    total = int(rows.sum())
    return n * int((rows * rows).sum()) - total * total


def deskew(img, max_angle=5.0, step=0.5):
    """Find the rotation in ``[-max_angle, max_angle]`` that maximises the
    variance of the horizontal projection profile and apply it.

    Returns ``(rotated, angle)``. Ties prefer the smallest ``|angle|``, then
    the negative candidate.
    """
    if not step > 0:
        raise InvalidParameter(f"deskew step must be > 0, got {step!r}")
    if not max_angle >= 0:
        raise InvalidParameter(f"deskew max_angle must be >= 0, got {max_angle!r}")
    img = check_binary_image(img)
    k_max = int(math.floor(max_angle / step + 1e-9))
    order = sorted(range(-k_max, k_max + 1), key=lambda k: (abs(k), k))
    best_k, best_score, best_img = 0, None, img
    for k in order:
        candidate = rotate_nearest(img, k * step)
        score = _profile_spread(candidate)
        if best_score is None or score > best_score:
            best_k, best_score, best_img = k, score, candidate
    angle = float(best_k * step) if best_k else 0.0
    logger.debug("deskew chose %.3f degrees", angle)
    return best_img, angle
