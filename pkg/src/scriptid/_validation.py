"""Input validation helpers for raster arrays and rectangles.

Images are plain 2-D ``numpy`` arrays indexed ``[row, column]``: gray pages
are ``uint8`` intensities in [0, 255], binary pages are ``uint8`` with 1 for
ink and 0 for background.
"""

import numpy as np

from .errors import InvalidImage, RegionOutOfBounds


def check_gray_image(img):
    """Return ``img`` as a C-contiguous 2-D uint8 array or raise InvalidImage."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidImage(f"expected a non-empty 2-D gray image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.dtype.kind not in "iub":
            raise InvalidImage(f"gray image must be integer valued, got dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise InvalidImage("gray intensities must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


def check_binary_image(img):
    """Return ``img`` as a 2-D uint8 array of {0, 1} or raise InvalidImage."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidImage(f"expected a non-empty 2-D binary image, got shape {arr.shape}")
    if arr.dtype == np.bool_:
        return arr.astype(np.uint8)
    if arr.dtype.kind not in "iu":
        raise InvalidImage(f"binary image must be integer valued, got dtype {arr.dtype}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise InvalidImage("binary image values must be 0 or 1")
    return np.ascontiguousarray(arr, dtype=np.uint8)


def check_region(shape, region=None):
    """Normalise an inclusive ``(x0, y0, x1, y1)`` rectangle against ``shape``.

    ``None`` selects the whole image.
    """
    height, width = shape
    if region is None:
        return (0, 0, width - 1, height - 1)
    try:
        x0, y0, x1, y1 = (int(v) for v in region)
    except (TypeError, ValueError):
        raise RegionOutOfBounds(f"region must be four integers, got {region!r}") from None
    if not (0 <= x0 <= x1 < width and 0 <= y0 <= y1 < height):
        raise RegionOutOfBounds(
            f"region {(x0, y0, x1, y1)} is empty or outside a {width}x{height} image"
        )
    return (x0, y0, x1, y1)
