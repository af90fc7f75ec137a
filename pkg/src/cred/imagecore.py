"""Grayscale image container helpers and binary PGM (P5) I/O.

Images are plain 2-D ``float64`` numpy arrays of shape ``(height, width)``
holding intensities on the nominal ``[0, 255]`` scale. Nothing is clamped
until an image is written to disk.
"""

import os

import numpy as np

__all__ = [
    "PGMError",
    "PGMFormatError",
    "PGMHeaderError",
    "PGMTruncatedError",
    "PGMMaxvalError",
    "ShapeMismatchError",
    "as_image",
    "load_pgm",
    "save_pgm",
    "to_bytes",
    "axpy",
    "add",
    "sub",
    "scale",
    "dot",
    "norm2",
]

MIN_SIDE = 3


class ShapeMismatchError(ValueError):
    """Raised when two images that must share a shape do not."""


class PGMError(ValueError):
    """Base class for PGM parse errors."""


class PGMFormatError(PGMError):
    """The file is not a binary (P5) PGM."""


class PGMHeaderError(PGMError):
    """The PGM header is malformed."""


class PGMTruncatedError(PGMError):
    """The pixel payload is shorter than the header announces."""


class PGMMaxvalError(PGMError):
    """The maxval is anything other than 255."""


def as_image(data, copy=False):
    """Validate ``data`` as an image and return it as a float64 array.

    Parameters
    ----------
    data : array_like
        2-D array of intensities.
    copy : bool
        Force a copy even when ``data`` already is a float64 array.

    Returns
    -------
    ndarray
        ``(height, width)`` float64 array.

    Raises
    ------
    ValueError
        If the array is not 2-D, is smaller than 3x3, or holds NaN/Inf.
    """
    img = np.array(data, dtype=np.float64, copy=copy) if copy else np.asarray(data, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {img.shape}")
    if img.shape[0] < MIN_SIDE or img.shape[1] < MIN_SIDE:
        raise ValueError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    return img


def check_same_shape(a, b):
    if np.shape(a) != np.shape(b):
        raise ShapeMismatchError(f"shape mismatch: {np.shape(a)} vs {np.shape(b)}")


# ---------------------------------------------------------------- PGM I/O


def _read_token(buf, pos):
    """Return the next whitespace-delimited header token and the new offset."""
    n = len(buf)
    while pos < n:
        c = buf[pos:pos + 1]
        if c == b"#":
            while pos < n and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not buf[pos:pos + 1].isspace() and buf[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise PGMHeaderError("unexpected end of header")
    return buf[start:pos], pos


def parse_pgm(buf):
    """Decode the bytes of a P5 file into a float64 image."""
    if len(buf) < 2 or buf[:2] != b"P5":
        raise PGMFormatError(f"not a binary PGM (magic {buf[:2]!r})")
    pos = 2
    fields = []
    for name in ("width", "height", "maxval"):
        tok, pos = _read_token(buf, pos)
        try:
            fields.append(int(tok))
        except ValueError:
            raise PGMHeaderError(f"bad {name} field {tok!r}") from None
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise PGMHeaderError(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise PGMMaxvalError(f"unsupported maxval {maxval}, only 255 is handled")
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(buf) or not buf[pos:pos + 1].isspace():
        raise PGMHeaderError("missing whitespace after maxval")
    pos += 1
    npix = width * height
    payload = buf[pos:pos + npix]
    if len(payload) < npix:
        raise PGMTruncatedError(f"expected {npix} pixel bytes, found {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).astype(np.float64)


def load_pgm(path):
    """Read a binary PGM (P5, maxval 255) file.

    Raises
    ------
    PGMFormatError, PGMHeaderError, PGMTruncatedError, PGMMaxvalError
        On the respective kinds of malformed input.
    """
    with open(path, "rb") as fh:
        buf = fh.read()
    return parse_pgm(buf)


def to_bytes(img):
    """Clamp to ``[0, 255]``, round half up and cast to ``uint8``."""
    img = np.asarray(img, dtype=np.float64)
    return np.floor(np.clip(img, 0.0, 255.0) + 0.5).astype(np.uint8)


def save_pgm(img, path):
    """Write ``img`` as a binary PGM, clamping and rounding at write time only."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {img.shape}")
    height, width = img.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    tmp = os.fspath(path)
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(to_bytes(img).tobytes())


# ---------------------------------------------------------- vector algebra


def axpy(a, x, y):
    """Return ``a * x + y``."""
    check_same_shape(x, y)
    return a * np.asarray(x, dtype=np.float64) + np.asarray(y, dtype=np.float64)


def add(x, y):
    check_same_shape(x, y)
    return np.asarray(x, dtype=np.float64) + y


def sub(x, y):
    check_same_shape(x, y)
    return np.asarray(x, dtype=np.float64) - y


def scale(x, c):
    return c * np.asarray(x, dtype=np.float64)


def dot(x, y):
    """Inner product with float64 accumulation."""
    check_same_shape(x, y)
    return float(np.dot(np.ravel(x).astype(np.float64), np.ravel(y).astype(np.float64)))


def norm2(x):
    """Euclidean norm of the flattened image."""
    return float(np.linalg.norm(np.ravel(x).astype(np.float64)))
