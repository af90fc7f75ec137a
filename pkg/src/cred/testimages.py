"""Bundled small test images and image-id resolution.

An image id is either ``builtin:<name>`` for one of the shipped 128x128
images / procedural phantoms, or a path to a PGM (P5) or PPM (P6) file.
Colour files are reduced to luminance with ITU-R BT.601 weights.
"""

from importlib import resources

import numpy as np

from .imagecore import PGMFormatError, _read_token, load_pgm, parse_pgm

__all__ = ["BUNDLED", "PHANTOMS", "available", "load_image", "shapes_phantom",
           "stripes_phantom", "load_ppm_luminance"]

BUNDLED = ("camera", "coins", "brick", "grass", "text")
PHANTOMS = ("shapes", "stripes")
BT601 = np.array([0.299, 0.587, 0.114])


def shapes_phantom(size=128):
    """Piecewise-constant phantom: discs, a square and a ramp background."""
    i, j = np.mgrid[0:size, 0:size] / size
    img = 40.0 + 60.0 * j
    img[(i - 0.3) ** 2 + (j - 0.3) ** 2 < 0.15 ** 2] = 210.0
    img[(i - 0.7) ** 2 + (j - 0.65) ** 2 < 0.2 ** 2] = 150.0
    img[(np.abs(i - 0.7) < 0.08) & (np.abs(j - 0.25) < 0.12)] = 20.0
    img[(np.abs(i - 0.25) < 0.05) & (np.abs(j - 0.75) < 0.2)] = 240.0
    return img


def stripes_phantom(size=128):
    """Chirped sinusoidal stripes; stresses deblurring at high frequencies."""
    i, j = np.mgrid[0:size, 0:size] / size
    return 127.5 + 100.0 * np.sin(2 * np.pi * (4 * j + 10 * j ** 2)) * (0.5 + 0.5 * i)


_PHANTOM_MAKERS = {"shapes": shapes_phantom, "stripes": stripes_phantom}


def available():
    return [f"builtin:{n}" for n in BUNDLED + PHANTOMS]


def load_ppm_luminance(path):
    with open(path, "rb") as fh:
        buf = fh.read()
    if buf[:2] != b"P6":
        raise PGMFormatError(f"not a binary PPM (magic {buf[:2]!r})")
    pos = 2
    fields = []
    for _ in range(3):
        tok, pos = _read_token(buf, pos)
        fields.append(int(tok))
    width, height, maxval = fields
    if maxval != 255:
        raise PGMFormatError(f"unsupported maxval {maxval}")
    raw = np.frombuffer(buf[pos + 1:pos + 1 + 3 * width * height], dtype=np.uint8)
    if raw.size < 3 * width * height:
        raise PGMFormatError("truncated PPM payload")
    rgb = raw.reshape(height, width, 3).astype(np.float64)
    return rgb @ BT601


def load_image(image_id):
    """Resolve an image id to a float64 array."""
    if image_id.startswith("builtin:"):
        name = image_id.split(":", 1)[1]
        if name in _PHANTOM_MAKERS:
            return _PHANTOM_MAKERS[name]()
        if name not in BUNDLED:
            raise ValueError(f"unknown builtin image {name!r}; available: {available()}")
        buf = resources.files("cred").joinpath(f"data/{name}.pgm").read_bytes()
        return parse_pgm(buf)
    if image_id.lower().endswith(".ppm"):
        return load_ppm_luminance(image_id)
    return load_pgm(image_id)
