"""Noise-level estimation for the discrepancy threshold."""

import math

import numpy as np
from scipy import signal

from .imagecore import check_same_shape

__all__ = ["IMMERKAER_MASK", "estimate_sigma", "sigma_discrepancy"]

IMMERKAER_MASK = np.array([[1.0, -2.0, 1.0],
                           [-2.0, 4.0, -2.0],
                           [1.0, -2.0, 1.0]])


def estimate_sigma(b):
    """Immerkaer's fast AWGN standard-deviation estimate.

    The mask is the difference of two Laplacian stencils, so it annihilates
    affine intensity ramps; what is left is dominated by the noise. Only
    the valid region is used.

    Parameters
    ----------
    b : ndarray
        Observed image, at least 3x3.

    Returns
    -------
    float
        Estimated noise standard deviation (>= 0).
    """
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or min(b.shape) < 3:
        raise ValueError(f"need a 2-D image of at least 3x3, got shape {b.shape}")
    h, w = b.shape
    total = np.sum(np.abs(signal.convolve2d(b, IMMERKAER_MASK, mode="valid")))
    return float(math.sqrt(math.pi / 2.0) * total / (6.0 * (w - 2) * (h - 2)))


def sigma_discrepancy(op, x, b):
    """Noise level implied by a restoration: ``||A x - b|| / sqrt(n - 1)``."""
    check_same_shape(x, b)
    n = np.size(b)
    if n <= 1:
        raise ValueError("need more than one pixel")
    return float(np.linalg.norm(op.apply(x) - b) / math.sqrt(n - 1))
