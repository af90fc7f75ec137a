"""Degradation simulator: blur with periodic boundaries plus seeded AWGN."""

import numpy as np

from .. import operators
from ..imagecore import as_image

__all__ = ["simulate", "noise_realization"]


def noise_realization(shape, sigma_eta, seed):
    """I.i.d. Gaussian noise from a PCG64 generator seeded by ``seed``."""
    rng = np.random.default_rng(seed)
    return sigma_eta * rng.standard_normal(shape)


def simulate(gt, sigma_a, sigma_eta, seed, noise=None):
    """Return ``(b, op)`` with ``b = A gt + eta``.

    Parameters
    ----------
    gt : ndarray
        Ground-truth image.
    sigma_a : float
        Blur standard deviation; 0 gives the identity operator.
    sigma_eta : float
        Noise standard deviation (0 for noiseless data).
    seed : int
        Seed of the noise generator.
    noise : ndarray, optional
        A persisted noise realization to use instead of drawing one.
    """
    gt = as_image(gt)
    if not sigma_eta >= 0:
        raise ValueError(f"sigma_eta must be >= 0, got {sigma_eta}")
    h, w = gt.shape
    op = operators.build(sigma_a, w, h)
    clean = op.apply(gt)
    if noise is None:
        if sigma_eta == 0:
            return clean, op
        noise = noise_realization(gt.shape, sigma_eta, seed)
    return clean + noise, op
