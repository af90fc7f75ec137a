"""Image quality metrics on the 8-bit intensity scale."""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import signal

from .imagecore import check_same_shape
from .noise import sigma_discrepancy

__all__ = ["PEAK", "psnr", "ssim", "relative_error", "MetricsRecord"]

PEAK = 255.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
K1, K2 = 0.01, 0.03


def psnr(x, ref, peak=PEAK):
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    check_same_shape(x, ref)
    mse = float(np.mean((np.asarray(x, dtype=np.float64) - ref) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak ** 2 / mse)


def _ssim_window():
    i = np.arange(SSIM_WINDOW) - SSIM_WINDOW // 2
    g = np.exp(-(i ** 2) / (2.0 * SSIM_SIGMA ** 2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(x, ref, data_range=PEAK):
    """Mean structural similarity with an 11x11 Gaussian window (sigma 1.5).

    Local statistics are computed over the valid region only, with the
    usual constants ``C1 = (0.01 L)^2`` and ``C2 = (0.03 L)^2``.
    """
    check_same_shape(x, ref)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(ref, dtype=np.float64)
    if min(x.shape) < SSIM_WINDOW:
        raise ValueError(f"SSIM needs images of at least {SSIM_WINDOW}x{SSIM_WINDOW}")
    if np.array_equal(x, y):
        return 1.0
    w = _ssim_window()

    def filt(z):
        return signal.correlate2d(z, w, mode="valid")

    c1 = (K1 * data_range) ** 2
    c2 = (K2 * data_range) ** 2
    mx, my = filt(x), filt(y)
    sxx = filt(x * x) - mx * mx
    syy = filt(y * y) - my * my
    sxy = filt(x * y) - mx * my
    num = (2 * mx * my + c1) * (2 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return float(np.mean(num / den))


def relative_error(true_sigma, est):
    """``|est - true_sigma| / true_sigma``."""
    if not true_sigma > 0:
        raise ValueError(f"true_sigma must be > 0, got {true_sigma}")
    return abs(est - true_sigma) / true_sigma


@dataclass(frozen=True)
class MetricsRecord:
    """Quality figures of one restoration.

    ``re_sigma`` is the relative error between the implied noise level
    ``sigma_xstar`` and the true one; NaN when the true level is unknown.
    """

    psnr: float
    ssim: float
    sigma_xstar: float
    re_sigma: float

    @classmethod
    def evaluate(cls, x, gt, op, b, sigma_eta):
        s = sigma_discrepancy(op, x, b)
        re = relative_error(sigma_eta, s) if sigma_eta > 0 else math.nan
        return cls(psnr(x, gt), ssim(x, gt), s, re)

    def as_dict(self):
        return asdict(self)
