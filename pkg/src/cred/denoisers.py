"""Classical denoisers used as the prior engine ``f`` inside RED.

Every denoiser is a deterministic map from a finite image to a finite image
of the same shape, working directly on the ``[0, 255]`` intensity scale.
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy import fft as spfft
from scipy import ndimage

__all__ = ["KINDS", "DenoiserSpec", "denoise", "rho_red", "preset", "load_presets",
           "tv_rof", "dct_threshold", "median", "gaussian_smooth", "total_variation"]

KINDS = ("tv_rof", "dct_threshold", "median", "gaussian_smooth")
TV_ITERATIONS = 20
TV_STEP = 0.25


def _grad(u):
    g = np.zeros((2,) + u.shape)
    g[0, :-1, :] = u[1:, :] - u[:-1, :]
    g[1, :, :-1] = u[:, 1:] - u[:, :-1]
    return g


def _div(p):
    # negative adjoint of _grad
    d = np.zeros(p.shape[1:])
    d[0, :] += p[0, 0, :]
    d[1:-1, :] += p[0, 1:-1, :] - p[0, :-2, :]
    d[-1, :] -= p[0, -2, :]
    d[:, 0] += p[1, :, 0]
    d[:, 1:-1] += p[1, :, 1:-1] - p[1, :, :-2]
    d[:, -1] -= p[1, :, -2]
    return d


def total_variation(u):
    """Isotropic discrete total variation with forward differences."""
    g = _grad(np.asarray(u, dtype=np.float64))
    return float(np.sum(np.sqrt(g[0] ** 2 + g[1] ** 2)))


def tv_rof(x, weight, n_iter=TV_ITERATIONS):
    """ROF denoising by a fixed number of Chambolle dual projection steps.

    Approximately solves ``min_u 0.5 * ||u - x||^2 + weight * TV(u)``.
    """
    x = np.asarray(x, dtype=np.float64)
    p = np.zeros((2,) + x.shape)
    for _ in range(n_iter):
        g = _grad(_div(p) - x / weight)
        mag = np.sqrt(g[0] ** 2 + g[1] ** 2)
        p = (p + TV_STEP * g) / (1.0 + TV_STEP * mag)
    return x - weight * _div(p)


def dct_threshold(x, threshold):
    """Hard thresholding of the global orthonormal DCT-II; the DC term is kept."""
    c = spfft.dctn(np.asarray(x, dtype=np.float64), norm="ortho")
    dc = c[0, 0]
    c[np.abs(c) < threshold] = 0.0
    c[0, 0] = dc
    return spfft.idctn(c, norm="ortho")


def median(x, half_size):
    size = 2 * int(half_size) + 1
    return ndimage.median_filter(np.asarray(x, dtype=np.float64), size=size, mode="reflect")


def gaussian_smooth(x, sigma):
    """Periodic Gaussian smoothing: linear with a symmetric Jacobian."""
    return ndimage.gaussian_filter(np.asarray(x, dtype=np.float64), sigma, mode="wrap")


_ENGINES = {
    "tv_rof": tv_rof,
    "dct_threshold": dct_threshold,
    "median": median,
    "gaussian_smooth": gaussian_smooth,
}


@dataclass(frozen=True)
class DenoiserSpec:
    """A denoiser kind and its scalar strength.

    ``strength`` is the TV weight for ``tv_rof``, the coefficient threshold
    for ``dct_threshold``, the window half-size for ``median`` and the
    smoothing standard deviation for ``gaussian_smooth``.
    """

    kind: str
    strength: float

    def __post_init__(self):
        if self.kind not in _ENGINES:
            raise ValueError(f"unknown denoiser kind {self.kind!r}; expected one of {KINDS}")
        if not self.strength > 0:
            raise ValueError(f"strength must be > 0, got {self.strength}")
        if self.kind == "median" and int(self.strength) != self.strength:
            raise ValueError(f"median half-size must be an integer, got {self.strength}")

    def __call__(self, x):
        return _ENGINES[self.kind](x, self.strength)

    @property
    def label(self):
        return f"{self.kind}:{self.strength:g}"


def denoise(spec, x):
    return spec(x)


def rho_red(f, x):
    """RED regularizer ``0.5 * <x, x - f(x)>``.

    ``f`` may be a :class:`DenoiserSpec` or any image-to-image callable.
    """
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * float(np.dot(x.ravel(), (x - f(x)).ravel()))


@lru_cache(maxsize=None)
def load_presets():
    """Return the shipped preset table ``{kind: {level: strength}}``."""
    text = resources.files("cred").joinpath("data/presets.json").read_text()
    return json.loads(text)["denoisers"]


def preset(kind, level="level-1"):
    """Build the :class:`DenoiserSpec` for a named strength preset."""
    table = load_presets()
    try:
        return DenoiserSpec(kind, table[kind][level])
    except KeyError:
        raise ValueError(f"no preset {level!r} for denoiser {kind!r}") from None
