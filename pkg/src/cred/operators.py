"""Gaussian blur forward model under periodic boundary conditions.

All three operations are diagonal in the 2-D DFT basis, so the shifted
normal-equation solve used by the ADMM solvers is an exact pointwise
division in frequency space.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .imagecore import ShapeMismatchError

__all__ = ["BlurOperator", "build", "gaussian_kernel", "apply", "apply_adjoint",
           "solve_regularized_normal"]


def gaussian_kernel(sigma_a):
    """Truncated, renormalized 2-D Gaussian PSF.

    The radius is ``ceil(4 * sigma_a)``; ``sigma_a == 0`` gives the 1x1
    delta kernel.
    """
    if sigma_a < 0 or not math.isfinite(sigma_a):
        raise ValueError(f"sigma_a must be finite and >= 0, got {sigma_a}")
    if sigma_a == 0:
        return np.ones((1, 1))
    radius = int(math.ceil(4.0 * sigma_a))
    i = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(i ** 2) / (2.0 * sigma_a ** 2))
    k = np.outer(g, g)
    return k / k.sum()


def wrap_kernel(kernel, shape):
    """Embed a centred odd-sized kernel into ``shape`` with its centre at (0, 0)."""
    kh, kw = kernel.shape
    out = np.zeros(shape)
    out[:kh, :kw] = kernel
    return np.roll(out, (-(kh // 2), -(kw // 2)), axis=(0, 1))


@dataclass(frozen=True, eq=False)
class BlurOperator:
    """Circular convolution with a Gaussian PSF.

    Attributes
    ----------
    sigma_a : float
        PSF standard deviation in pixels.
    kernel_radius : int
        The spatial kernel is ``(2 * kernel_radius + 1)`` pixels wide.
    height, width : int
        Shape of the images the operator acts on.
    transfer : ndarray
        Complex DFT of the periodically embedded PSF.
    transfer_abs2 : ndarray
        ``|transfer| ** 2``, cached for the normal-equation solve.
    """

    sigma_a: float
    kernel_radius: int
    height: int
    width: int
    kernel: np.ndarray = field(repr=False)
    transfer: np.ndarray = field(repr=False)
    transfer_abs2: np.ndarray = field(repr=False)

    @property
    def shape(self):
        return (self.height, self.width)

    def _check(self, x):
        if np.shape(x) != self.shape:
            raise ShapeMismatchError(f"operator acts on {self.shape}, got {np.shape(x)}")

    def apply(self, x):
        self._check(x)
        return np.real(np.fft.ifft2(self.transfer * np.fft.fft2(x)))

    def apply_adjoint(self, y):
        self._check(y)
        return np.real(np.fft.ifft2(np.conj(self.transfer) * np.fft.fft2(y)))

    def solve_regularized_normal(self, rhs, c):
        """Solve ``(c * A^T A + I) x = rhs`` exactly."""
        self._check(rhs)
        if not (c >= 0 and math.isfinite(c)):
            raise ValueError(f"c must be finite and >= 0, got {c}")
        return np.real(np.fft.ifft2(np.fft.fft2(rhs) / (c * self.transfer_abs2 + 1.0)))

    def to_dense(self):
        """Explicit ``n x n`` matrix acting on row-major flattened images."""
        n = self.height * self.width
        cols = [self.apply(e.reshape(self.shape)).ravel() for e in np.eye(n)]
        return np.array(cols).T

    __call__ = apply


def build(sigma_a, width, height):
    """Construct the blur operator for ``height x width`` images.

    Raises
    ------
    ValueError
        If the kernel does not fit inside the image.
    """
    kernel = gaussian_kernel(sigma_a)
    size = kernel.shape[0]
    if size > min(width, height):
        raise ValueError(
            f"kernel of size {size} (sigma_a={sigma_a}) does not fit a {height}x{width} image")
    transfer = np.fft.fft2(wrap_kernel(kernel, (height, width)))
    return BlurOperator(
        sigma_a=float(sigma_a),
        kernel_radius=size // 2,
        height=int(height),
        width=int(width),
        kernel=kernel,
        transfer=transfer,
        transfer_abs2=np.abs(transfer) ** 2,
    )


def apply(op, x):
    return op.apply(x)


def apply_adjoint(op, y):
    return op.apply_adjoint(y)


def solve_regularized_normal(op, rhs, c):
    return op.solve_regularized_normal(rhs, c)
