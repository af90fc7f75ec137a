"""
The image formation model
=========================

A ground-truth image is blurred by a periodic Gaussian kernel and
corrupted by white Gaussian noise. This walks through the operator and
checks its algebra numerically.
"""

import numpy as np

from cred import build, psnr
from cred.testimages import load_image
from cred.harness import simulate

from _plotting import show_images

gt = load_image("builtin:camera")
print("ground truth:", gt.shape, gt.dtype, "range", gt.min(), gt.max())

# the blur is a circular convolution, diagonalized by the 2-D FFT
op = build(1.0, gt.shape[1], gt.shape[0])
print("kernel radius", op.kernel_radius, "kernel sum", op.kernel.sum())

# adjoint identity <Ax, y> == <x, A^T y>
rng = np.random.default_rng(0)
x, y = rng.standard_normal((2, *gt.shape))
print("adjoint gap", abs(np.vdot(op.apply(x), y) - np.vdot(x, op.apply_adjoint(y))))

# the regularized normal solve used by every ADMM x-step
c = 0.7
rhs = rng.standard_normal(gt.shape)
z = op.solve_regularized_normal(rhs, c)
print("normal-equation residual", np.abs(c * op.apply_adjoint(op.apply(z)) + z - rhs).max())

# b = A gt + eta, reproducible from the seed
b, op = simulate(gt, sigma_a=1.0, sigma_eta=25.0, seed=0)
print(f"degraded PSNR {psnr(b, gt):.2f} dB")
print("noise std", np.std(b - op.apply(gt)))

show_images([gt, op.apply(gt), b], ["ground truth", "blurred", "blurred + noise"],
            "01_forward_model.png")
