"""
Estimating the noise level
==========================

The realistic scenario does not know sigma_eta and estimates it from the
data with Immerkaer's Laplacian-difference mask.
"""

import numpy as np

from cred import estimate_sigma
from cred.testimages import load_image
from cred.harness import simulate

# pure noise: the estimator is unbiased
for sigma in (15, 25, 35, 50):
    est = [estimate_sigma(np.random.default_rng(s).standard_normal((256, 256)) * sigma)
           for s in range(10)]
    print(f"pure noise sigma={sigma:2d}: mean estimate {np.mean(est):6.2f}")

# affine images are annihilated by the mask
i, j = np.mgrid[:64, :64]
print("ramp estimate", estimate_sigma(3.0 * i - 2.0 * j + 10.0))

# on blurred natural images the structure leaks into the estimate
print()
print(f"{'image':<16}{'true':>6}{'estimate':>10}")
for name in ("camera", "coins", "brick", "grass", "text"):
    b, _ = simulate(load_image(f"builtin:{name}"), 1.0, 25.0, seed=0)
    print(f"{name:<16}{25:>6}{estimate_sigma(b):>10.2f}")
