"""Constrained Regularization by Denoising (CRED) for image deblurring.

The constrained solver minimizes the RED regularizer of a plug-in denoiser
subject to a discrepancy bound ``||A x - b|| <= tau sqrt(n) sigma``, so the
only model parameter is tied to the noise level, which can itself be
estimated from the data. RED-ADMM and RED-PRO baselines and an experiment
harness are included.
"""

from .denoisers import DenoiserSpec, denoise, preset, rho_red
from .imagecore import load_pgm, save_pgm
from .metrics import MetricsRecord, psnr, relative_error, ssim
from .noise import estimate_sigma, sigma_discrepancy
from .operators import BlurOperator, build
from .solvers import (
    CredConfig,
    DivergenceError,
    RedConfig,
    RedProConfig,
    RunReport,
    cred_solve,
    project_ball,
    red_admm_solve,
    red_pro_solve,
    stopping_check,
)

__version__ = "0.1.0"

__all__ = [
    "BlurOperator", "CredConfig", "DenoiserSpec", "DivergenceError", "MetricsRecord",
    "RedConfig", "RedProConfig", "RunReport", "build", "cred_solve", "denoise",
    "estimate_sigma", "load_pgm", "preset", "project_ball", "psnr", "red_admm_solve",
    "red_pro_solve", "relative_error", "rho_red", "save_pgm", "sigma_discrepancy", "ssim",
    "stopping_check",
]
