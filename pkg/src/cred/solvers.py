"""Restoration solvers: constrained RED by ADMM plus the RED-ADMM and RED-PRO baselines.

All solvers share the same blur operator, denoiser callable and stopping
rule (relative change of consecutive iterates). Images are float64 arrays
on the ``[0, 255]`` scale and are never clamped while iterating.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .imagecore import ShapeMismatchError
from .noise import sigma_discrepancy

__all__ = [
    "DivergenceError",
    "CredConfig",
    "CredState",
    "RedConfig",
    "RedProConfig",
    "RunReport",
    "project_ball",
    "stopping_check",
    "relative_change",
    "cred_solve",
    "red_admm_solve",
    "red_pro_solve",
]

TOLERANCE = "tolerance"
# rescaled vectors may overshoot the radius by a few ulp; keeps projection idempotent
_BALL_SLACK = 1.0 + 8 * np.finfo(np.float64).eps
MAX_ITER = "max_iter"


class DivergenceError(RuntimeError):
    """An iterate became non-finite."""

    def __init__(self, solver, iteration):
        super().__init__(f"{solver} diverged: non-finite iterate at iteration {iteration}")
        self.solver = solver
        self.iteration = iteration


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be finite and > 0, got {value}")


def _check_common(tol, max_iter):
    _positive("tol", tol)
    if int(max_iter) != max_iter or max_iter < 1:
        raise ValueError(f"max_iter must be a positive integer, got {max_iter}")


@dataclass(frozen=True)
class CredConfig:
    """Hyperparameters of the constrained solver.

    The constraint radius is ``delta = tau * sqrt(n) * sigma_eta`` and both
    penalties are multiplied by ``gamma`` after every iteration.
    """

    tau: float = 0.98
    sigma_eta: float = 0.0
    gamma: float = 1.01
    beta_r0: float = 1.0
    beta_t0: float = 1.0
    tol: float = 1e-4
    max_iter: int = 200
    record_trace: bool = False

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")
        if not (self.sigma_eta >= 0 and math.isfinite(self.sigma_eta)):
            raise ValueError(f"sigma_eta must be finite and >= 0, got {self.sigma_eta}")
        if not (self.gamma >= 1 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be finite and >= 1, got {self.gamma}")
        _positive("beta_r0", self.beta_r0)
        _positive("beta_t0", self.beta_t0)
        _check_common(self.tol, self.max_iter)

    def delta(self, n):
        return self.tau * math.sqrt(n) * self.sigma_eta


@dataclass
class CredState:
    """ADMM variables. ``u_r`` and ``u_t`` are the scaled multipliers (lambda / beta)."""

    x: np.ndarray
    t: np.ndarray
    r: np.ndarray
    u_r: np.ndarray
    u_t: np.ndarray
    beta_r: float
    beta_t: float
    k: int = 0


@dataclass(frozen=True)
class RedConfig:
    """RED solved by ADMM on ``0.5 ||Ax - b||^2 + lam * rho_RED(x)``."""

    lam: float = 1.0
    beta: float = 1.0
    inner_iters: int = 1
    tol: float = 1e-4
    max_iter: int = 200
    record_trace: bool = False

    def __post_init__(self):
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise ValueError(f"lam must be finite and >= 0, got {self.lam}")
        _positive("beta", self.beta)
        if int(self.inner_iters) != self.inner_iters or self.inner_iters < 1:
            raise ValueError(f"inner_iters must be a positive integer, got {self.inner_iters}")
        _check_common(self.tol, self.max_iter)


@dataclass(frozen=True)
class RedProConfig:
    """Hybrid steepest descent through the relaxed denoiser ``(1 - alpha) Id + alpha f``.

    The step length at iteration ``k`` is ``mu / k ** decay`` (k starting at 1).
    """

    alpha: float = 0.5
    mu: float = 0.5
    decay: float = 1.0
    tol: float = 1e-4
    max_iter: int = 200
    record_trace: bool = False

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        _positive("mu", self.mu)
        if not (self.decay >= 0 and math.isfinite(self.decay)):
            raise ValueError(f"decay must be finite and >= 0, got {self.decay}")
        _check_common(self.tol, self.max_iter)


@dataclass
class RunReport:
    """Outcome of one solver run.

    ``trace`` holds ``(relative_change, residual_norm)`` per iteration when
    the config asked for it. ``state`` carries the final ADMM variables of
    the constrained solver.
    """

    solver: str
    iterations: int
    stop_reason: str
    residual_norm: float
    sigma_xstar: float
    delta: float = math.nan
    trace: list = field(default_factory=list)
    state: CredState = field(default=None, repr=False)


def _norm(v):
    nv = float(np.linalg.norm(v))
    # squares underflow or overflow at the extremes of the float range
    if 0 < nv < 1e-100 or nv > 1e100:
        scale = float(np.max(np.abs(v)))
        nv = scale * float(np.linalg.norm(v / scale))
    return nv


def project_ball(v, delta):
    """Euclidean projection onto ``{r : ||r||_2 <= delta}``."""
    if not delta >= 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    v = np.asarray(v, dtype=np.float64)
    nv = _norm(v)
    if nv <= delta * _BALL_SLACK:
        return v.copy()
    return v * (delta / nv)


def relative_change(x_new, x_old):
    d = float(np.linalg.norm(x_new - x_old))
    n = float(np.linalg.norm(x_old))
    return d / n if n > 0 else d


def stopping_check(x_new, x_old, tol):
    """``||x_new - x_old|| / ||x_old|| < tol`` (absolute change when ``x_old`` is zero)."""
    if np.shape(x_new) != np.shape(x_old):
        raise ShapeMismatchError(f"shape mismatch: {np.shape(x_new)} vs {np.shape(x_old)}")
    return relative_change(x_new, x_old) < tol


def _prepare(op, b, x0):
    b = np.asarray(b, dtype=np.float64)
    if b.shape != op.shape:
        raise ShapeMismatchError(f"operator acts on {op.shape}, data has shape {b.shape}")
    x = b.copy() if x0 is None else np.array(x0, dtype=np.float64)
    if x.shape != b.shape:
        raise ShapeMismatchError(f"x0 has shape {x.shape}, data has shape {b.shape}")
    return b, x


def _report(solver, op, x, b, k, converged, trace, **extra):
    residual = float(np.linalg.norm(op.apply(x) - b))
    return RunReport(
        solver=solver,
        iterations=k,
        stop_reason=TOLERANCE if converged else MAX_ITER,
        residual_norm=residual,
        sigma_xstar=sigma_discrepancy(op, x, b),
        trace=trace,
        **extra,
    )


def cred_solve(op, b, f, cfg, x0=None):
    """Minimize ``rho_RED(x)`` subject to ``||A x - b||_2 <= delta`` by ADMM.

    The problem is split as ``r = A x - b`` and ``t = x``. Each iteration
    solves the quadratic x-subproblem exactly in the Fourier domain, takes
    one fixed-point step on the denoiser subproblem, projects onto the
    discrepancy ball and updates the scaled multipliers. Penalties grow by
    ``cfg.gamma`` afterwards; the scaled multipliers are not rescaled.

    Parameters
    ----------
    op : BlurOperator
    b : ndarray
        Observed data.
    f : callable
        Denoiser, e.g. a :class:`~cred.denoisers.DenoiserSpec`.
    cfg : CredConfig
    x0 : ndarray, optional
        Starting point; defaults to ``b``. ``t`` starts at ``x0`` and ``r``
        at the projection of ``A x0 - b``.

    Returns
    -------
    x : ndarray
    report : RunReport

    Raises
    ------
    DivergenceError
        If an iterate becomes non-finite.
    """
    b, x = _prepare(op, b, x0)
    delta = cfg.delta(b.size)
    st = CredState(
        x=x,
        t=x.copy(),
        r=project_ball(op.apply(x) - b, delta),
        u_r=np.zeros_like(b),
        u_t=np.zeros_like(b),
        beta_r=cfg.beta_r0,
        beta_t=cfg.beta_t0,
    )
    trace = []
    converged = False
    for k in range(1, cfg.max_iter + 1):
        c = st.beta_r / st.beta_t
        half = c * op.apply_adjoint(b + st.r - st.u_r) + (st.t - st.u_t)
        x_new = op.solve_regularized_normal(half, c)
        t_new = (f(st.t) + st.beta_t * (x_new + st.u_t)) / (1.0 + st.beta_t)
        resid = op.apply(x_new) - b
        r_new = project_ball(resid + st.u_r, delta)
        st.u_r = st.u_r + resid - r_new
        st.u_t = st.u_t + x_new - t_new
        st.beta_r *= cfg.gamma
        st.beta_t *= cfg.gamma
        if not (np.all(np.isfinite(x_new)) and np.all(np.isfinite(t_new))):
            raise DivergenceError("cred", k)
        change = relative_change(x_new, st.x)
        st.x, st.t, st.r, st.k = x_new, t_new, r_new, k
        if cfg.record_trace:
            trace.append((change, float(np.linalg.norm(resid))))
        # iteration 1 cannot move x away from a consistent start (t = x0)
        if k > 1 and change < cfg.tol:
            converged = True
            break
    report = _report("cred", op, st.x, b, st.k, converged, trace, delta=delta, state=st)
    return st.x, report


def red_admm_solve(op, b, f, cfg, x0=None):
    """Unconstrained RED, ``0.5 ||Ax - b||^2 + lam * rho_RED(x)``, by ADMM on ``x = t``.

    The x-step solves ``(A^T A + beta I) x = A^T b + beta (t - u)`` in the
    Fourier domain; the t-step applies ``cfg.inner_iters`` fixed-point
    updates ``t <- (lam f(t) + beta (x + u)) / (lam + beta)``.
    """
    b, x = _prepare(op, b, x0)
    beta, lam = cfg.beta, cfg.lam
    t = x.copy()
    u = np.zeros_like(b)
    atb = op.apply_adjoint(b)
    trace = []
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        x_new = op.solve_regularized_normal(atb / beta + (t - u), 1.0 / beta)
        for _ in range(cfg.inner_iters):
            t = (lam * f(t) + beta * (x_new + u)) / (lam + beta)
        u = u + x_new - t
        if not np.all(np.isfinite(x_new)):
            raise DivergenceError("red", k)
        change = relative_change(x_new, x)
        x = x_new
        if cfg.record_trace:
            trace.append((change, float(np.linalg.norm(op.apply(x) - b))))
        if change < cfg.tol:
            converged = True
            break
    return x, _report("red", op, x, b, k, converged, trace)


def red_pro_solve(op, b, f, cfg, x0=None):
    """RED-PRO style hybrid steepest descent.

    ``x <- f_alpha(x - mu_k A^T (A x - b))`` with the relaxed denoiser
    ``f_alpha = (1 - alpha) Id + alpha f`` and ``mu_k = mu / k ** decay``.
    """
    b, x = _prepare(op, b, x0)
    alpha = cfg.alpha
    trace = []
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        mu_k = cfg.mu / k ** cfg.decay
        z = x - mu_k * op.apply_adjoint(op.apply(x) - b)
        x_new = (1.0 - alpha) * z + alpha * f(z) if alpha > 0 else z
        if not np.all(np.isfinite(x_new)):
            raise DivergenceError("redpro", k)
        change = relative_change(x_new, x)
        x = x_new
        if cfg.record_trace:
            trace.append((change, float(np.linalg.norm(op.apply(x) - b))))
        if change < cfg.tol:
            converged = True
            break
    return x, _report("redpro", op, x, b, k, converged, trace)
