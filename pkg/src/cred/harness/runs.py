"""Single experiment runs: a fully specified, replayable unit of work."""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

from .. import solvers
from ..denoisers import DenoiserSpec
from ..metrics import MetricsRecord
from ..noise import estimate_sigma
from ..testimages import load_image
from .simulate import simulate

__all__ = ["SOLVERS", "SCENARIOS", "ROW_FIELDS", "METRIC_FIELDS", "RunSpec", "run_point",
           "run_specs", "solver_config", "spec_from_row", "metrics_of_row"]

log = logging.getLogger(__name__)

SCENARIOS = ("idealized", "realistic")

_CONFIGS = {
    "cred": (solvers.CredConfig, solvers.cred_solve),
    "red": (solvers.RedConfig, solvers.red_admm_solve),
    "redpro": (solvers.RedProConfig, solvers.red_pro_solve),
}
SOLVERS = tuple(_CONFIGS)

ROW_FIELDS = (
    "sweep", "image", "solver", "denoiser", "strength", "scenario", "seed",
    "sigma_a", "sigma_eta", "sigma_used", "params",
    "psnr", "ssim", "sigma_xstar", "re_sigma",
    "iterations", "stop_reason", "residual_norm", "delta", "error",
)
METRIC_FIELDS = ("psnr", "ssim", "sigma_xstar", "re_sigma")


@dataclass(frozen=True)
class RunSpec:
    """Everything needed to reproduce one restoration bit-for-bit.

    ``params`` holds solver hyperparameters as sorted ``(name, value)``
    pairs; ``sigma_eta`` of the constrained solver is set from the scenario
    and must not appear there.
    """

    image: str
    solver: str
    denoiser: str
    strength: float
    sigma_a: float
    sigma_eta: float
    seed: int
    scenario: str = "idealized"
    params: tuple = ()
    sweep: str = ""
    keep_image: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.solver not in _CONFIGS:
            raise ValueError(f"unknown solver {self.solver!r}; expected one of {SOLVERS}")
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        object.__setattr__(self, "params", tuple(sorted(dict(self.params).items())))

    @property
    def param_dict(self):
        return dict(self.params)


def solver_config(solver, params, sigma_used):
    cls = _CONFIGS[solver][0]
    known = {f.name for f in fields(cls)}
    extra = set(params) - known
    if extra:
        raise ValueError(f"unknown {solver} parameters: {sorted(extra)}")
    if solver == "cred":
        if "sigma_eta" in params:
            raise ValueError("sigma_eta is set by the scenario, not by params")
        params = dict(params, sigma_eta=sigma_used)
    return cls(**params)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def run_point(spec, return_image=False):
    """Run one restoration and return its output row (a dict keyed by ROW_FIELDS).

    Failures are captured in the ``error`` column; nothing is raised for
    solver or configuration errors.
    """
    row = {
        "sweep": spec.sweep,
        "image": spec.image,
        "solver": spec.solver,
        "denoiser": spec.denoiser,
        "strength": float(spec.strength),
        "scenario": spec.scenario,
        "seed": int(spec.seed),
        "sigma_a": float(spec.sigma_a),
        "sigma_eta": float(spec.sigma_eta),
        "sigma_used": math.nan,
        "params": json.dumps(spec.param_dict, sort_keys=True),
        "psnr": math.nan,
        "ssim": math.nan,
        "sigma_xstar": math.nan,
        "re_sigma": math.nan,
        "iterations": 0,
        "stop_reason": "",
        "residual_norm": math.nan,
        "delta": math.nan,
        "error": "",
    }
    x = None
    try:
        gt = load_image(spec.image)
        b, op = simulate(gt, spec.sigma_a, spec.sigma_eta, spec.seed)
        sigma_used = spec.sigma_eta if spec.scenario == "idealized" else estimate_sigma(b)
        row["sigma_used"] = float(sigma_used)
        cfg = solver_config(spec.solver, spec.param_dict, sigma_used)
        f = DenoiserSpec(spec.denoiser, spec.strength)
        x, rep = _CONFIGS[spec.solver][1](op, b, f, cfg)
        m = MetricsRecord.evaluate(x, gt, op, b, spec.sigma_eta)
        row.update(m.as_dict())
        row.update(iterations=rep.iterations, stop_reason=rep.stop_reason,
                   residual_norm=rep.residual_norm, delta=rep.delta)
    except Exception as exc:  # recorded as a row, the sweep goes on
        log.warning("run failed (%s, %s): %s", spec.image, spec.solver, exc)
        row["error"] = f"{type(exc).__name__}: {exc}"
    if return_image:
        return row, x
    return row


def _run_one(spec):
    return run_point(spec, return_image=spec.keep_image)


def run_specs(specs, workers=1):
    """Run specs in order; with ``workers > 1`` a process pool is used.

    Output order always matches ``specs``. Returns ``(rows, images)``
    where ``images`` maps row index to restored arrays for specs with
    ``keep_image`` set.
    """
    specs = list(specs)
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, specs, chunksize=1))
    else:
        results = [_run_one(s) for s in specs]
    rows, images = [], {}
    for i, (spec, res) in enumerate(zip(specs, results)):
        if spec.keep_image:
            row, x = res
            if x is not None:
                images[i] = x
        else:
            row = res
        rows.append(row)
    return rows, images


def spec_from_row(row):
    """Rebuild the :class:`RunSpec` that produced a row."""
    params = row["params"]
    if isinstance(params, str):
        params = json.loads(params)
    return RunSpec(
        image=row["image"],
        solver=row["solver"],
        denoiser=row["denoiser"],
        strength=float(row["strength"]),
        sigma_a=float(row["sigma_a"]),
        sigma_eta=float(row["sigma_eta"]),
        seed=int(row["seed"]),
        scenario=row["scenario"],
        params=tuple(params.items()),
        sweep=row.get("sweep", ""),
    )


def metrics_of_row(row):
    """The metrics of a row rendered exactly as written to CSV."""
    return {k: _fmt(float(row[k])) for k in METRIC_FIELDS}

