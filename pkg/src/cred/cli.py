"""Command line interface: ``cred {simulate,restore,sweep,replay,metrics}``."""

import argparse
import json
import logging
import math
import sys

import numpy as np

from . import solvers
from .denoisers import KINDS, DenoiserSpec, load_presets, preset
from .harness import (
    ExperimentConfig,
    metrics_of_row,
    read_csv,
    report,
    run_point,
    run_sweep,
    simulate,
    spec_from_row,
)
from .harness.simulate import noise_realization
from .imagecore import save_pgm
from .metrics import MetricsRecord, psnr, ssim
from .noise import estimate_sigma, sigma_discrepancy
from .operators import build
from .testimages import load_image

log = logging.getLogger("cred")


def parse_denoiser(text):
    """``kind``, ``kind:level-2`` or ``kind:<strength>``."""
    kind, _, arg = text.partition(":")
    if kind not in KINDS:
        raise argparse.ArgumentTypeError(f"unknown denoiser {kind!r}; expected one of {KINDS}")
    if not arg:
        return preset(kind)
    if arg in load_presets()[kind]:
        return preset(kind, arg)
    try:
        return DenoiserSpec(kind, float(arg))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _to_jsonable(d):
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}


def _load_data(path):
    if path.endswith(".npy"):
        return np.load(path)
    return load_image(path)


def cmd_simulate(args):
    gt = load_image(args.input)
    noise = None
    if args.sigma_eta > 0:
        noise = noise_realization(gt.shape, args.sigma_eta, args.seed)
    b, _ = simulate(gt, args.sigma_a, args.sigma_eta, args.seed, noise=noise)
    save_pgm(b, args.output)
    if args.raw_output:
        np.save(args.raw_output, b)
    if args.noise_output and noise is not None:
        np.save(args.noise_output, noise)
    print(json.dumps({"output": args.output, "psnr": psnr(b, gt),
                      "estimated_sigma": estimate_sigma(b)}))
    return 0


def _solver_config(args, sigma_used):
    common = {"tol": args.tol, "max_iter": args.max_iter}
    if args.solver == "cred":
        return solvers.CredConfig(tau=args.tau, sigma_eta=sigma_used, gamma=args.gamma,
                                  beta_r0=args.beta_r0, beta_t0=args.beta_t0, **common)
    if args.solver == "red":
        return solvers.RedConfig(lam=args.lam, beta=args.beta, **common)
    return solvers.RedProConfig(alpha=args.alpha, mu=args.mu, decay=args.decay, **common)


def cmd_restore(args):
    if args.sigma_eta is None and (args.simulate or args.scenario == "idealized"):
        raise ValueError("--sigma-eta is required with --simulate or the idealized scenario")
    gt = None
    if args.simulate:
        gt = load_image(args.input)
        b, op = simulate(gt, args.sigma_a, args.sigma_eta, args.seed)
    else:
        b = _load_data(args.input)
        op = build(args.sigma_a, b.shape[1], b.shape[0])
        if args.ground_truth:
            gt = load_image(args.ground_truth)
    if args.scenario == "idealized":
        sigma_used = args.sigma_eta
    else:
        sigma_used = estimate_sigma(b)
    cfg = _solver_config(args, sigma_used)
    solve = {"cred": solvers.cred_solve, "red": solvers.red_admm_solve,
             "redpro": solvers.red_pro_solve}[args.solver]
    x, rep = solve(op, b, args.denoiser, cfg)
    save_pgm(x, args.output)
    out = {"output": args.output, "solver": args.solver, "denoiser": args.denoiser.label,
           "sigma_used": sigma_used, "iterations": rep.iterations, "stop_reason": rep.stop_reason,
           "residual_norm": rep.residual_norm, "delta": rep.delta, "sigma_xstar": rep.sigma_xstar}
    if gt is not None:
        true_sigma = args.sigma_eta if args.sigma_eta is not None else 0.0
        out.update(MetricsRecord.evaluate(x, gt, op, b, true_sigma).as_dict())
    out = _to_jsonable(out)
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(out, fh, indent=2)
    print(json.dumps(out))
    return 0


def cmd_sweep(args):
    cfg = ExperimentConfig.from_json(
        args.config, output_dir=args.output_dir, workers=args.workers, seed=args.seed,
        name=args.name, save_images=True if args.save_images else None)
    result = run_sweep(cfg)
    paths = report(result, cfg.output_dir)
    failed = sum(1 for r in result.rows if r["error"])
    print(json.dumps({"runs": len(result.rows), "failed": failed, "csv": paths["csv"],
                      "summary": paths["summary"], "plots": len(paths["plots"])}))
    return 0


def cmd_replay(args):
    rows = read_csv(args.csv)
    indices = range(len(rows)) if args.all else [args.row]
    mismatches = 0
    for i in indices:
        if not 0 <= i < len(rows):
            raise ValueError(f"row {i} out of range (CSV has {len(rows)} rows)")
        row = rows[i]
        new = run_point(spec_from_row(row))
        old_m, new_m = metrics_of_row(row), metrics_of_row(new)
        same = old_m == new_m and row["error"] == new["error"]
        mismatches += not same
        print(json.dumps({"row": i, "identical": same, "recorded": old_m, "replayed": new_m}))
    return 0 if mismatches == 0 else 1


def cmd_metrics(args):
    x = _load_data(args.input)
    ref = load_image(args.reference)
    out = {"psnr": psnr(x, ref), "ssim": ssim(x, ref)}
    if args.data:
        b = _load_data(args.data)
        op = build(args.sigma_a, b.shape[1], b.shape[0])
        out["sigma_xstar"] = sigma_discrepancy(op, x, b)
        if args.sigma_eta:
            out["re_sigma"] = abs(out["sigma_xstar"] - args.sigma_eta) / args.sigma_eta
    print(json.dumps(_to_jsonable(out)))
    return 0


def make_parser():
    p = argparse.ArgumentParser(prog="cred", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="blur and add noise to a ground-truth image")
    s.add_argument("--input", required=True, help="PGM path or builtin:<name>")
    s.add_argument("--sigma-a", type=float, default=1.0)
    s.add_argument("--sigma-eta", type=float, default=25.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", required=True, help="degraded PGM (clamped, rounded)")
    s.add_argument("--raw-output", help="unquantized data as .npy")
    s.add_argument("--noise-output", help="noise realization as .npy")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("restore", help="restore one image")
    r.add_argument("--input", required=True, help="data (PGM or .npy), or ground truth with --simulate")
    r.add_argument("--simulate", action="store_true", help="degrade --input first, then restore it")
    r.add_argument("--ground-truth", help="reference image for PSNR/SSIM")
    r.add_argument("--output", required=True)
    r.add_argument("--report", help="write the run report as JSON")
    r.add_argument("--solver", choices=("cred", "red", "redpro"), default="cred")
    r.add_argument("--denoiser", type=parse_denoiser, default="tv_rof",
                   help="kind, kind:level-N or kind:<strength>")
    r.add_argument("--scenario", choices=("idealized", "realistic"), default="realistic")
    r.add_argument("--sigma-a", type=float, default=1.0)
    r.add_argument("--sigma-eta", type=float)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--tau", type=float, default=0.98)
    r.add_argument("--gamma", type=float, default=1.01)
    r.add_argument("--beta-r0", type=float, default=1.0)
    r.add_argument("--beta-t0", type=float, default=1.0)
    r.add_argument("--lambda", dest="lam", type=float, default=1.0)
    r.add_argument("--beta", type=float, default=1.0, help="RED-ADMM penalty")
    r.add_argument("--alpha", type=float, default=0.5)
    r.add_argument("--mu", type=float, default=0.5)
    r.add_argument("--decay", type=float, default=1.0)
    r.add_argument("--tol", type=float, default=1e-4)
    r.add_argument("--max-iter", type=int, default=200)
    r.set_defaults(func=cmd_restore)

    w = sub.add_parser("sweep", help="run an experiment described by a JSON config")
    w.add_argument("--config", required=True)
    w.add_argument("--output-dir")
    w.add_argument("--workers", type=int)
    w.add_argument("--seed", type=int)
    w.add_argument("--name")
    w.add_argument("--save-images", action="store_true")
    w.set_defaults(func=cmd_sweep)

    y = sub.add_parser("replay", help="re-run sweep rows and compare their metrics")
    y.add_argument("--csv", required=True)
    g = y.add_mutually_exclusive_group(required=True)
    g.add_argument("--row", type=int, help="0-based data row")
    g.add_argument("--all", action="store_true")
    y.set_defaults(func=cmd_replay)

    m = sub.add_parser("metrics", help="PSNR/SSIM (and sigma_x*) of a restoration")
    m.add_argument("--input", required=True)
    m.add_argument("--reference", required=True)
    m.add_argument("--data", help="observed data, enables sigma_x*")
    m.add_argument("--sigma-a", type=float, default=1.0)
    m.add_argument("--sigma-eta", type=float)
    m.set_defaults(func=cmd_metrics)
    return p


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:
        print(f"cred {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
