"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s``; the lines are also
collected into the terminal summary.
"""

import json
import math
import os
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import dense_circulant, gaussian_weights

from cred import operators
from cred.cli import main
from cred.denoisers import KINDS, DenoiserSpec, load_presets, preset, rho_red
from cred.harness import ExperimentConfig, report, simulate, sweep_baselines, sweep_penalties, sweep_tau
from cred.harness.report import series, spreads
from cred.metrics import psnr, relative_error
from cred.noise import estimate_sigma
from cred.solvers import CredConfig, RedConfig, cred_solve, project_ball, red_admm_solve
from cred.testimages import load_image

# seeded instance shared by criteria 5 to 8
IMAGE, SIGMA_A, SIGMA_ETA, SEED = "builtin:camera", 1.0, 25.0, 0
WORKERS = min(4, os.cpu_count() or 1)


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def instance_cfg(**kw):
    base = dict(name="acceptance", images=[IMAGE], sigma_a=SIGMA_A, sigma_eta=SIGMA_ETA, seed=SEED,
                denoisers=[{"kind": "tv_rof", "level": "level-1"}])
    base.update(kw)
    return ExperimentConfig(**base)


@pytest.fixture(scope="module")
def instance():
    gt = load_image(IMAGE)
    b, op = simulate(gt, SIGMA_A, SIGMA_ETA, SEED)
    start = time.perf_counter()
    x, rep = cred_solve(op, b, preset("tv_rof"), CredConfig(tau=0.98, sigma_eta=SIGMA_ETA))
    return gt, b, op, x, rep, time.perf_counter() - start


def test_01_operator_oracles():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for sigma in (0.0, 0.25, 0.5, 0.75):
        op = operators.build(sigma, 8, 8)
        r = int(math.ceil(4 * sigma))
        k = gaussian_weights(sigma, r) if sigma > 0 else np.ones((1, 1))
        a = dense_circulant(k, (8, 8))
        for _ in range(5):
            x = rng.uniform(0, 255, (8, 8))
            worst = max(worst, np.abs(op.apply(x).ravel() - a @ x.ravel()).max(),
                        np.abs(op.apply_adjoint(x).ravel() - a.T @ x.ravel()).max())
            for c in (0.0, 0.3, 1.0, 7.5):
                want = np.linalg.solve(c * a.T @ a + np.eye(64), x.ravel())
                worst = max(worst, np.abs(op.solve_regularized_normal(x, c).ravel() - want).max())
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 1.0
    record(1, "operator oracle equivalence", ok, f"max abs error {worst:.2e} (< 1e-9), {elapsed:.3f} s (< 1 s)")
    assert ok


def test_02_adjoint_identity():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        h, w = rng.integers(9, 129, size=2)
        sigma = rng.uniform(0.1, 1.0)
        op = operators.build(sigma, int(w), int(h))
        x, y = rng.standard_normal((2, h, w)) * 50
        lhs = float(np.vdot(op.apply(x), y))
        rhs = float(np.vdot(x, op.apply_adjoint(y)))
        scale = np.linalg.norm(op.apply(x)) * np.linalg.norm(y)
        worst = max(worst, abs(lhs - rhs) / scale)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 5.0
    record(2, "adjoint identity", ok, f"max relative error {worst:.2e} (< 1e-9), {elapsed:.2f} s (< 5 s)")
    assert ok


def test_03_projection_properties():
    rng = np.random.default_rng(3)
    idempotent = True
    lipschitz = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 200))
        v, w = rng.standard_normal((2, n)) * rng.uniform(0.01, 100)
        delta = float(rng.choice([0.0, rng.uniform(0, 2 * np.linalg.norm(v))]))
        p = project_ball(v, delta)
        idempotent &= bool(np.array_equal(project_ball(p, delta), p))
        gap = np.linalg.norm(p - project_ball(w, delta)) - np.linalg.norm(v - w)
        lipschitz = max(lipschitz, gap)
    ok = idempotent and lipschitz <= 1e-12
    record(3, "projection properties", ok,
           f"idempotent={idempotent}, worst Lipschitz violation {max(lipschitz, 0):.1e} (<= 1e-12)")
    assert ok


def test_04_noise_estimator():
    start = time.perf_counter()
    errs = {}
    for sigma in (15.0, 25.0, 35.0, 50.0):
        est = [estimate_sigma(np.random.default_rng(s).standard_normal((256, 256)) * sigma)
               for s in range(10)]
        errs[sigma] = abs(np.mean(est) - sigma) / sigma
    elapsed = time.perf_counter() - start
    ok = max(errs.values()) < 0.05 and elapsed < 10.0
    detail = ", ".join(f"s={s:g}: {e:.2%}" for s, e in errs.items())
    record(4, "noise estimator", ok, f"{detail} (< 5%), {elapsed:.2f} s (< 10 s)")
    assert ok


def test_05_discrepancy_tracking(instance):
    _, _, _, _, rep, elapsed = instance
    re = relative_error(rep.sigma_xstar, SIGMA_ETA)
    ratio = rep.residual_norm / rep.delta
    ok = re <= 0.05 and 0.9 <= ratio <= 1.0001 and elapsed < 60.0
    record(5, "discrepancy tracking", ok,
           f"RE {re:.4f} (<= 0.05), residual/delta {ratio:.5f} (in [0.9, 1.0001]), "
           f"{rep.iterations} iterations, {elapsed:.1f} s (< 60 s)")
    assert ok


def test_06_restoration_gain(instance):
    gt, b, _, x, _, _ = instance
    gain = psnr(x, gt) - psnr(b, gt)
    ok = gain >= 2.0
    record(6, "restoration quality", ok,
           f"PSNR {psnr(x, gt):.2f} dB vs degraded {psnr(b, gt):.2f} dB, gain {gain:.2f} dB (>= 2 dB)")
    assert ok


def test_07_stability_comparison():
    cfg = instance_cfg(sweep="baselines")
    start = time.perf_counter()
    res = sweep_baselines(cfg)
    elapsed = time.perf_counter() - start
    assert not [r for r in res.rows if r["error"]]
    counts = {s: sum(r["solver"] == s for r in res.rows) for s in ("cred", "red", "redpro")}
    assert counts == {"cred": 25, "red": 25, "redpro": 25}
    spread = {e["solver"]: e["spread"] for e in spreads(res.rows, by=("solver",))}
    ok = spread["cred"] < spread["red"] and spread["cred"] < spread["redpro"] and elapsed < 900
    record(7, "stability comparison", ok,
           f"PSNR spread CRED {spread['cred']:.3f} dB, RED {spread['red']:.3f} dB, "
           f"RED-PRO {spread['redpro']:.3f} dB, 75 runs in {elapsed:.0f} s (< 900 s)")
    assert ok


def test_08_gamma_robustness():
    res = sweep_penalties(instance_cfg(sweep="penalties", gammas=[1.0, 1.01, 1.05], workers=WORKERS))
    assert not [r for r in res.rows if r["error"]]
    means = {g["param.gamma"]: g["psnr_mean"] for g in res.summary()["groups"]}
    vary = max(means.values()) - min(means.values())
    ok = len(means) == 3 and vary < 1.0
    detail = ", ".join(f"gamma={g:g}: {m:.3f} dB" for g, m in sorted(means.items()))
    record(8, "gamma robustness", ok, f"mean PSNR {detail}; variation {vary:.3f} dB (< 1 dB)")
    assert ok


def test_09_degenerate_cases():
    parts = []

    # zero radius with the identity operator pins x to b
    gt = load_image(IMAGE)
    b, op = simulate(gt, 0.0, SIGMA_ETA, SEED)
    x, _ = cred_solve(op, b, preset("tv_rof"), CredConfig(tau=0.0, sigma_eta=SIGMA_ETA))
    rel = np.linalg.norm(x - b) / np.linalg.norm(b)
    parts.append((rel < 1e-3, f"delta=0 identity rel. error {rel:.1e} (< 1e-3)"))

    # mean sigma_x* over the default tau grid, three bundled images
    res = sweep_tau(instance_cfg(sweep="tau", images=["builtin:camera", "builtin:coins", "builtin:brick"],
                                 workers=WORKERS))
    assert not [r for r in res.rows if r["error"]]
    tab = series(res.rows, "param.tau", "sigma_xstar")[()]
    drops = [(a[0], c[0]) for a, c in zip(tab, tab[1:]) if c[1] < a[1]]
    means = " ".join(f"{t:g}:{m:.2f}" for t, m, _, _ in tab)
    parts.append((not drops, f"tau monotonicity [{means}]"
                  + (f" decreases at {', '.join(f'{a:g}->{c:g}' for a, c in drops)}" if drops else "")))

    # constant images are fixed points of every denoiser preset
    worst = 0.0
    for kind in KINDS:
        for level in load_presets()[kind]:
            for value in (0.0, 37.5, 255.0):
                c = np.full((32, 32), value)
                worst = max(worst, np.abs(preset(kind, level)(c) - c).max())
    parts.append((worst < 1e-9, f"constant fixed points max deviation {worst:.1e}"))

    # lambda = 0 reduces to least squares
    b, op = simulate(gt, 0.5, SIGMA_ETA, SEED)
    x, _ = red_admm_solve(op, b, preset("tv_rof"),
                          RedConfig(lam=0.0, beta=1e-2, tol=1e-12, max_iter=200))
    res_rel = np.linalg.norm(op.apply(x) - b) / np.linalg.norm(b)
    parts.append((res_rel < 1e-6, f"RED lambda=0 relative residual {res_rel:.1e} (< 1e-6)"))

    ok = all(p for p, _ in parts)
    record(9, "degenerate cases", ok, "; ".join(("" if p else "FAILED ") + d for p, d in parts))
    assert ok


def test_10_replay_determinism(tmp_path, capsys):
    cfg = instance_cfg(
        name="replay", sweep="baselines", images=["builtin:shapes", "builtin:coins"],
        scenarios=["idealized", "realistic"], lambdas=[0.5, 3.0], alphas=[0.4], mus=[0.6],
        beta_grid=[0.6], denoisers=[{"kind": "tv_rof", "level": "level-1"},
                                    {"kind": "median", "level": "level-1"}],
        cred={"max_iter": 40}, red={"max_iter": 40}, redpro={"max_iter": 40}, workers=2)
    result = sweep_baselines(cfg)
    paths = report(result, tmp_path)
    capsys.readouterr()
    code = main(["replay", "--csv", paths["csv"], "--all"])
    # 2 images x 2 scenarios x 2 denoisers x (2 RED + 1 RED-PRO + 1 CRED)
    lines = [json.loads(s) for s in capsys.readouterr().out.strip().splitlines()]
    same = sum(x["identical"] for x in lines)
    ok = code == 0 and same == len(lines) == len(result.rows) == 32
    record(10, "replay determinism", ok, f"{same}/{len(lines)} rows reproduced byte-identically")
    assert ok


def test_11_gradient_check():
    rng = np.random.default_rng(11)
    h = 1e-2
    worst = 0.0
    for sigma in (load_presets()["gaussian_smooth"].values()):
        f = DenoiserSpec("gaussian_smooth", sigma)
        for _ in range(3):
            x = rng.uniform(0, 255, (16, 16))
            fd = np.empty_like(x)
            for idx in np.ndindex(x.shape):
                e = np.zeros_like(x)
                e[idx] = h
                fd[idx] = (rho_red(f, x + e) - rho_red(f, x - e)) / (2 * h)
            worst = max(worst, np.abs(fd - (x - f(x))).max())
    ok = worst < 1e-5
    record(11, "gradient check", ok, f"max abs error {worst:.1e} (< 1e-5)")
    assert ok
