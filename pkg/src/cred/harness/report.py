"""Sweep results: CSV round trip, grouped summaries, plot-data files, images."""

import csv
import json
import logging
import math
import os
import re
from dataclasses import dataclass, field

import numpy as np

from ..imagecore import save_pgm
from .runs import METRIC_FIELDS, ROW_FIELDS

__all__ = ["SweepResult", "row_value", "summarize", "series", "spreads", "report",
           "write_csv", "read_csv"]

log = logging.getLogger(__name__)

_INT_FIELDS = {"seed", "iterations"}
_FLOAT_FIELDS = {"strength", "sigma_a", "sigma_eta", "sigma_used", "residual_norm", "delta",
                 *METRIC_FIELDS}


def row_value(row, key):
    """Column value, or a solver parameter when ``key`` is ``param.<name>``."""
    if key.startswith("param."):
        params = row["params"]
        if isinstance(params, str):
            params = json.loads(params)
        return params.get(key[6:])
    return row[key]


def _ok(row):
    return not row.get("error")


def _group(rows, by):
    groups = {}
    for row in rows:
        k = tuple(row_value(row, b) for b in by)
        groups.setdefault(k, []).append(row)
    return groups


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating, np.integer)):
        return _clean(v.item())
    return v


def summarize(rows, by, metrics=METRIC_FIELDS):
    """Per-group count, mean, std, min and max of each metric.

    Groups whose runs all failed are kept as warning entries so that the
    summary always accounts for every group.
    """
    out = []
    for key, members in _group(rows, by).items():
        entry = dict(zip(by, key))
        good = [r for r in members if _ok(r)]
        if not good:
            entry["warning"] = f"empty group: all {len(members)} runs failed"
            out.append(entry)
            continue
        entry["n"] = len(good)
        for m in metrics:
            vals = np.array([r[m] for r in good], dtype=np.float64)
            vals = vals[np.isfinite(vals)]
            if vals.size == 0:
                continue
            entry[f"{m}_mean"] = float(vals.mean())
            entry[f"{m}_std"] = float(vals.std())
            entry[f"{m}_min"] = float(vals.min())
            entry[f"{m}_max"] = float(vals.max())
        out.append(entry)
    return out


def spreads(rows, by=("image", "scenario", "solver", "denoiser", "strength"), metric="psnr"):
    """``max - min`` of ``metric`` across the parameter grid inside each group."""
    out = []
    for key, members in _group([r for r in rows if _ok(r)], by).items():
        vals = [r[metric] for r in members]
        out.append(dict(zip(by, key), n=len(vals), spread=float(np.ptp(vals)),
                        best=float(np.max(vals)), worst=float(np.min(vals))))
    return out


def series(rows, x, y, group=()):
    """Mean and std of ``y`` as a function of ``x`` within each ``group``.

    Returns ``{group_key: ndarray of shape (m, 4)}`` with columns x, mean,
    std, count, sorted by x. Rows without an ``x`` value are skipped.
    """
    out = {}
    usable = [r for r in rows if _ok(r) and row_value(r, x) is not None]
    for gkey, members in _group(usable, tuple(group)).items():
        table = []
        for xkey, pts in sorted(_group(members, (x,)).items()):
            vals = np.array([r[y] for r in pts], dtype=np.float64)
            table.append((float(xkey[0]), vals.mean(), vals.std(), vals.size))
        out[gkey] = np.array(table)
    return out


@dataclass
class SweepResult:
    """Rows of a sweep plus the metadata describing how to summarize them.

    ``meta`` keys: ``name``, ``sweep``, ``group_by`` (summary grouping),
    ``plots`` (list of ``{"name", "x", "y", "group"}``) and ``config``.
    """

    rows: list
    meta: dict = field(default_factory=dict)
    images: dict = field(default_factory=dict)

    @property
    def name(self):
        return self.meta.get("name", "sweep")

    def ok_rows(self):
        return [r for r in self.rows if _ok(r)]

    def summary(self):
        body = {
            "name": self.name,
            "sweep": self.meta.get("sweep"),
            "runs": len(self.rows),
            "failed": sum(1 for r in self.rows if not _ok(r)),
            "groups": summarize(self.rows, self.meta.get("group_by", ("solver",))),
        }
        if self.meta.get("spreads"):
            body["spreads"] = spreads(self.rows, by=tuple(self.meta["spreads"]))
        if "selected" in self.meta:
            body["selected"] = self.meta["selected"]
            body["table"] = summarize(self.meta["selected"],
                                      ("dataset", "sigma_a", "sigma_eta", "solver"),
                                      metrics=("psnr", "ssim"))
        return _jsonable(body)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _clean(obj)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for row in rows:
            w.writerow([_fmt(row[k]) for k in ROW_FIELDS])


def _parse(key, text):
    if key in _INT_FIELDS:
        return int(text)
    if key in _FLOAT_FIELDS:
        return float(text)
    return text


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(ROW_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        return [{k: _parse(k, row[k]) for k in ROW_FIELDS} for row in reader]


def _slug(text):
    return re.sub(r"[^A-Za-z0-9.]+", "_", str(text)).strip("_")


def report(result, out_dir):
    """Write CSV, JSON summary, plot-data files and restored images.

    Returns a dict of the written paths.
    """
    os.makedirs(out_dir, exist_ok=True)
    name = _slug(result.name)
    paths = {"csv": os.path.join(out_dir, f"{name}.csv"),
             "summary": os.path.join(out_dir, f"{name}_summary.json"),
             "plots": [], "images": []}
    write_csv(result.rows, paths["csv"])
    summary = result.summary()
    with open(paths["summary"], "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for g in summary["groups"]:
        if "warning" in g:
            log.warning("%s: %s", name, g["warning"])

    plot_dir = os.path.join(out_dir, "plots")
    for spec in result.meta.get("plots", ()):
        ser = series(result.rows, spec["x"], spec["y"], spec.get("group", ()))
        for gkey, table in ser.items():
            os.makedirs(plot_dir, exist_ok=True)
            label = "_".join(_slug(k) for k in gkey)
            fname = f"{name}_{spec['name']}" + (f"_{label}" if label else "") + ".dat"
            fpath = os.path.join(plot_dir, fname)
            header = f"{spec['x']} {spec['y']}_mean {spec['y']}_std n"
            if gkey:
                header += "\ngroup: " + ", ".join(f"{k}={v}" for k, v in zip(spec.get("group", ()), gkey))
            np.savetxt(fpath, table, fmt="%.10g", header=header)
            paths["plots"].append(fpath)

    if result.images:
        img_dir = os.path.join(out_dir, "images")
        os.makedirs(img_dir, exist_ok=True)
        for i, x in sorted(result.images.items()):
            row = result.rows[i]
            fpath = os.path.join(img_dir, f"{name}_{i:04d}_{_slug(row['image'])}_{row['solver']}.pgm")
            save_pgm(x, fpath)
            paths["images"].append(fpath)
    return paths
