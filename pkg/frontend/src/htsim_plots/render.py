# Regenerate figure analogs from simulator CSV output. Strictly read-only
# over its inputs; any fit overlay is recomputed from the CSV columns with
# the same least-squares transform the simulator reports, never hard-coded.

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("heatmap", "timeseries", "tau-vs-L", "histogram", "fit-overlay")

SCHEMAS = {
    "heatmap": ["gx", "gz", "nf_mean"],
    "timeseries": ["t", "nX", "nZ"],
    "tau-vs-L": ["L", "tau_mean", "tau_se", "censored_frac"],
    "histogram": ["bin_lo", "bin_hi", "count"],
    "fit-overlay": ["phi_e", "t_half"],
}


class SchemaError(ValueError):
    pass


@dataclass
class FigureSpec:
    kind: str
    inputs: list
    output: str
    title: str = ""
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        for path in self.inputs:
            if not os.path.exists(path):
                raise FileNotFoundError(path)


def load_csv(path, expected_prefix):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r, None)
        rows = list(r)
    if header is None or not rows:
        raise SchemaError(f"{path}: empty input")
    if header[:len(expected_prefix)] != expected_prefix:
        raise SchemaError(
            f"{path}: expected columns {expected_prefix}, found "
            f"{header[:len(expected_prefix)]} "
            f"(missing: {[c for c in expected_prefix if c not in header]}, "
            f"unexpected: {[c for c in header[:len(expected_prefix)] if c not in expected_prefix]})")
    cols = {name: [] for name in header}
    for row in rows:
        for name, val in zip(header, row):
            cols[name].append(float(val) if val not in ("", None) else np.nan)
    return {k: np.array(v) for k, v in cols.items()}


def fit_log(L_values, tau_values):
    x = np.log(np.asarray(L_values, dtype=float))
    y = np.asarray(tau_values, dtype=float)
    coef = np.polyfit(x, y, 1)
    alpha, b = float(coef[0]), float(coef[1])
    pred = alpha * x + b
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    L0 = float(np.exp(-b / alpha)) if alpha != 0 else float("nan")
    return alpha, L0, r2


def fit_power(x_values, y_values):
    lx = np.log(np.asarray(x_values, dtype=float))
    ly = np.log(np.asarray(y_values, dtype=float))
    coef = np.polyfit(lx, ly, 1)
    b, la = float(coef[0]), float(coef[1])
    pred = b * lx + la
    ss_res = float(((ly - pred) ** 2).sum())
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(np.exp(la)), b, r2


def _save(fig, spec):
    os.makedirs(os.path.dirname(os.path.abspath(spec.output)), exist_ok=True)
    fig.savefig(spec.output, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return spec.output


def render_heatmap(spec):
    data = load_csv(spec.inputs[0], SCHEMAS["heatmap"])
    gx = np.unique(data["gx"])
    gz = np.unique(data["gz"])
    grid = np.full((len(gx), len(gz)), np.nan)
    ix = {v: i for i, v in enumerate(gx)}
    iz = {v: i for i, v in enumerate(gz)}
    for x, z, v in zip(data["gx"], data["gz"], data["nf_mean"]):
        grid[ix[x], iz[z]] = v
    fig, ax = plt.subplots(figsize=(5.4, 4.4))
    im = ax.pcolormesh(gx, gz, grid.T, shading="nearest", cmap="viridis",
                       vmin=0.0, vmax=1.0)
    fig.colorbar(im, ax=ax, label="late-time combined flag density")
    ax.set_xlabel("X correction rate")
    ax.set_ylabel("Z correction rate")
    ax.set_title(spec.title or "steady-state flag density")
    return _save(fig, spec)


def render_timeseries(spec):
    fig, ax = plt.subplots(figsize=(5.8, 4.2))
    for path in spec.inputs:
        data = load_csv(path, SCHEMAS["timeseries"])
        label = os.path.splitext(os.path.basename(path))[0]
        ax.plot(data["t"], data["nX"], label=f"{label}: X flags")
        ax.plot(data["t"], data["nZ"], label=f"{label}: Z flags", ls="--")
        for extra, style in (("ndB", ":"), ("ndA", "-.")):
            if extra in data and not np.all(np.isnan(data[extra])):
                ax.plot(data["t"], data[extra], ls=style,
                        label=f"{label}: {extra}")
    ax.set_xlabel("time")
    ax.set_ylabel("density")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7)
    ax.set_title(spec.title or "density evolution")
    return _save(fig, spec)


def render_tau_vs_L(spec):
    data = load_csv(spec.inputs[0], SCHEMAS["tau-vs-L"])
    fig, ax = plt.subplots(figsize=(5.4, 4.2))
    L = data["L"]
    tau = data["tau_mean"]
    ax.errorbar(L, tau, yerr=data["tau_se"], marker="o", ls="none",
                label="measured")
    alpha, L0, r2 = fit_log(L, tau)
    xs = np.linspace(L.min(), L.max(), 200)
    ax.plot(xs, alpha * np.log(xs / L0),
            label=f"fit a*log(L/L0): a={alpha:.4g}, L0={L0:.4g}, R2={r2:.3f}")
    ax.set_xscale("log")
    ax.set_xlabel("linear size L")
    ax.set_ylabel("recovery time")
    ax.legend(fontsize=8)
    ax.set_title(spec.title or "recovery time vs size")
    fig._fit_params = (alpha, L0, r2)
    out = _save(fig, spec)
    return out, (alpha, L0, r2)


def render_histogram(spec):
    fig, ax = plt.subplots(figsize=(5.4, 4.2))
    for path in spec.inputs:
        data = load_csv(path, SCHEMAS["histogram"])
        centers = (data["bin_lo"] + data["bin_hi"]) / 2
        width = (data["bin_hi"] - data["bin_lo"]).mean()
        ax.bar(centers, data["count"], width=width * 0.95, alpha=0.6,
               label=os.path.basename(path))
    ax.set_xlabel("flag density")
    ax.set_ylabel("trajectories")
    ax.legend(fontsize=8)
    ax.set_title(spec.title or "density distribution")
    return _save(fig, spec)


def render_fit_overlay(spec):
    data = load_csv(spec.inputs[0], SCHEMAS["fit-overlay"])
    keep = np.isfinite(data["t_half"])
    x = 1.0 - data["phi_e"][keep]
    y = data["t_half"][keep]
    a, b, r2 = fit_power(x, y)
    fig, ax = plt.subplots(figsize=(5.4, 4.2))
    ax.plot(x, y, "o", label="measured half-life")
    xs = np.geomspace(x.min(), x.max(), 200)
    ax.plot(xs, a * xs ** b, label=f"fit a*x^b: a={a:.4g}, b={b:.4g}, R2={r2:.3f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("unheralded fraction")
    ax.set_ylabel("fidelity half-life")
    ax.legend(fontsize=8)
    ax.set_title(spec.title or "lifetime vs heralding")
    out = _save(fig, spec)
    return out, (a, b, r2)


_RENDERERS = {
    "heatmap": render_heatmap,
    "timeseries": render_timeseries,
    "tau-vs-L": render_tau_vs_L,
    "histogram": render_histogram,
    "fit-overlay": render_fit_overlay,
}


def render(spec: FigureSpec):
    return _RENDERERS[spec.kind](spec)


_DEFAULT_INPUT = {
    "heatmap": "scan.csv",
    "timeseries": "series.csv",
    "tau-vs-L": "tau.csv",
    "histogram": "hist.csv",
    "fit-overlay": "halflife.csv",
}


def main(argv=None):
    ap = argparse.ArgumentParser(prog="htsim-plots", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("render")
    p.add_argument("--figure", choices=KINDS, required=True)
    p.add_argument("--in", dest="indir", required=True,
                   help="input directory or CSV file")
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")
    args = ap.parse_args(argv)
    path = args.indir
    if os.path.isdir(path):
        path = os.path.join(path, _DEFAULT_INPUT[args.figure])
    spec = FigureSpec(args.figure, [path], args.out, title=args.title)
    res = render(spec)
    if isinstance(res, tuple):
        out, params = res
        print(f"wrote {out}; fit parameters {params}")
    else:
        print(f"wrote {res}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
