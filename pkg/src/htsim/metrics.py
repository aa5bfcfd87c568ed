# Shared observable extraction and CSV/JSON serialization. CSV schemas:
#   series:    t,nX,nZ,ndB,ndA,ameas,F0,Fplus
#   histogram: bin_lo,bin_hi,count
#   scan:      gx,gz,nf_mean
#   tau:       L,tau_mean,tau_se,censored_frac
# All floats are written with repr-level precision so round trips are
# lossless.

from __future__ import annotations

import csv
import hashlib
import json
import os

import numpy as np

from .flags import FlagState

FMT = "%.17g"


def flag_fidelity(state: FlagState) -> int:
    """1 iff every flag is lowered; the ensemble mean of this projector
    bounds the full recovery fidelity from below."""
    return int(not state.nX.any() and not state.nZ.any())


def delta_density(t, nx, nz, window: float) -> float:
    """Change of the combined density (nX+nZ)/2 over the trailing window."""
    t = np.asarray(t)
    tot = (np.asarray(nx) + np.asarray(nz)) / 2.0
    tf = t[-1]
    if window <= 0 or tf - window < t[0] - 1e-12:
        raise ValueError("window outside the series range")
    i = int(np.searchsorted(t, tf - window, side="left"))
    return float(tot[-1] - tot[i])


def density_histogram(densities, n_edges: int, bins: int = 50):
    """Histogram of per-trajectory densities plus the mean conditioned on
    trajectories that have not saturated."""
    densities = np.asarray(densities, dtype=float)
    if densities.size < 2:
        raise ValueError("need at least two trajectories")
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(densities, bins=edges)
    alive = densities < 1.0 - 1.0 / (2 * n_edges)
    conditioned = float(densities[alive].mean()) if alive.any() else float("nan")
    return edges, counts, conditioned


def crossing_time(t, series, target: float):
    """First time the series reaches the target value (linear grid lookup);
    None if never attained."""
    s = np.asarray(series)
    hit = np.nonzero(s >= target)[0]
    if hit.size == 0:
        return None, None
    i = int(hit[0])
    return float(np.asarray(t)[i]), i


# ----------------------------------------------------------------------
def write_csv(path, header, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return FMT % x
    return x


def read_csv(path):
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        rows = [[_parse(x) for x in row] for row in r]
    return header, rows


def _parse(x):
    try:
        return int(x)
    except ValueError:
        pass
    try:
        return float(x)
    except ValueError:
        return x


def write_series_csv(path, t, nx, nz, ndb=None, nda=None, ameas=None,
                     f0=None, fplus=None):
    n = len(t)

    def col(c):
        if c is None:
            return ["" for _ in range(n)]
        return list(c)

    rows = zip(t, nx, nz, col(ndb), col(nda), col(ameas), col(f0), col(fplus))
    write_csv(path, ["t", "nX", "nZ", "ndB", "ndA", "ameas", "F0", "Fplus"],
              rows)


def config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def write_manifest(path, config: dict, outputs: list, geometry_hash: str):
    data = {
        "config": config,
        "config_hash": config_hash(config),
        "geometry_hash": geometry_hash,
        "outputs": outputs,
        "format_version": 1,
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True, default=str)
    return data


def geometry_hash(g) -> str:
    h = hashlib.sha256()
    h.update(g.to_json().encode())
    return h.hexdigest()[:16]


def fit_log(L_values, tau_values):
    """Least squares of tau = alpha * log(L / L0); returns
    (alpha, L0, r_squared)."""
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
    """Least squares of y = a * x^b on log-log axes; returns (a, b, r2)."""
    lx = np.log(np.asarray(x_values, dtype=float))
    ly = np.log(np.asarray(y_values, dtype=float))
    coef = np.polyfit(lx, ly, 1)
    b, la = float(coef[0]), float(coef[1])
    pred = b * lx + la
    ss_res = float(((ly - pred) ** 2).sum())
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(np.exp(la)), b, r2
