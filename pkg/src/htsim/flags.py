# Classical erasure-flag dynamics: the autonomous marginal of the full
# dissipative evolution. Used standalone for large-size transition, recovery
# and cluster studies, and embedded in the quantum simulators.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .lattice import LatticeGeometry


@dataclass
class RatesConfig:
    eta: float = 1.0
    gamma_x: float = 0.0
    gamma_z: float = 0.0
    phi_e: float = 1.0
    model: str = "toric"  # "toric" | "d4"

    def __post_init__(self):
        if min(self.eta, self.gamma_x, self.gamma_z) < 0:
            raise ValueError("rates must be non-negative")
        if not 0.0 <= self.phi_e <= 1.0:
            raise ValueError("phi_e must lie in [0, 1]")
        if self.model not in ("toric", "d4"):
            raise ValueError("model must be 'toric' or 'd4'")

    @property
    def total(self) -> float:
        return self.eta + 2 * self.gamma_x / 3 + self.gamma_z / 3

    @property
    def dt(self) -> float:
        """Time advanced by one Monte Carlo sweep."""
        return 1.0 / self.total

    def cumulative(self) -> np.ndarray:
        """Cumulative branch probabilities for one site event:
        4 heralded-noise branches, 3 unheralded, X correction;
        the Z correction is the remaining tail."""
        c0 = self.dt
        h = c0 * self.eta * self.phi_e / 4
        uh = c0 * self.eta * (1 - self.phi_e) / 3
        xc = 2 * c0 * self.gamma_x / 3
        cum = np.array([h, 2 * h, 3 * h, 4 * h,
                        4 * h + uh, 4 * h + 2 * uh, 4 * h + 3 * uh,
                        4 * h + 3 * uh + xc], dtype=np.float64)
        return cum


@dataclass
class FlagState:
    nX: np.ndarray
    nZ: np.ndarray

    @classmethod
    def empty(cls, g: LatticeGeometry) -> "FlagState":
        return cls(np.zeros(g.n_edges, dtype=np.uint8),
                   np.zeros(g.n_edges, dtype=np.uint8))

    def copy(self) -> "FlagState":
        return FlagState(self.nX.copy(), self.nZ.copy())

    def density(self):
        return float(self.nX.mean()), float(self.nZ.mean())


def _dummy_frame(g):
    z = np.zeros(1, dtype=np.uint8)
    return (np.zeros(1, dtype=np.uint8), np.zeros(1, dtype=np.uint8),
            np.zeros(1, dtype=np.uint8), np.zeros(1, dtype=np.uint8),
            np.zeros(4, dtype=np.uint8), z, z, z, z)


def kernel_tables(g: LatticeGeometry):
    i32 = np.int32
    interior = g.interior if g.colors == 3 else np.zeros((g.n_plaquettes, 6), dtype=i32)
    return (g.edge2vert.astype(i32), g.edge2plaq.astype(i32),
            g.star.astype(i32), g.boundary.astype(i32), interior.astype(i32),
            (g.vertex_sublattice == 1).astype(np.uint8),
            g.xloop_up.astype(i32), g.xloop_left.astype(i32),
            g.xloop_third.astype(i32), g.xloop_outer.astype(i32),
            g.zloop_ext.astype(i32),
            g.leaf_z_heralds.astype(i32), g.loop_z_heralds.astype(i32))


def run_flag_sweeps(state: FlagState, g: LatticeGeometry, r: RatesConfig,
                    rng: np.random.Generator, nsweeps: int,
                    stop_obs: int = 0, stop_threshold: float = -1.0):
    """Advance the flag state by nsweeps sweeps; returns per-sweep densities
    (nX, nZ, ameas_proposals) and the sweep index of an early stop (-1 if
    none)."""
    mode = K.FLAGS_D4 if r.model == "d4" else K.FLAGS_TORIC
    tables = kernel_tables(g)
    frame = _dummy_frame(g)
    rec_nx = np.zeros(nsweeps, dtype=np.float64)
    rec_nz = np.zeros(nsweeps, dtype=np.float64)
    rec_nb = np.zeros(1, dtype=np.float64)
    rec_na = np.zeros(1, dtype=np.float64)
    rec_am = np.zeros(nsweeps, dtype=np.float64)
    actions = np.zeros((1, 3), dtype=np.int32)
    _, done = K.event_loop(mode, nsweeps, rng, state.nX, state.nZ, *frame,
                           *tables, r.cumulative(),
                           rec_nx, rec_nz, rec_nb, rec_na, rec_am,
                           stop_obs, stop_threshold, actions)
    return rec_nx, rec_nz, rec_am, int(done)


def flag_sweep(state: FlagState, g: LatticeGeometry, r: RatesConfig,
               rng: np.random.Generator) -> FlagState:
    """One Monte Carlo sweep of the flag marginal (in place)."""
    run_flag_sweeps(state, g, r, rng, 1)
    return state


def cluster_sizes(state: FlagState, g: LatticeGeometry, kind: str,
                  color: int = 0) -> dict[int, int]:
    """Histogram of connected flagged-edge cluster sizes of one color.
    X flags are adjacent when sharing a same-color vertex, Z flags when
    sharing a same-color plaquette."""
    if kind == "X":
        arr, site_table, members = state.nX, g.edge2vert, g.star
    elif kind == "Z":
        arr, site_table, members = state.nZ, g.edge2plaq, g.boundary
    else:
        raise ValueError("kind must be 'X' or 'Z'")
    flagged = [e for e in np.nonzero(arr)[0] if g.edge_color[e] == color]
    if not flagged:
        return {}
    parent = {int(e): int(e) for e in flagged}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    fset = set(parent)
    for e in flagged:
        for s in site_table[e]:
            for e2 in members[s]:
                e2 = int(e2)
                if e2 in fset and e2 != int(e):
                    ra, rb = find(int(e)), find(e2)
                    if ra != rb:
                        parent[ra] = rb
    sizes: dict[int, int] = {}
    roots: dict[int, int] = {}
    for e in flagged:
        r0 = find(int(e))
        roots[r0] = roots.get(r0, 0) + 1
    for n in roots.values():
        sizes[n] = sizes.get(n, 0) + 1
    return sizes


def largest_cluster(state: FlagState, g: LatticeGeometry, kind: str,
                    color: int = 0) -> int:
    h = cluster_sizes(state, g, kind, color)
    return max(h) if h else 0


def time_to_density(r: RatesConfig, g: LatticeGeometry, threshold: float,
                    trials: int, seed: int, horizon: int = 10_000,
                    kind: str = "X"):
    """Per trial, the first sweep time at which the monitored flag density
    crosses the threshold. Returns (tau array in time units, censored mask).
    Censored trials report the horizon time."""
    if not 0.0 < threshold <= 1.0 or threshold == 0.0:
        if threshold == 0.0:
            return np.zeros(trials), np.zeros(trials, dtype=bool)
        raise ValueError("threshold must lie in (0, 1]")
    obs = {"X": 0, "Z": 1, "mean": 2}[kind]
    taus = np.zeros(trials, dtype=np.float64)
    censored = np.zeros(trials, dtype=bool)
    for i in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        st = FlagState.empty(g)
        _, _, _, done = run_flag_sweeps(st, g, r, rng, horizon,
                                        stop_obs=obs, stop_threshold=threshold)
        if done < 0:
            censored[i] = True
            taus[i] = horizon * r.dt
        else:
            taus[i] = (done + 1) * r.dt
    return taus, censored
