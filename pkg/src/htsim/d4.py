# Full trajectory engine for the three-color model: the flag dynamics runs
# in the jitted kernel, which emits the actions touching the quantum state
# (noise Paulis and pattern-matched correction moves); those are replayed
# against the quasi-stabilizer tableau in order. Three independent random
# streams keep trajectories bitwise independent of chunking: one for the
# event draws, one for measurement outcomes, one for decoding.

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .decoder import decode_d4
from .flags import FlagState, RatesConfig, kernel_tables
from .lattice import LatticeGeometry
from .tableau import QuasiStabilizerTableau, tableau_init


@dataclass
class TrajectoryConfig:
    L: int
    rates: RatesConfig
    basis: str = "zero"
    t_final: int = 100          # sweeps
    seed: int = 0
    record_stride: int = 10
    decode_stride: int = 0      # 0 disables in-run decoding

    def __post_init__(self):
        if self.t_final < 1:
            raise ValueError("t_final must be at least one sweep")
        if self.record_stride < 1 or (self.decode_stride < 0):
            raise ValueError("strides must be positive")


def _streams(seed):
    ss = seed if isinstance(seed, np.random.SeedSequence) else \
        np.random.SeedSequence(seed)
    ev, coin, dec = ss.spawn(3)
    return (np.random.default_rng(ev), np.random.default_rng(coin),
            np.random.default_rng(dec))


def replay_actions(t: QuasiStabilizerTableau, g: LatticeGeometry,
                   actions: np.ndarray, nact: int,
                   rng_coin: np.random.Generator):
    bnd = g.boundary
    for i in range(nact):
        kind = actions[i, 0]
        a = int(actions[i, 1])
        b = int(actions[i, 2])
        if kind == K.ACT_X:
            t.apply_pauli_x(a)
        elif kind == K.ACT_Z:
            t.apply_pauli_z(a)
        elif kind == K.ACT_ZX:
            t.apply_pauli_x(a)
            t.apply_pauli_z(a)
        elif kind == K.ACT_XLEAF or kind == K.ACT_XLOOP:
            if t.vsign[a] < 0:
                t.apply_pauli_x(b)
        elif kind == K.ACT_ZLEAF:
            if t.measure_plaquette(a, rng_coin) < 0:
                t.apply_pauli_z(b)
        elif kind == K.ACT_ZLOOP:
            if t.measure_plaquette(a, rng_coin) < 0:
                t.apply_pauli_z(int(bnd[a, K._ZL_PUSH[b]]))


def d4_event(t: QuasiStabilizerTableau, flags: FlagState, g: LatticeGeometry,
             r: RatesConfig, rng_event, rng_coin):
    """Single site event (reference path mirroring kernel + replay)."""
    E = g.n_edges
    j = int(rng_event.integers(0, E))
    b = int(rng_event.integers(0, 2))
    u = float(rng_event.random())
    cum = r.cumulative()
    if u < cum[3]:
        flags.nX[j] = 1
        flags.nZ[j] = 1
        if u < cum[0]:
            t.apply_pauli_x(j)
        elif u < cum[1]:
            t.apply_pauli_z(j)
        elif u < cum[2]:
            t.apply_pauli_x(j)
            t.apply_pauli_z(j)
    elif u < cum[6]:
        if u < cum[4]:
            t.apply_pauli_x(j)
        elif u < cum[5]:
            t.apply_pauli_z(j)
        else:
            t.apply_pauli_x(j)
            t.apply_pauli_z(j)
    elif u < cum[7]:
        v = int(g.edge2vert[j, b])
        star = g.star[v]
        flagged = [int(e) for e in star if flags.nX[e]]
        if len(flagged) == 1:
            k = flagged[0]
            flags.nX[k] = 0
            for h in g.leaf_z_heralds[k]:
                flags.nZ[h] = 1
            if t.measure_vertex(v) < 0:
                t.apply_pauli_x(k)
        elif g.vertex_sublattice[v] == 1 and flags.nX[g.xloop_up[v]] \
                and flags.nX[g.xloop_left[v]] and not flags.nX[g.xloop_third[v]]:
            up = int(g.xloop_up[v])
            flags.nX[up] = 0
            flags.nX[int(g.xloop_left[v])] = 0
            flags.nX[g.xloop_outer[v]] = 1
            for h in g.loop_z_heralds[v]:
                flags.nZ[h] = 1
            if t.measure_vertex(v) < 0:
                t.apply_pauli_x(up)
    else:
        p = int(g.edge2plaq[j, b])
        if any(flags.nX[e] for e in g.interior[p]):
            return
        bnd = g.boundary[p]
        flagged = [int(e) for e in bnd if flags.nZ[e]]
        if len(flagged) == 1:
            k = flagged[0]
            flags.nZ[k] = 0
            if t.measure_plaquette(p, rng_coin) < 0:
                t.apply_pauli_z(k)
        else:
            f = tuple(int(flags.nZ[e]) for e in bnd[:3])
            rest = any(flags.nZ[e] for e in bnd[3:])
            pat = K._zl_pattern(*f)
            if not rest and pat >= 0:
                for sl in K._ZL_LOWER[pat]:
                    if sl >= 0:
                        flags.nZ[bnd[sl]] = 0
                for sl in K._ZL_RAISE[pat]:
                    if sl >= 0:
                        flags.nZ[g.zloop_ext[p, sl]] = 1
                if t.measure_plaquette(p, rng_coin) < 0:
                    t.apply_pauli_z(int(bnd[K._ZL_PUSH[pat]]))


@dataclass
class SeriesRecord:
    t: np.ndarray
    nx: np.ndarray
    nz: np.ndarray
    ndb: np.ndarray
    nda: np.ndarray
    ameas: np.ndarray
    fid_t: np.ndarray = field(default_factory=lambda: np.zeros(0))
    fid: np.ndarray = field(default_factory=lambda: np.zeros(0))
    collapse: int = 0


def defect_density_b(t: QuasiStabilizerTableau) -> float:
    return float((t.vsign < 0).mean())


def defect_density_a(t: QuasiStabilizerTableau) -> float:
    g = t.g
    cache: dict = {}
    acc = 0.0
    for p in range(g.n_plaquettes):
        acc += (1.0 - t.plaquette_expectation(p, cache)) / 2.0
    return acc / g.n_plaquettes


def run_trajectory(cfg: TrajectoryConfig, g: LatticeGeometry) -> SeriesRecord:
    if g.L != cfg.L or g.colors != 3:
        raise ValueError("geometry does not match the configuration")
    rng_event, rng_coin, rng_dec = _streams(cfg.seed)
    t = tableau_init(g, cfg.basis)
    flags = FlagState.empty(g)
    tables = kernel_tables(g)
    frame = np.zeros(1, dtype=np.uint8)
    dummy_frame = (frame.copy(), frame.copy(), frame.copy(), frame.copy(),
                   np.zeros(4, dtype=np.uint8), frame, frame, frame, frame)
    nsweeps = cfg.t_final
    stride = cfg.record_stride
    nrec = (nsweeps + stride - 1) // stride
    out = SeriesRecord(
        t=np.zeros(nrec), nx=np.zeros(nrec), nz=np.zeros(nrec),
        ndb=np.zeros(nrec), nda=np.zeros(nrec), ameas=np.zeros(nrec))
    fid_t, fid = [], []
    E, P = g.n_edges, g.n_plaquettes
    rec_nb = np.zeros(1, dtype=np.float64)
    rec_na = np.zeros(1, dtype=np.float64)
    done = 0
    k = 0
    next_decode = cfg.decode_stride if cfg.decode_stride else nsweeps + 1
    while done < nsweeps:
        chunk = min(stride, nsweeps - done)
        if done + chunk > next_decode:
            chunk = next_decode - done
        rec_nx = np.zeros(chunk, dtype=np.float64)
        rec_nz = np.zeros(chunk, dtype=np.float64)
        rec_am = np.zeros(chunk, dtype=np.float64)
        actions = np.zeros((chunk * E + 4, 3), dtype=np.int32)
        nact, _ = K.event_loop(K.ACTIONS_D4, chunk, rng_event,
                               flags.nX, flags.nZ, *dummy_frame, *tables,
                               cfg.rates.cumulative(),
                               rec_nx, rec_nz, rec_nb, rec_na, rec_am,
                               0, -1.0, actions)
        replay_actions(t, g, actions, nact, rng_coin)
        done += chunk
        if done >= (k + 1) * stride or done == nsweeps:
            out.t[k] = done * cfg.rates.dt
            out.nx[k] = rec_nx[chunk - 1]
            out.nz[k] = rec_nz[chunk - 1]
            out.ndb[k] = defect_density_b(t)
            out.nda[k] = defect_density_a(t)
            out.ameas[k] = float(rec_am.mean()) / P
            k += 1
        if done == next_decode:
            res = decode_d4(t.clone(), g, rng_dec)
            fid_t.append(done * cfg.rates.dt)
            fid.append(res["indicator"])
            next_decode += cfg.decode_stride
    out.t, out.nx, out.nz = out.t[:k], out.nx[:k], out.nz[:k]
    out.ndb, out.nda, out.ameas = out.ndb[:k], out.nda[:k], out.ameas[:k]
    out.fid_t = np.array(fid_t)
    out.fid = np.array(fid, dtype=float)
    out.collapse = t.collapse_count
    return out, t, flags
