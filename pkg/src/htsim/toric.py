# Toric-code simulator in the Pauli frame. The dynamics is diagonal in the
# stabilizer basis, so a classical record of the accumulated X/Z errors plus
# incrementally maintained check parities is exact.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .flags import FlagState, RatesConfig, kernel_tables
from .lattice import LatticeGeometry
from .matching import mwpm


@dataclass
class PauliFrame:
    ex: np.ndarray          # accumulated X errors per edge
    ez: np.ndarray
    bdef: np.ndarray        # vertex check parity (1 = defect)
    adef: np.ndarray        # plaquette check parity
    logpar: np.ndarray      # flip bits for (Z_H, Z_V, X_H, X_V)
    basis: str

    def copy(self) -> "PauliFrame":
        return PauliFrame(self.ex.copy(), self.ez.copy(), self.bdef.copy(),
                          self.adef.copy(), self.logpar.copy(), self.basis)


def logical_masks(g: LatticeGeometry):
    E = g.n_edges
    masks = np.zeros((4, E), dtype=np.uint8)
    for i, sup in enumerate((g.zlog_h[0], g.zlog_v[0], g.xlog_h[0], g.xlog_v[0])):
        masks[i, list(sup)] = 1
    return masks


def toric_init(g: LatticeGeometry, basis: str = "zero"):
    if g.colors != 1:
        raise ValueError("toric frame runs on the single-color geometry")
    if basis not in ("zero", "plus"):
        raise ValueError("basis must be 'zero' or 'plus'")
    frame = PauliFrame(
        np.zeros(g.n_edges, dtype=np.uint8), np.zeros(g.n_edges, dtype=np.uint8),
        np.zeros(g.n_vertices, dtype=np.uint8), np.zeros(g.n_plaquettes, dtype=np.uint8),
        np.zeros(4, dtype=np.uint8), basis)
    return frame, FlagState.empty(g)


def _apply_x(frame, g, masks, j):
    frame.ex[j] ^= 1
    frame.bdef[g.edge2vert[j]] ^= 1
    frame.logpar[0] ^= masks[0, j]
    frame.logpar[1] ^= masks[1, j]


def _apply_z(frame, g, masks, j):
    frame.ez[j] ^= 1
    frame.adef[g.edge2plaq[j]] ^= 1
    frame.logpar[2] ^= masks[2, j]
    frame.logpar[3] ^= masks[3, j]


def toric_event(frame: PauliFrame, flags: FlagState, g: LatticeGeometry,
                r: RatesConfig, rng: np.random.Generator, masks=None):
    """One site event (reference path; the bulk simulation runs in the
    jitted kernel with identical draw order). Returns a trace record."""
    if masks is None:
        masks = logical_masks(g)
    E = g.n_edges
    j = int(rng.integers(0, E))
    b = int(rng.integers(0, 2))
    u = float(rng.random())
    cum = r.cumulative()
    trace = {"edge": j, "choice": b}

    if u < cum[3]:
        flags.nX[j] = 1
        flags.nZ[j] = 1
        if u < cum[0]:
            _apply_x(frame, g, masks, j)
            trace["op"] = "noise_x"
        elif u < cum[1]:
            _apply_z(frame, g, masks, j)
            trace["op"] = "noise_z"
        elif u < cum[2]:
            _apply_z(frame, g, masks, j)
            _apply_x(frame, g, masks, j)
            trace["op"] = "noise_zx"
        else:
            trace["op"] = "noise_flag"
    elif u < cum[6]:
        if u < cum[4]:
            _apply_x(frame, g, masks, j)
            trace["op"] = "unheralded_x"
        elif u < cum[5]:
            _apply_z(frame, g, masks, j)
            trace["op"] = "unheralded_z"
        else:
            _apply_z(frame, g, masks, j)
            _apply_x(frame, g, masks, j)
            trace["op"] = "unheralded_zx"
    elif u < cum[7]:
        v = int(g.edge2vert[j, b])
        star = g.star[v]
        flagged = [int(e) for e in star if flags.nX[e]]
        if len(flagged) == 1:
            k = flagged[0]
            flags.nX[k] = 0
            trace["op"] = "x_leaf"
            trace["vertex"] = v
            trace["measured_b"] = 1 - 2 * int(frame.bdef[v])
            if frame.bdef[v]:
                _apply_x(frame, g, masks, k)
                trace["pauli"] = k
        elif g.vertex_sublattice[v] == 1 and flags.nX[g.xloop_up[v]] \
                and flags.nX[g.xloop_left[v]] and not flags.nX[g.xloop_third[v]]:
            up = int(g.xloop_up[v])
            flags.nX[up] = 0
            flags.nX[int(g.xloop_left[v])] = 0
            flags.nX[g.xloop_outer[v]] = 1
            trace["op"] = "x_loop"
            trace["vertex"] = v
            trace["measured_b"] = 1 - 2 * int(frame.bdef[v])
            if frame.bdef[v]:
                _apply_x(frame, g, masks, up)
                trace["pauli"] = up
        else:
            trace["op"] = "noop"
    else:
        p = int(g.edge2plaq[j, b])
        bnd = g.boundary[p]
        flagged = [int(e) for e in bnd if flags.nZ[e]]
        if len(flagged) == 1:
            k = flagged[0]
            flags.nZ[k] = 0
            trace["op"] = "z_leaf"
            trace["plaq"] = p
            trace["measured_a"] = 1 - 2 * int(frame.adef[p])
            if frame.adef[p]:
                _apply_z(frame, g, masks, k)
                trace["pauli"] = k
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
                trace["op"] = "z_loop"
                trace["plaq"] = p
                trace["measured_a"] = 1 - 2 * int(frame.adef[p])
                if frame.adef[p]:
                    k = int(bnd[K._ZL_PUSH[pat]])
                    _apply_z(frame, g, masks, k)
                    trace["pauli"] = k
            else:
                trace["op"] = "noop"
    return trace


def rederive_defects(frame: PauliFrame, g: LatticeGeometry):
    """Recompute check parities from the error record (consistency check)."""
    bdef = np.zeros(g.n_vertices, dtype=np.uint8)
    for v in range(g.n_vertices):
        bdef[v] = int(frame.ex[g.star[v]].sum()) & 1
    adef = np.zeros(g.n_plaquettes, dtype=np.uint8)
    for p in range(g.n_plaquettes):
        adef[p] = int(frame.ez[g.boundary[p]].sum()) & 1
    return bdef, adef


def _correction_parities(g, defects, kind, masks_pair):
    """MWPM-pair the defects and accumulate the crossing parities of the
    deterministic shortest correction paths against two reference loops."""
    n = len(defects)
    if n == 0:
        return 0, 0
    if n % 2:
        raise RuntimeError("odd defect count")
    d = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = g.graph_distance(kind, defects[i], defects[j])
    pairs = mwpm(d)
    par = [0, 0]
    for i, j in pairs:
        if kind == "vertex":
            path = g.vertex_path(defects[i], defects[j])
        else:
            path = g.plaq_path(defects[i], defects[j])
        for m in range(2):
            par[m] ^= len(set(path) & masks_pair[m]) & 1
    return par[0], par[1]


def toric_logical_error(frame: PauliFrame, g: LatticeGeometry):
    """(pX, pZ): whether matching-based decoding leaves a logical bit or
    phase flip relative to the initial state."""
    bdefects = [int(v) for v in np.nonzero(frame.bdef)[0]]
    adefects = [int(p) for p in np.nonzero(frame.adef)[0]]
    zh, zv = set(g.zlog_h[0]), set(g.zlog_v[0])
    xh, xv = set(g.xlog_h[0]), set(g.xlog_v[0])
    # X-error corrections flip tracked dual-loop parities where they cross
    ph, pv = _correction_parities(g, bdefects, "vertex", (zh, zv))
    fzh = int(frame.logpar[0]) ^ ph
    fzv = int(frame.logpar[1]) ^ pv
    # Z-error corrections flip tracked direct-loop parities
    ph, pv = _correction_parities(g, adefects, "plaquette", (xh, xv))
    fxh = int(frame.logpar[2]) ^ ph
    fxv = int(frame.logpar[3]) ^ pv
    pX = 1 if (fzh or fzv) else 0
    pZ = 1 if (fxh or fxv) else 0
    return pX, pZ


def toric_run(g: LatticeGeometry, r: RatesConfig, basis: str, nsweeps: int,
              seed, decode_stride: int = 0):
    """Full trajectory via the jitted kernel; optional matching diagnostics
    on frame copies every decode_stride sweeps. Returns per-sweep series."""
    rng = np.random.default_rng(seed if isinstance(seed, np.random.SeedSequence)
                                else np.random.SeedSequence(seed))
    frame, flags = toric_init(g, basis)
    masks = logical_masks(g)
    tables = kernel_tables(g)
    rec = {
        "nx": np.zeros(nsweeps), "nz": np.zeros(nsweeps),
        "ndb": np.zeros(nsweeps), "nda": np.zeros(nsweeps),
        "ameas": np.zeros(nsweeps),
    }
    decode_t, decode_px, decode_pz = [], [], []
    actions = np.zeros((1, 3), dtype=np.int32)
    done = 0
    while done < nsweeps:
        chunk = nsweeps - done if decode_stride <= 0 else min(decode_stride,
                                                              nsweeps - done)
        K.event_loop(K.FRAME_TORIC, chunk, rng, flags.nX, flags.nZ,
                     frame.ex, frame.ez, frame.bdef, frame.adef, frame.logpar,
                     masks[0], masks[1], masks[2], masks[3],
                     *tables, r.cumulative(),
                     rec["nx"][done:done + chunk], rec["nz"][done:done + chunk],
                     rec["ndb"][done:done + chunk], rec["nda"][done:done + chunk],
                     rec["ameas"][done:done + chunk],
                     0, -1.0, actions)
        done += chunk
        if decode_stride > 0:
            px, pz = toric_logical_error(frame.copy(), g)
            decode_t.append(done * r.dt)
            decode_px.append(px)
            decode_pz.append(pz)
    rec["t"] = (np.arange(nsweeps) + 1) * r.dt
    rec["decode_t"] = np.array(decode_t)
    rec["px"] = np.array(decode_px)
    rec["pz"] = np.array(decode_pz)
    return frame, flags, rec
