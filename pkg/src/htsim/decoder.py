# Matching-based recovery: pair up stabilizer defects, annihilate them along
# deterministic shortest paths, and read the surviving logical content.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeGeometry
from .matching import brute_force_mwpm, greedy_pairing, matching_weight, mwpm


@dataclass
class DefectSet:
    sites: list          # vertex or plaquette ids
    kind: str            # "vertex" | "plaquette"
    color: int

    def __post_init__(self):
        if len(self.sites) % 2:
            raise ValueError("defects must come in pairs")


def pair_defects(g: LatticeGeometry, defects: DefectSet):
    """Minimum-weight perfect pairing on the torus metric."""
    ids = defects.sites
    n = len(ids)
    if n == 0:
        return []
    d = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = g.graph_distance(defects.kind, ids[i], ids[j])
    return [(ids[i], ids[j]) for i, j in mwpm(d)]


def parity_crossings(paths, region_boundary) -> int:
    """Parity of crossings of pairing paths with a boundary edge set."""
    bset = set(int(e) for e in region_boundary)
    par = 0
    for path in paths:
        par ^= len(bset.intersection(int(e) for e in path)) & 1
    return par


def decode_d4(t, g: LatticeGeometry, rng) -> dict:
    """Run matching-based recovery on a tableau clone: annihilate vertex
    defects with X strings, collapse every plaquette, annihilate plaquette
    defects with Z strings, then read the logical records. Returns
    {'indicator': 0/1, 'signs': {...}, 'collapsed': bool, 'obstructed': bool}.

    The per-color product of plaquette checks is fixed by the dual-loop
    sectors of the other two colors, so a scrambled state can leave an odd
    number of plaquette defects in one color. Such a defect cannot be
    annihilated by Z strings; it is a topological obstruction and decoding
    reports failure (one defect per obstructed color is left behind)."""
    for c in range(3):
        defects = t.defect_vertices(c)
        pairs = pair_defects(g, DefectSet(defects, "vertex", c))
        for a, b in pairs:
            for e in g.vertex_path(a, b):
                t.apply_pauli_x(e)
    if any(t.measure_vertex(v) != 1 for v in range(g.n_vertices)):
        raise RuntimeError("vertex cleanup left defects")

    adef = {c: [] for c in range(3)}
    for p in range(g.n_plaquettes):
        m = t.measure_plaquette(p, rng, count=False)
        if m < 0:
            adef[int(g.plaq_color[p])].append(p)
    leftover = set()
    for c in range(3):
        defects = list(adef[c])
        if len(defects) % 2:
            leftover.add(defects.pop())
        pairs = pair_defects(g, DefectSet(defects, "plaquette", c))
        for a, b in pairs:
            for e in g.plaq_path(a, b):
                t.apply_pauli_z(e)
    for p in range(g.n_plaquettes):
        m = t.measure_plaquette(p, rng, count=False)
        if m != 1 and p not in leftover:
            raise RuntimeError("plaquette cleanup left defects")

    signs = t.logical_signs()
    collapsed = any(s is None for s in signs.values())
    obstructed = bool(leftover)
    ok = (not collapsed) and (not obstructed) and \
        all(s == 1 for s in signs.values())
    return {"indicator": 1 if ok else 0, "signs": signs,
            "collapsed": collapsed, "obstructed": obstructed}


__all__ = ["DefectSet", "pair_defects", "parity_crossings", "decode_d4",
           "mwpm", "brute_force_mwpm", "greedy_pairing", "matching_weight"]
