# Construction of the dressed direct-loop logical operators (colors=3).
#
# A bare loop of X on one colored honeycomb conjugates the plaquette checks
# of the other two colors into residual two-qubit Z factors. The loop is
# therefore dressed with two-qubit phase couplings (CZ) between edges of the
# two remaining colors. No coupling set can cancel the residuals exactly (a
# parity obstruction: each residual edge flanks the path once while any
# coupling contributes twice); instead the couplings are chosen so that the
# residual on every plaquette collapses onto full vertex stars. Conjugating
# a plaquette check by the dressed loop then yields the check times a
# product of vertex checks, whose value the tableau reads off the current
# vertex signs. The residual table (plaquette -> vertex set) is part of the
# logical record.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class LoopLogical:
    color: int
    edges: list                 # X support (direct loop, path order)
    pairs: list                 # CZ couplings [(edge_a, edge_b), ...]
    xi: dict                    # edge -> tuple of coupled edges
    resid: dict                 # plaquette -> (vertex ids, vertical dual-loop colors)

    def __post_init__(self):
        self.support_set = frozenset(int(e) for e in self.edges)
        # normalize resid entries to (vertices, loop colors, sign bit)
        self.resid = {q: (v if len(v) == 3 else (v[0], v[1], 0))
                      for q, v in self.resid.items()}

    def resid_edges(self, g, q):
        """Edge support of the residual string at plaquette q."""
        hit = self.resid.get(q)
        if hit is None:
            return set()
        vs, lvs, _ = hit
        T = set()
        for v in vs:
            T ^= set(int(e) for e in g.star[v])
        for c in lvs:
            T ^= set(g.zlog_v[c])
        return T

    def cross_appendage(self, other: "LoopLogical"):
        """For the product other * self: Z appendages produced by the left
        symbol's X support passing through the right symbol's couplings,
        and the count of couplings hit on both members (each contributes a
        minus sign)."""
        tset = set()
        both = 0
        for u, v in self.pairs:
            hu = u in other.support_set
            hv = v in other.support_set
            if hu:
                tset ^= {v}
            if hv:
                tset ^= {u}
            if hu and hv:
                both ^= 1
        return tset, both

    def merged_with(self, other: "LoopLogical", g) -> "LoopLogical":
        """Symbol of the operator product other * self (other on the left).
        The merged relation at plaquette q carries a fixed sign from the
        left symbol's residual string crossing the right symbol's support
        and from the cross appendages crossing the check boundary."""
        edges = sorted(self.support_set ^ other.support_set)
        pairs = sorted(set(map(tuple, self.pairs)) ^ set(map(tuple, other.pairs)))
        xi = {}
        for a, b in pairs:
            xi.setdefault(a, []).append(b)
            xi.setdefault(b, []).append(a)
        xi = {e: tuple(v) for e, v in xi.items()}
        tcross, _ = self.cross_appendage(other)
        resid = {}
        plaqs = set(self.resid) | set(other.resid)
        for e in tcross:
            plaqs.update(int(q) for q in g.edge2plaq[e])
        for q in plaqs:
            vs_s, lv_s, sb_s = self.resid.get(q, ((), (), 0))
            vs_o, lv_o, sb_o = other.resid.get(q, ((), (), 0))
            cross = len(other.resid_edges(g, q) & self.support_set) & 1
            tbnd = len(tcross & set(int(e) for e in g.boundary[q])) & 1
            resid[q] = (tuple(sorted(set(vs_s) ^ set(vs_o))),
                        tuple(sorted(set(lv_s) ^ set(lv_o))),
                        sb_s ^ sb_o ^ cross ^ tbnd)
        resid = {q: v for q, v in resid.items() if v[0] or v[1] or v[2]}
        return LoopLogical(-1, edges, pairs, xi, resid)


def _partners_in(g, e: int, q: int) -> tuple[int, int]:
    slot = 0 if g.edge_encl_plaq[e, 0] == q else 1
    assert g.edge_encl_plaq[e, slot] == q
    return int(g.cz_partner[e, slot, 0]), int(g.cz_partner[e, slot, 1])


def _loop_members(g, color: int):
    """Bisector spoke at every path site: the one edge shared by the two
    plaquettes centered on the neighboring path sites."""
    ci = color
    sites = g.xlog_v_sites[ci]
    n = len(sites)
    members = []
    for i, w in enumerate(sites):
        wp, wn = sites[(i - 1) % n], sites[(i + 1) % n]
        xw, yw = g.site_xy(w)
        dxp = _torus_delta(g.L, g.site_xy(wp), (xw, yw))
        dxn = _torus_delta(g.L, g.site_xy(wn), (xw, yw))
        delta = (dxp[0] + dxn[0], dxp[1] + dxn[1])
        e = _edge_between(g, w, delta)
        members.append(e)
    return members


def _torus_delta(L, ab, base):
    dx = (ab[0] - base[0]) % L
    dy = (ab[1] - base[1]) % L
    if dx > L // 2:
        dx -= L
    if dy > L // 2:
        dy -= L
    return dx, dy


def _edge_between(g, s: int, delta):
    for d, (dx, dy) in enumerate(((1, 0), (0, 1), (-1, 1))):
        if delta == (dx, dy):
            return g.fine_edge(s, d)
        if delta == (-dx, -dy):
            return g.fine_edge(g.shift(s, -dx, -dy), d)
    raise ValueError(f"sites not adjacent: delta={delta}")


def _residuals(g, color: int, pairs):
    """Net Z factor on every plaquette after conjugation by the dressed loop."""
    ci = color
    loop_set = set(g.xlog_v[ci])
    touch = {}
    for a, b in pairs:
        for q in g.edge2plaq[a]:
            touch.setdefault(int(q), set()).symmetric_difference_update({b})
        for q in g.edge2plaq[b]:
            touch.setdefault(int(q), set()).symmetric_difference_update({a})
    for e in loop_set:
        for slot in range(2):
            q = int(g.edge_encl_plaq[e, slot])
            t = set(_partners_in(g, e, q))
            touch.setdefault(q, set()).symmetric_difference_update(t)
    return {q: frozenset(t) for q, t in touch.items() if t}


def _star_decompose(g, beta: int, edges):
    """Write an edge set of one color as a XOR of vertex stars, possibly
    after removing the vertical and/or horizontal dual-loop support of the
    same color. Returns (vertex tuple, use_v, use_h) or None."""
    eset = set(int(e) for e in edges)
    # winding against the two direct test loops decides the loop content
    use_v = len(eset & set(g.xlog_h[beta])) % 2
    use_h = len(eset & set(g.xlog_v[beta])) % 2
    if use_v:
        eset ^= set(g.zlog_v[beta])
    if use_h:
        eset ^= set(g.zlog_h[beta])
    verts = g.per_color_verts[beta if g.colors == 3 else 0]
    pot = {}
    root = int(verts[0])
    pot[root] = 0
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for e in g.star[v]:
                u = int(g.edge2vert[e, 0])
                if u == v:
                    u = int(g.edge2vert[e, 1])
                want = pot[v] ^ (1 if int(e) in eset else 0)
                if u in pot:
                    if pot[u] != want:
                        return None
                else:
                    pot[u] = want
                    nxt.append(u)
        frontier = nxt
    ones = [v for v, x in pot.items() if x]
    if len(ones) > len(pot) - len(ones):
        ones = [v for v, x in pot.items() if not x]
    acc = set()
    for v in ones:
        acc ^= set(int(e) for e in g.star[v])
    if acc != eset:
        return None
    return tuple(sorted(ones)), use_v, use_h


def build_loop_logical(g, color: int) -> LoopLogical:
    """Dress the vertical direct loop of the given color and precompute its
    residual star table."""
    if g.colors != 3:
        return LoopLogical(color, list(g.xlog_v[0]), [], {}, {})
    ci = color
    sites = g.xlog_v_sites[ci]
    members = _loop_members(g, color)
    n = len(sites)
    ca, cb = (color + 1) % 3, (color + 2) % 3

    def member_color(i):
        return int(g.edge_color[members[i]])

    variants = []
    order = list(range(n))
    for first_color in (cb, ca):
        for flip in (False, True):
            seq = order[::-1] if flip else order
            prs = []
            for ii, i in enumerate(seq):
                if member_color(i) != first_color:
                    continue
                for j in seq[ii + 1:]:
                    if member_color(j) == first_color:
                        continue
                    prs.append((members[i], members[j]))
            variants.append(prs)

    last_err = None
    for prs in variants:
        resid = _residuals(g, color, prs)
        table = {}
        ok = True
        for q, t in resid.items():
            beta = int(g.edge_color[next(iter(t))])
            if any(int(g.edge_color[e]) != beta for e in t):
                ok = False
                last_err = "mixed-color residual"
                break
            dec = _star_decompose(g, beta, t)
            if dec is None:
                ok = False
                last_err = "residual not a star sum"
                break
            vs, use_v, use_h = dec
            if use_h:
                # a horizontal dual-loop factor has no definite sign in the
                # plus basis; such a dressing cannot stabilize the state
                ok = False
                last_err = "residual winds horizontally"
                break
            table[q] = (vs, (beta,) if use_v else (), 0)
        if ok:
            prs_norm = [(int(a), int(b)) for a, b in prs]
            xi = {}
            for a, b in prs_norm:
                xi.setdefault(a, []).append(b)
                xi.setdefault(b, []).append(a)
            xi = {e: tuple(v) for e, v in xi.items()}
            return LoopLogical(color, [int(e) for e in g.xlog_v[ci]],
                               prs_norm, xi, table)
    raise RuntimeError(f"loop dressing failed: {last_err}")
