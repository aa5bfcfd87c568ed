# Torus honeycomb geometry for one or three interpenetrating colored lattices.
#
# Everything is built on a fine triangular lattice of L*L sites with periodic
# boundaries. Site (x, y) sits at x*u1 + y*u2 with u1 = (1, 0) and
# u2 = (1/2, sqrt(3)/2), and carries color (x - y) mod 3. Every site is the
# center of the hexagonal plaquette of its own color and simultaneously a
# vertex of the other two colored honeycombs. Edges of the fine lattice come
# in three classes by endpoint colors; the class missing color c is exactly
# the edge set of the c-colored honeycomb, so each honeycomb has L^2 edges,
# L^2/3 plaquettes and 2L^2/3 vertices.
#
# Indexing: site = x*L + y (row-major); fine edges are (site, dir) with
# dir 0 = +u1 (east), 1 = +u2 (northeast), 2 = u2-u1 (northwest), giving
# edge id 3*site + dir for colors=3 and a compact renumbering of the
# color-0 class for colors=1.

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

DELTAS = ((1, 0), (0, 1), (-1, 1))

# Dual (plaquette-to-plaquette) steps, most horizontal first; ties in a BFS
# therefore break with axis priority.
DUAL_STEPS = ((2, -1), (-2, 1), (1, 1), (-1, -1), (-1, 2), (1, -2))

# Z-loop move table. Boundary edges are stored in the cyclic order
# [N, NW, SW, S, SE, NE]; the three north-western slots 0..2 host the move
# patterns. Each pattern maps the flagged subset of (N, NW, SW) to
# (lowered slots, raised external slots, push slot). External slot 0 is the
# edge leaving the N/NW corner, slot 1 the edge leaving the NW/SW corner.
ZLOOP_PATTERNS = {
    (1, 1, 0): ((0, 1), (0,), 0),
    (0, 1, 1): ((1, 2), (1,), 1),
    (1, 0, 1): ((0, 2), (0, 1), 0),
    (1, 1, 1): ((0, 1, 2), (0, 1), 0),
}


@dataclass
class LatticeGeometry:
    """Precomputed adjacency and move tables for the torus honeycomb."""

    L: int
    colors: int

    # index spaces
    n_edges: int = 0
    n_vertices: int = 0
    n_plaquettes: int = 0

    edge_color: np.ndarray = None
    edge_sites: np.ndarray = None      # (E, 2) fine-lattice endpoints
    edge2vert: np.ndarray = None       # (E, 2) same-color vertex ids
    edge2plaq: np.ndarray = None       # (E, 2) same-color plaquette ids

    vertex_site: np.ndarray = None
    vertex_color: np.ndarray = None
    vertex_sublattice: np.ndarray = None  # 1 or 2
    star: np.ndarray = None            # (V, 3)

    plaq_site: np.ndarray = None
    plaq_color: np.ndarray = None
    boundary: np.ndarray = None        # (P, 6) order [N, NW, SW, S, SE, NE]
    interior: np.ndarray = None        # (P, 6) spokes [E, NE, NW, W, SW, SE]
    cz_pairs: np.ndarray = None        # (P, 6, 2) nearest-neighbor spoke pairs

    # X-loop move tables (valid on sublattice-1 vertices, -1 elsewhere)
    xloop_pnw: np.ndarray = None       # (V,) plaquette to the north-west
    xloop_up: np.ndarray = None        # (V,) edge pushed along (north)
    xloop_left: np.ndarray = None      # (V,)
    xloop_third: np.ndarray = None     # (V,) edge that must be unflagged
    xloop_outer: np.ndarray = None     # (V, 4) boundary minus star

    # Z-loop external edges per plaquette
    zloop_ext: np.ndarray = None       # (P, 2)

    # D4 heralding targets (colors=3 only, else empty)
    leaf_z_heralds: np.ndarray = None  # (E, 4) CZ partners in both plaquettes
    loop_z_heralds: np.ndarray = None  # (V, 6) for sublattice-1 vertices

    edge_encl_plaq: np.ndarray = None  # (E, 2) enclosing other-color plaquettes
    cz_partner: np.ndarray = None      # (E, 2, 2) partners per enclosing plaq

    # adjacency of different-color plaquettes (center sites are neighbors)
    plaq_adj: np.ndarray = None        # (P, 6)
    # third-color vertex ids entering the reordering rule for adjacent pairs
    plaq_adj_vert: np.ndarray = None   # (P, 6, 2)

    # logical operator supports, one entry per color
    zlog_h: list = field(default_factory=list)   # dual loop edge ids
    zlog_v: list = field(default_factory=list)
    xlog_h: list = field(default_factory=list)   # direct loop edge ids
    xlog_v: list = field(default_factory=list)
    xlog_v_sites: list = field(default_factory=list)

    excluded_plaq: list = field(default_factory=list)  # one per color
    destab_path: list = field(default_factory=list)    # (P,) lists of edge ids

    per_color_plaqs: list = field(default_factory=list)
    per_color_verts: list = field(default_factory=list)
    per_color_edges: list = field(default_factory=list)
    _vertex_tree: dict = field(default_factory=dict)

    # translation-invariant BFS distance maps
    _vert_dist: dict = field(default_factory=dict)
    _plaq_dist: dict = field(default_factory=dict)
    _vert_src: dict = field(default_factory=dict)
    _plaq_src: dict = field(default_factory=dict)

    _site_vertex: dict = field(default_factory=dict)
    _site_plaq: dict = field(default_factory=dict)
    _edge_id: dict = field(default_factory=dict)
    _xlog_cz: dict = field(default_factory=dict)

    # ------------------------------------------------------------------
    def site(self, x: int, y: int) -> int:
        L = self.L
        return (x % L) * L + (y % L)

    def site_xy(self, s: int) -> tuple[int, int]:
        return divmod(s, self.L)

    def site_color(self, s: int) -> int:
        x, y = divmod(s, self.L)
        return (x - y) % 3

    def shift(self, s: int, dx: int, dy: int) -> int:
        x, y = divmod(s, self.L)
        return self.site(x + dx, y + dy)

    def fine_edge(self, s: int, d: int):
        """Public edge id of fine edge (site, dir), or None if not kept."""
        return self._edge_id.get((s, d))

    def vertex_at(self, s: int, color: int):
        return self._site_vertex.get((s, color))

    def plaq_at(self, s: int):
        return self._site_plaq.get(s)

    # ------------------------------------------------------------------
    def graph_distance(self, kind: str, a: int, b: int) -> int:
        """Shortest-path distance on the (dual) lattice with wraparound."""
        if kind == "vertex":
            ca, cb = self.vertex_color[a], self.vertex_color[b]
            if ca != cb:
                raise ValueError("vertices of different colors")
            sa, sb = int(self.vertex_site[a]), int(self.vertex_site[b])
            key = (int(ca), self.site_color(sa))
            src = self._vert_src[key]
            dmap = self._vert_dist[key]
            xa, ya = divmod(sa, self.L)
            xb, yb = divmod(sb, self.L)
            x0, y0 = divmod(src, self.L)
            return int(dmap[self.site(x0 + xb - xa, y0 + yb - ya)])
        if kind == "plaquette":
            ca, cb = self.plaq_color[a], self.plaq_color[b]
            if ca != cb:
                raise ValueError("plaquettes of different colors")
            sa, sb = int(self.plaq_site[a]), int(self.plaq_site[b])
            src = self._plaq_src[int(ca)]
            dmap = self._plaq_dist[int(ca)]
            xa, ya = divmod(sa, self.L)
            xb, yb = divmod(sb, self.L)
            x0, y0 = divmod(src, self.L)
            return int(dmap[self.site(x0 + xb - xa, y0 + yb - ya)])
        raise ValueError(f"unknown kind {kind!r}")

    def vertex_path(self, a: int, b: int) -> list[int]:
        """Deterministic shortest path a->b as a list of edge ids."""
        if a == b:
            return []
        color = self.vertex_color[a]
        if color != self.vertex_color[b]:
            raise ValueError("vertices of different colors")
        prev_edge = {b: -1}
        frontier = [b]
        while frontier and a not in prev_edge:
            nxt = []
            for v in frontier:
                for e in self.star[v]:
                    u = self.edge2vert[e, 0]
                    if u == v:
                        u = self.edge2vert[e, 1]
                    if u not in prev_edge:
                        prev_edge[u] = e
                        nxt.append(u)
            frontier = nxt
        path = []
        v = a
        while v != b:
            e = prev_edge[v]
            path.append(int(e))
            u = self.edge2vert[e, 0]
            v = int(u if u != v else self.edge2vert[e, 1])
        return path

    def plaq_path(self, a: int, b: int) -> list[int]:
        """Deterministic shortest dual path a->b as crossed edge ids."""
        if a == b:
            return []
        color = self.plaq_color[a]
        if color != self.plaq_color[b]:
            raise ValueError("plaquettes of different colors")
        prev = {b: (-1, -1)}
        frontier = [b]
        while frontier and a not in prev:
            nxt = []
            for p in frontier:
                for e in self.boundary[p]:
                    q = self.edge2plaq[e, 0]
                    if q == p:
                        q = self.edge2plaq[e, 1]
                    if q not in prev:
                        prev[q] = (e, p)
                        nxt.append(q)
            frontier = nxt
        path = []
        p = a
        while p != b:
            e, q = prev[p]
            path.append(int(e))
            p = q
        return path

    # ------------------------------------------------------------------
    def vertex_tree(self, color: int):
        """Spanning tree of one color's vertex graph: (BFS order, parent
        vertex per vertex, parent edge per vertex). Root is the first
        vertex; parents of the root are -1."""
        if color not in self._vertex_tree:
            verts = self.per_color_verts[color if self.colors == 3 else 0]
            pvert = np.full(self.n_vertices, -1, dtype=np.int32)
            pedge = np.full(self.n_vertices, -1, dtype=np.int32)
            root = int(verts[0])
            order = [root]
            seen = {root}
            head = 0
            while head < len(order):
                v = order[head]
                head += 1
                for e in self.star[v]:
                    u = int(self.edge2vert[e, 0])
                    if u == v:
                        u = int(self.edge2vert[e, 1])
                    if u not in seen:
                        seen.add(u)
                        pvert[u] = v
                        pedge[u] = e
                        order.append(u)
            self._vertex_tree[color] = (np.array(order, dtype=np.int32),
                                        pvert, pedge)
        return self._vertex_tree[color]

    # ------------------------------------------------------------------
    def loop_logical(self, color: int):
        """Dressed vertical direct-loop logical of the given color
        (colors=3). Built once and cached."""
        if color not in self._xlog_cz:
            from .logicals import build_loop_logical

            self._xlog_cz[color] = build_loop_logical(self, color)
        return self._xlog_cz[color]

    # ------------------------------------------------------------------
    def to_json(self) -> str:
        def arr(a):
            return a.tolist() if a is not None else None

        data = {
            "L": self.L,
            "colors": self.colors,
            "n_edges": self.n_edges,
            "n_vertices": self.n_vertices,
            "n_plaquettes": self.n_plaquettes,
            "edge_color": arr(self.edge_color),
            "edge_sites": arr(self.edge_sites),
            "edge2vert": arr(self.edge2vert),
            "edge2plaq": arr(self.edge2plaq),
            "vertex_site": arr(self.vertex_site),
            "vertex_color": arr(self.vertex_color),
            "vertex_sublattice": arr(self.vertex_sublattice),
            "star": arr(self.star),
            "plaq_site": arr(self.plaq_site),
            "plaq_color": arr(self.plaq_color),
            "boundary": arr(self.boundary),
            "interior": arr(self.interior),
            "cz_pairs": arr(self.cz_pairs),
            "xloop_pnw": arr(self.xloop_pnw),
            "xloop_up": arr(self.xloop_up),
            "xloop_left": arr(self.xloop_left),
            "xloop_third": arr(self.xloop_third),
            "xloop_outer": arr(self.xloop_outer),
            "zloop_ext": arr(self.zloop_ext),
            "leaf_z_heralds": arr(self.leaf_z_heralds),
            "loop_z_heralds": arr(self.loop_z_heralds),
            "zlog_h": self.zlog_h,
            "zlog_v": self.zlog_v,
            "xlog_h": self.xlog_h,
            "xlog_v": self.xlog_v,
            "excluded_plaq": self.excluded_plaq,
            "destab_path": self.destab_path,
        }
        return json.dumps(data)


# ----------------------------------------------------------------------
def build_geometry(L: int, colors: int) -> LatticeGeometry:
    """Build all adjacency and move tables for the L x L torus."""
    if colors not in (1, 3):
        raise ValueError("colors must be 1 or 3")
    if L < 3:
        raise ValueError("L must be at least 3")
    if L % 3 != 0:
        raise ValueError("periodic identification requires L divisible by 3")

    g = LatticeGeometry(L=L, colors=colors)
    n_sites = L * L
    keep = range(3) if colors == 3 else (0,)

    def scolor(s):
        x, y = divmod(s, L)
        return (x - y) % 3

    # --- index spaces ------------------------------------------------
    edge_list = []   # (site, dir)
    for s in range(n_sites):
        k = scolor(s)
        for d, ec in ((0, (k + 2) % 3), (1, (k + 1) % 3), (2, (k + 2) % 3)):
            if ec in keep:
                g._edge_id[(s, d)] = len(edge_list)
                edge_list.append((s, d, ec))
    E = len(edge_list)

    vert_list = []   # (site, color)
    for s in range(n_sites):
        k = scolor(s)
        for c in keep:
            if c != k:
                g._site_vertex[(s, c)] = len(vert_list)
                vert_list.append((s, c))
    V = len(vert_list)

    plaq_list = []
    for s in range(n_sites):
        if scolor(s) in keep:
            g._site_plaq[s] = len(plaq_list)
            plaq_list.append(s)
    P = len(plaq_list)

    g.n_edges, g.n_vertices, g.n_plaquettes = E, V, P

    def shift(s, dx, dy):
        x, y = divmod(s, L)
        return ((x + dx) % L) * L + ((y + dy) % L)

    def eid(s, d):
        return g._edge_id[(s, d)]

    g.edge_color = np.array([ec for _, _, ec in edge_list], dtype=np.int32)
    g.edge_sites = np.array(
        [(s, shift(s, *DELTAS[d])) for s, d, _ in edge_list], dtype=np.int32
    )
    g.vertex_site = np.array([s for s, _ in vert_list], dtype=np.int32)
    g.vertex_color = np.array([c for _, c in vert_list], dtype=np.int32)
    # sublattice 1 = south-east hexagon corners = sites of color c+2
    g.vertex_sublattice = np.array(
        [1 if scolor(s) == (c + 2) % 3 else 2 for s, c in vert_list],
        dtype=np.int32,
    )
    g.plaq_site = np.array(plaq_list, dtype=np.int32)
    g.plaq_color = np.array([scolor(s) for s in plaq_list], dtype=np.int32)

    # --- stars ---------------------------------------------------------
    star = np.zeros((V, 3), dtype=np.int32)
    for v, (s, c) in enumerate(vert_list):
        if scolor(s) == (c + 2) % 3:
            # sublattice 1: [up (NE), left (W), third (SE)]
            star[v] = (
                eid(s, 1),
                eid(shift(s, -1, 0), 0),
                eid(shift(s, 1, -1), 2),
            )
        else:
            # sublattice 2: [E, NW, SW]
            star[v] = (eid(s, 0), eid(s, 2), eid(shift(s, 0, -1), 1))
    g.star = star

    edge2vert = np.zeros((E, 2), dtype=np.int32)
    for e, (s, d, ec) in enumerate(edge_list):
        s2 = shift(s, *DELTAS[d])
        edge2vert[e] = (g._site_vertex[(s, ec)], g._site_vertex[(s2, ec)])
    g.edge2vert = edge2vert

    # --- plaquette boundary / interior ----------------------------------
    boundary = np.zeros((P, 6), dtype=np.int32)
    interior = np.full((P, 6), -1, dtype=np.int32)
    zloop_ext = np.zeros((P, 2), dtype=np.int32)
    for p, s in enumerate(plaq_list):
        boundary[p] = (
            eid(shift(s, -1, 1), 0),   # N
            eid(shift(s, -1, 0), 1),   # NW
            eid(shift(s, 0, -1), 2),   # SW
            eid(shift(s, 0, -1), 0),   # S
            eid(shift(s, 1, -1), 1),   # SE
            eid(shift(s, 1, 0), 2),    # NE
        )
        zloop_ext[p] = (eid(shift(s, -1, 1), 2), eid(shift(s, -2, 0), 0))
        if colors == 3:
            interior[p] = (
                eid(s, 0),                 # E
                eid(s, 1),                 # NE
                eid(s, 2),                 # NW
                eid(shift(s, -1, 0), 0),   # W
                eid(shift(s, 0, -1), 1),   # SW
                eid(shift(s, 1, -1), 2),   # SE
            )
    g.boundary = boundary
    g.interior = interior
    g.zloop_ext = zloop_ext

    edge2plaq = np.full((E, 2), -1, dtype=np.int32)
    seen = np.zeros(E, dtype=np.int32)
    for p in range(P):
        for e in boundary[p]:
            edge2plaq[e, seen[e]] = p
            seen[e] += 1
    assert np.all(seen == 2)
    g.edge2plaq = edge2plaq

    cz = np.full((P, 6, 2), -1, dtype=np.int32)
    if colors == 3:
        for p in range(P):
            spokes = interior[p]
            for i in range(6):
                cz[p, i] = (spokes[i], spokes[(i + 1) % 6])
    g.cz_pairs = cz

    # --- X-loop tables ---------------------------------------------------
    xl_pnw = np.full(V, -1, dtype=np.int32)
    xl_up = np.full(V, -1, dtype=np.int32)
    xl_left = np.full(V, -1, dtype=np.int32)
    xl_third = np.full(V, -1, dtype=np.int32)
    xl_outer = np.full((V, 4), -1, dtype=np.int32)
    for v, (s, c) in enumerate(vert_list):
        if g.vertex_sublattice[v] != 1:
            continue
        pnw = g._site_plaq[shift(s, -1, 1)]
        xl_pnw[v] = pnw
        xl_up[v] = star[v, 0]
        xl_left[v] = star[v, 1]
        xl_third[v] = star[v, 2]
        outer = [e for e in boundary[pnw] if e not in (star[v, 0], star[v, 1])]
        assert len(outer) == 4
        xl_outer[v] = outer
    g.xloop_pnw, g.xloop_up, g.xloop_left = xl_pnw, xl_up, xl_left
    g.xloop_third, g.xloop_outer = xl_third, xl_outer

    # --- enclosing plaquettes and CZ partners (colors=3) ------------------
    if colors == 3:
        encl = np.full((E, 2), -1, dtype=np.int32)
        part = np.full((E, 2, 2), -1, dtype=np.int32)
        for e, (s, d, ec) in enumerate(edge_list):
            for slot, t in enumerate((s, shift(s, *DELTAS[d]))):
                p = g._site_plaq[t]
                encl[e, slot] = p
                idx = int(np.where(interior[p] == e)[0][0])
                part[e, slot] = (
                    interior[p][(idx - 1) % 6],
                    interior[p][(idx + 1) % 6],
                )
        g.edge_encl_plaq = encl
        g.cz_partner = part

        leafz = np.zeros((E, 4), dtype=np.int32)
        leafz[:, 0:2] = part[:, 0]
        leafz[:, 2:4] = part[:, 1]
        g.leaf_z_heralds = leafz

        loopz = np.full((V, 6), -1, dtype=np.int32)
        for v, (s, c) in enumerate(vert_list):
            if g.vertex_sublattice[v] != 1:
                continue
            up, left = int(xl_up[v]), int(xl_left[v])
            pc = g._site_plaq[s]
            slot_up = 0 if encl[up, 0] == pc else 1
            slot_left = 0 if encl[left, 0] == pc else 1
            centred = set(int(x) for x in part[up, slot_up])
            centred ^= set(int(x) for x in part[left, slot_left])
            assert len(centred) == 2
            others = [int(part[up, 1 - slot_up][0]), int(part[up, 1 - slot_up][1]),
                      int(part[left, 1 - slot_left][0]), int(part[left, 1 - slot_left][1])]
            loopz[v] = sorted(centred) + others
        g.loop_z_heralds = loopz

        # different-color plaquette adjacency with the third-color vertex
        # pair entering the reordering rule
        adj = np.full((P, 6), -1, dtype=np.int32)
        adjv = np.full((P, 6, 2), -1, dtype=np.int32)
        for p, s in enumerate(plaq_list):
            cp = scolor(s)
            for i, (dx, dy) in enumerate(DELTAS + tuple((-a, -b) for a, b in DELTAS)):
                t = shift(s, dx, dy)
                q = g._site_plaq[t]
                adj[p, i] = q
                cq = scolor(t)
                cc = 3 - cp - cq
                adjv[p, i] = (g._site_vertex[(s, cc)], g._site_vertex[(t, cc)])
        g.plaq_adj, g.plaq_adj_vert = adj, adjv
    else:
        g.leaf_z_heralds = np.zeros((E, 4), dtype=np.int32)
        g.loop_z_heralds = np.full((V, 6), -1, dtype=np.int32)

    # --- per-color listings ----------------------------------------------
    for c in keep:
        g.per_color_plaqs.append(
            np.array([p for p in range(P) if g.plaq_color[p] == c], dtype=np.int32)
        )
        g.per_color_verts.append(
            np.array([v for v in range(V) if g.vertex_color[v] == c], dtype=np.int32)
        )
        g.per_color_edges.append(
            np.array([e for e in range(E) if g.edge_color[e] == c], dtype=np.int32)
        )

    # --- logical supports --------------------------------------------------
    for c in keep:
        s0 = int(g.per_color_plaqs[list(keep).index(c)][0])
        s0 = int(g.plaq_site[s0])
        zh, zv = [], []
        for k in range(L // 3):
            t = shift(s0, 3 * k, 0)
            zh.append(eid(shift(t, 1, -1), 1))
            zh.append(eid(shift(t, 3, -1), 2))  # = (t+(2,-1)) step B crossing
            t = shift(s0, 0, 3 * k)
            zv.append(eid(shift(t, 1, 0), 2))
            zv.append(eid(shift(t, 0, 2), 0))
        g.zlog_h.append(sorted(zh))
        g.zlog_v.append(sorted(zv))

        # direct loops start on a sublattice-2 site (color c+1)
        a0 = None
        for s in range(n_sites):
            if scolor(s) == (c + 1) % 3:
                a0 = s
                break
        xv, xv_sites = [], []
        t = a0
        for k in range(L // 3):
            xv_sites.append(t)
            xv.append(eid(t, 2))                      # t -> t+(-1,1)
            t2 = shift(t, -1, 1)
            xv_sites.append(t2)
            xv.append(eid(t2, 1))                     # -> t+(-1,2)
            t3 = shift(t, -1, 2)
            xv_sites.append(t3)
            xv.append(eid(t3, 0))                     # -> t+(0,2)
            t4 = shift(t, 0, 2)
            xv_sites.append(t4)
            xv.append(eid(t4, 1))                     # -> t+(0,3)
            t = shift(t, 0, 3)
        assert t == a0
        g.xlog_v.append(xv)
        g.xlog_v_sites.append(xv_sites)

        xh = []
        t = a0
        for k in range(L // 3):
            xh.append(eid(t, 0))                      # -> t+(1,0)
            xh.append(eid(shift(t, 2, -1), 2))        # t+(1,0) -> t+(2,-1)
            xh.append(eid(shift(t, 2, -1), 0))        # -> t+(3,-1)
            xh.append(eid(shift(t, 3, -1), 1))        # -> t+(3,0)
            t = shift(t, 3, 0)
        assert t == a0
        g.xlog_h.append(xh)

    # --- excluded plaquettes and destabilizer paths -------------------------
    g.destab_path = [None] * P
    for ci, c in enumerate(keep):
        plaqs = g.per_color_plaqs[ci]
        pstar = int(plaqs[-1])
        g.excluded_plaq.append(pstar)
        # BFS parents from pstar over the dual graph, axis-priority order
        parent = {pstar: (-1, -1)}
        frontier = [pstar]
        while frontier:
            nxt = []
            for p in frontier:
                s = int(g.plaq_site[p])
                for dx, dy in DUAL_STEPS:
                    t = shift(s, dx, dy)
                    q = g._site_plaq[t]
                    if q not in parent:
                        parent[q] = (p, _shared_edge(g, p, q))
                        nxt.append(q)
            frontier = nxt
        for p in plaqs:
            p = int(p)
            path = []
            q = p
            while q != pstar:
                q2, e = parent[q]
                path.append(e)
                q = q2
            g.destab_path[p] = path

    # --- translation-invariant distance maps --------------------------------
    for ci, c in enumerate(keep):
        for kcls in ((c + 1) % 3, (c + 2) % 3):
            src = None
            for s in range(n_sites):
                if scolor(s) == kcls:
                    src = s
                    break
            dmap = _bfs_sites(
                g, src, lambda s: [
                    int(g.edge_sites[e, 0]) if g.edge_sites[e, 0] != s
                    else int(g.edge_sites[e, 1])
                    for e in g.star[g._site_vertex[(s, c)]]
                ],
            )
            g._vert_src[(c, kcls)] = src
            g._vert_dist[(c, kcls)] = dmap
        src = None
        for s in range(n_sites):
            if scolor(s) == c:
                src = s
                break
        dmap = _bfs_sites(
            g, src, lambda s: [shift(s, dx, dy) for dx, dy in DUAL_STEPS]
        )
        g._plaq_src[c] = src
        g._plaq_dist[c] = dmap

    return g


def _shared_edge(g: LatticeGeometry, p: int, q: int) -> int:
    bp = set(int(e) for e in g.boundary[p])
    for e in g.boundary[q]:
        if int(e) in bp:
            return int(e)
    raise ValueError("plaquettes not adjacent")


def _bfs_sites(g: LatticeGeometry, src: int, neighbors) -> np.ndarray:
    dmap = np.full(g.L * g.L, -1, dtype=np.int32)
    dmap[src] = 0
    frontier = [src]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for s in frontier:
            for t in neighbors(s):
                if dmap[t] < 0:
                    dmap[t] = d
                    nxt.append(t)
        frontier = nxt
    return dmap
