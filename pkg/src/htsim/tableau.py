# Generalized stabilizer tableau for the three-color model.
#
# Rows represent operators in the canonical form
#     sign * (product of Z on the Z-bit edges) * (plaquette checks, ascending
#     index) [* dressed-loop symbol for the X-type logicals]
# Plaquette checks of different colors on neighboring centers do not commute
# as operators; they commute up to a pair of third-color vertex checks, whose
# value is read off the instantaneous vertex signs whenever rows are
# reordered or multiplied. Rows therefore carry signs that are gauged to the
# current state, which is sufficient because rows are only ever evaluated
# against it.

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeGeometry
from .logicals import LoopLogical, build_loop_logical


@dataclass
class LogicalRecord:
    label: tuple            # ("Z"|"X", "V"|"H", color)
    kind: str
    z: np.ndarray
    a: np.ndarray
    sb: int                 # sign bit, 0 = +1
    collapsed: bool = False
    sym: LoopLogical | None = None

    def copy(self):
        return LogicalRecord(self.label, self.kind, self.z.copy(),
                             self.a.copy(), self.sb, self.collapsed, self.sym)


class TableauError(RuntimeError):
    pass


def _xor_rows(mat: np.ndarray, mask: np.ndarray) -> np.ndarray:
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return np.zeros(mat.shape[1], dtype=np.uint8)
    return np.bitwise_xor.reduce(mat[idx], axis=0)


_MASK_ORDERS: dict = {}


def _mask_order(k: int):
    if k not in _MASK_ORDERS:
        _MASK_ORDERS[k] = sorted(range(1 << k), key=lambda m: bin(m).count("1"))
    return _MASK_ORDERS[k]


class QuasiStabilizerTableau:
    def __init__(self, g: LatticeGeometry, basis: str):
        if g.colors != 3:
            raise ValueError("tableau requires the three-color geometry")
        if basis not in ("zero", "plus"):
            raise ValueError("basis must be 'zero' or 'plus'")
        self.g = g
        self.basis = basis
        E, P, V = g.n_edges, g.n_plaquettes, g.n_vertices
        self.vsign = np.ones(V, dtype=np.int8)

        self.gz = np.zeros((P, E), dtype=np.uint8)
        self.ga = np.zeros((P, P), dtype=np.uint8)
        self.gsb = np.zeros(P, dtype=np.uint8)
        self.dz = np.zeros((P, E), dtype=np.uint8)
        self.da = np.zeros((P, P), dtype=np.uint8)
        self.dsb = np.zeros(P, dtype=np.uint8)
        self.has_destab = np.zeros(P, dtype=bool)

        excluded = set(g.excluded_plaq)
        for p in range(P):
            if p in excluded:
                c = int(g.plaq_color[p])
                self.ga[p, g.per_color_plaqs[c]] = 1
            else:
                self.ga[p, p] = 1
                self.dz[p, g.destab_path[p]] = 1
                self.has_destab[p] = True

        # pure +/-A_p cache: slot holding exactly sign*A_p, else -1
        self.prist_slot = np.full(P, -1, dtype=np.int32)
        self.prist_sb = np.zeros(P, dtype=np.uint8)
        self.prist_of_row = np.full(P, -1, dtype=np.int32)
        for p in range(P):
            if p not in excluded:
                self.prist_slot[p] = p
                self.prist_of_row[p] = p

        self.logicals: list[LogicalRecord] = []
        for c in range(3):
            self.logicals.append(self._zrecord(("Z", "V", c), g.zlog_v[c]))
        if basis == "zero":
            for c in range(3):
                self.logicals.append(self._zrecord(("Z", "H", c), g.zlog_h[c]))
        else:
            for c in range(3):
                sym = g.loop_logical(c)
                rec = LogicalRecord(("X", "V", c), "X",
                                    np.zeros(E, dtype=np.uint8),
                                    np.zeros(P, dtype=np.uint8), 0, False, sym)
                self.logicals.append(rec)
        # records live as views into shared matrices so scans vectorize
        self._lz = np.zeros((len(self.logicals), E), dtype=np.uint8)
        self._la = np.zeros((len(self.logicals), P), dtype=np.uint8)
        for i, rec in enumerate(self.logicals):
            self._lz[i] = rec.z
            self._la[i] = rec.a
            rec.z = self._lz[i]
            rec.a = self._la[i]

        # fixed-support vertical dual loop signs (definite in both bases)
        self.zv_fixed = np.zeros(3, dtype=np.uint8)
        self._in_zv = np.zeros((3, E), dtype=np.uint8)
        for c in range(3):
            self._in_zv[c, g.zlog_v[c]] = 1

        self.a_meas_count = 0
        self.collapse_count = 0

    def _zrecord(self, label, support):
        E, P = self.g.n_edges, self.g.n_plaquettes
        z = np.zeros(E, dtype=np.uint8)
        z[list(support)] = 1
        return LogicalRecord(label, "Z", z, np.zeros(P, dtype=np.uint8), 0)

    # ------------------------------------------------------------------
    def clone(self) -> "QuasiStabilizerTableau":
        t = object.__new__(QuasiStabilizerTableau)
        t.g, t.basis = self.g, self.basis
        for name in ("vsign", "gz", "ga", "gsb", "dz", "da", "dsb",
                     "has_destab", "prist_slot", "prist_sb", "prist_of_row",
                     "zv_fixed", "_lz", "_la"):
            setattr(t, name, getattr(self, name).copy())
        t._in_zv = self._in_zv
        t.logicals = []
        for i, r in enumerate(self.logicals):
            t.logicals.append(LogicalRecord(r.label, r.kind, t._lz[i],
                                            t._la[i], r.sb, r.collapsed, r.sym))
        t.a_meas_count = self.a_meas_count
        t.collapse_count = self.collapse_count
        return t

    # ------------------------------------------------------------------
    def measure_vertex(self, v: int) -> int:
        return int(self.vsign[v])

    def apply_pauli_x(self, k: int):
        g = self.g
        self.vsign[g.edge2vert[k]] *= -1
        self.zv_fixed ^= self._in_zv[:, k]

        self.gsb ^= self.gz[:, k]
        self.dsb ^= self.dz[:, k]
        for slot in range(2):
            q = int(g.edge_encl_plaq[k, slot])
            a, b = int(g.cz_partner[k, slot, 0]), int(g.cz_partner[k, slot, 1])
            for mz, ma, msb in ((self.gz, self.ga, self.gsb),
                                (self.dz, self.da, self.dsb)):
                rows = ma[:, q].astype(bool)
                if not rows.any():
                    continue
                for t in (a, b):
                    for qq in g.edge2plaq[t]:
                        if qq < q:
                            msb[rows] ^= ma[rows, qq]
                    mz[rows, t] ^= 1
            # pure-A cache: the slot rows for q pick up decorations
            r = self.prist_slot[q]
            if r >= 0 and self.ga[r, q]:
                self.prist_slot[q] = -1
                self.prist_of_row[r] = -1

        for rec in self.logicals:
            rec.sb ^= int(rec.z[k])
            for slot in range(2):
                q = int(g.edge_encl_plaq[k, slot])
                if rec.a[q]:
                    a, b = int(g.cz_partner[k, slot, 0]), int(g.cz_partner[k, slot, 1])
                    for t in (a, b):
                        for qq in g.edge2plaq[t]:
                            if qq < q:
                                rec.sb ^= int(rec.a[qq])
                        rec.z[t] ^= 1
            if rec.sym is not None:
                coupled = rec.sym.xi.get(k)
                if coupled:
                    for t in coupled:
                        for qq in g.edge2plaq[t]:
                            rec.sb ^= int(rec.a[qq])
                        rec.z[t] ^= 1

    def apply_pauli_z(self, k: int):
        g = self.g
        q1, q2 = int(g.edge2plaq[k, 0]), int(g.edge2plaq[k, 1])
        self.gsb ^= self.ga[:, q1] ^ self.ga[:, q2]
        self.dsb ^= self.da[:, q1] ^ self.da[:, q2]
        for rec in self.logicals:
            rec.sb ^= int(rec.a[q1]) ^ int(rec.a[q2])
            if rec.sym is not None and k in rec.sym.support_set:
                rec.sb ^= 1
        for q in (q1, q2):
            r = self.prist_slot[q]
            if r >= 0:
                self.prist_sb[q] ^= 1

    # ------------------------------------------------------------------
    def _anti(self, p: int, mz, ma):
        g = self.g
        par = mz[:, g.boundary[p]].sum(axis=1)
        pv = g.plaq_adj_vert[p]
        f = (self.vsign[pv[:, 0]] * self.vsign[pv[:, 1]]) < 0
        if f.any():
            par = par + ma[:, g.plaq_adj[p][f]].sum(axis=1)
        return (par & 1).astype(bool)

    def _anti_record(self, p: int, rec: LogicalRecord) -> bool:
        g = self.g
        par = int(rec.z[g.boundary[p]].sum())
        pv = g.plaq_adj_vert[p]
        f = (self.vsign[pv[:, 0]] * self.vsign[pv[:, 1]]) < 0
        if f.any():
            par += int(rec.a[g.plaq_adj[p][f]].sum())
        if rec.sym is not None:
            hit = rec.sym.resid.get(p)
            if hit is not None:
                vs, lvs, sb = hit
                par += sb
                if vs:
                    par += int((self.vsign[list(vs)] < 0).sum())
                for c in lvs:
                    par += int(self.zv_fixed[c])
        return bool(par & 1)

    def anticommutes_on_state(self, p: int, row) -> int:
        """1 iff measuring the check at plaquette p anticommutes with the
        given row when acting on the current state. Rows are addressed as
        ("G", i) generator/special slots, ("D", i) destabilizers, or
        ("L", i) logical records."""
        kind, i = row
        if kind == "G":
            return int(self._anti(p, self.gz[i:i + 1], self.ga[i:i + 1])[0])
        if kind == "D":
            return int(self._anti(p, self.dz[i:i + 1], self.da[i:i + 1])[0])
        if kind == "L":
            return int(self._anti_record(p, self.logicals[i]))
        raise ValueError(f"unknown row kind {kind!r}")

    def _anti_records(self, p: int):
        """Indices of logical records anticommuting with the check at p
        on the current state (vectorized over the shared record matrices)."""
        g = self.g
        par = self._lz[:, g.boundary[p]].sum(axis=1, dtype=np.int64)
        pv = g.plaq_adj_vert[p]
        f = (self.vsign[pv[:, 0]] * self.vsign[pv[:, 1]]) < 0
        if f.any():
            par += self._la[:, g.plaq_adj[p][f]].sum(axis=1, dtype=np.int64)
        out = []
        for i, rec in enumerate(self.logicals):
            extra = 0
            if rec.sym is not None:
                hit = rec.sym.resid.get(p)
                if hit is not None:
                    vs, lvs, sb = hit
                    extra = sb
                    if vs:
                        extra += int((self.vsign[list(vs)] < 0).sum())
                    for c in lvs:
                        extra += int(self.zv_fixed[c])
            if (int(par[i]) + extra) & 1:
                out.append(i)
        return out

    # ------------------------------------------------------------------
    def _row_mult_into(self, tz, ta, tsb, sz, sa, ssb):
        """target <- source * target (left multiplication), canonical form.
        Returns new sign bit."""
        g = self.g
        # target Z bits crossing source A bits
        zr = np.nonzero(tz)[0]
        if zr.size:
            qmat = g.edge2plaq[zr]
            cross = int(sa[qmat[:, 0]].sum() + sa[qmat[:, 1]].sum())
        else:
            cross = 0
        # A-part merge: inversions (q in source A) > (q' in target A) handled
        # via adjacency; equal indices annihilate without factor
        neg = 0
        ta_idx = np.nonzero(ta)[0]
        if ta_idx.size and sa.any():
            vsign = self.vsign
            adj = g.plaq_adj
            adjv = g.plaq_adj_vert
            for qp in ta_idx:
                nbrs = adj[qp]
                for slot in range(6):
                    n = nbrs[slot]
                    if n > qp and sa[n]:
                        pv = adjv[qp, slot]
                        if vsign[pv[0]] * vsign[pv[1]] < 0:
                            neg ^= 1
        new_sb = (tsb ^ ssb ^ (cross & 1) ^ neg) & 1
        tz ^= sz
        ta ^= sa
        return new_sb

    # ------------------------------------------------------------------
    def measure_plaquette(self, p: int, rng, count: bool = True,
                          pair_cache: dict | None = None) -> int:
        if count:
            self.a_meas_count += 1
        r = self.prist_slot[p]
        if r >= 0:
            return 1 - 2 * int(self.prist_sb[p])

        anti_g = self._anti(p, self.gz, self.ga)
        hits = np.nonzero(anti_g)[0]
        anti_recs = self._anti_records(p)
        if hits.size:
            return self._case_a(p, rng, hits, anti_recs)
        if anti_recs:
            return self._collapse(p, rng, anti_recs)
        return self._case_b(p, pair_cache)

    def _case_a(self, p, rng, hits, anti_recs):
        m = 1 - 2 * int(rng.integers(0, 2))
        pivot = int(hits[0])
        g1z, g1a, g1sb = self.gz[pivot].copy(), self.ga[pivot].copy(), int(self.gsb[pivot])

        for r in hits[1:]:
            self.gsb[r] = self._row_mult_into(self.gz[r], self.ga[r],
                                              int(self.gsb[r]), g1z, g1a, g1sb)
            pr = self.prist_of_row[r]
            if pr >= 0:
                self.prist_slot[pr] = -1
                self.prist_of_row[r] = -1
        anti_d = self._anti(p, self.dz, self.da)
        anti_d[~self.has_destab] = False
        for r in np.nonzero(anti_d)[0]:
            if r == pivot:
                continue
            self.dsb[r] = self._row_mult_into(self.dz[r], self.da[r],
                                              int(self.dsb[r]), g1z, g1a, g1sb)
        for i in anti_recs:
            rec = self.logicals[i]
            rec.sb = self._row_mult_into(rec.z, rec.a, rec.sb, g1z, g1a, g1sb)

        self.dz[pivot], self.da[pivot], self.dsb[pivot] = g1z, g1a, g1sb
        self.has_destab[pivot] = True
        self.gz[pivot] = 0
        self.ga[pivot] = 0
        self.ga[pivot, p] = 1
        self.gsb[pivot] = 1 if m < 0 else 0
        old = self.prist_of_row[pivot]
        if old >= 0:
            self.prist_slot[old] = -1
        if self.prist_slot[p] < 0:
            self.prist_slot[p] = pivot
            self.prist_of_row[pivot] = p
            self.prist_sb[p] = self.gsb[pivot]
        return m

    def _collapse(self, p, rng, anti_recs):
        m = 1 - 2 * int(rng.integers(0, 2))
        # an already-collapsed record is an ordinary stabilizer row; using
        # it as the pivot leaves the surviving logicals intact
        already = [i for i in anti_recs
                   if self.logicals[i].collapsed and self.logicals[i].sym is None]
        if already:
            i0 = already[0]
            newly = False
        else:
            plain = [i for i in anti_recs if self.logicals[i].sym is None]
            i0 = plain[0] if plain else anti_recs[0]
            newly = True
            self.collapse_count += 1
        rec0 = self.logicals[i0]
        for i in anti_recs:
            if i == i0:
                continue
            rec = self.logicals[i]
            self._record_product(rec, rec0)
            if newly:
                rec.collapsed = True  # composite is no longer a basis logical
        rec0.collapsed = True
        rec0.sym = None
        rec0.kind = "Z"
        rec0.z[:] = 0
        rec0.a[:] = 0
        rec0.a[p] = 1
        rec0.sb = 1 if m < 0 else 0
        return m

    def _resid_value_bit(self, sym, q) -> int:
        hit = sym.resid.get(int(q))
        if hit is None:
            return 0
        vs, lvs, sb = hit
        neg = sb
        if vs:
            neg += int((self.vsign[list(vs)] < 0).sum())
        for c in lvs:
            neg += int(self.zv_fixed[c])
        return neg & 1

    def _record_product(self, rec, rec0):
        """rec <- rec0 * rec, exact canonical product of two logical
        records, including all cross terms with the dressed-loop symbols."""
        g = self.g
        extra = 0
        appass = []
        if rec0.sym is not None:
            s_a = rec0.sym.support_set
            for e in np.nonzero(rec.z)[0]:
                if int(e) in s_a:
                    extra ^= 1
            for q in np.nonzero(rec.a)[0]:
                extra ^= self._resid_value_bit(rec0.sym, q)
            if rec.sym is not None:
                tset, both = rec.sym.cross_appendage(rec0.sym)
                extra ^= both
                appass = sorted(tset)
        rec.sb = self._row_mult_into(rec.z, rec.a, rec.sb,
                                     rec0.z, rec0.a, rec0.sb) ^ extra
        for t in appass:
            for qq in g.edge2plaq[t]:
                rec.sb ^= int(rec.a[qq])
            rec.z[t] ^= 1
        if rec0.sym is not None:
            rec.sym = rec.sym.merged_with(rec0.sym, g) if rec.sym is not None \
                else rec0.sym

    # ------------------------------------------------------------------
    def _wind6(self, z) -> int:
        g = self.g
        w = 0
        for c in range(3):
            if int(z[g.xlog_h[c]].sum()) & 1:
                w |= 1 << (2 * c)
            if int(z[g.xlog_v[c]].sum()) & 1:
                w |= 1 << (2 * c + 1)
        return w

    def _anti_d_vs_row(self, rz, ra):
        """On-state anticommutation bits of every destabilizer row against
        the operator (Z on rz) * (checks on ra)."""
        g = self.g
        par = np.zeros(self.dz.shape[0], dtype=np.int64)
        zidx = np.nonzero(rz)[0]
        if zidx.size:
            q = g.edge2plaq[zidx]
            par += self.da[:, q[:, 0]].sum(axis=1, dtype=np.int64)
            par += self.da[:, q[:, 1]].sum(axis=1, dtype=np.int64)
        aidx = np.nonzero(ra)[0]
        if aidx.size:
            bedges = g.boundary[aidx].ravel()
            par += self.dz[:, bedges].sum(axis=1, dtype=np.int64)
            for qp in aidx:
                nbrs = g.plaq_adj[qp]
                pv = g.plaq_adj_vert[qp]
                f = (self.vsign[pv[:, 0]] * self.vsign[pv[:, 1]]) < 0
                if f.any():
                    par += self.da[:, nbrs[f]].sum(axis=1, dtype=np.int64)
        return (par & 1).astype(bool)

    def _case_b(self, p, pair_cache=None):
        """Deterministic measurement outcome: express the check as a product
        of generator rows, special rows (no destabilizer partner) and
        Z-type logical records, leaving a pure-Z residual whose value is the
        enclosed-defect parity. Membership of the generator rows is read off
        the destabilizers, corrected for whichever special rows enter. The
        empty correction set resolves almost every measurement and is tried
        before building the correction machinery."""
        g = self.g
        P = g.n_plaquettes
        anti_base = self._anti(p, self.dz, self.da)
        anti_base &= self.has_destab
        base_a = _xor_rows(self.ga, anti_base)
        base_a[p] ^= 1
        base_z = _xor_rows(self.gz, anti_base)

        if not base_a.any():
            val = self._pure_z_value(base_z)
            if val != 0:
                return self._assemble_case_b(p, anti_base, [], [], base_z, val)

        cands = []
        for r in range(P):
            if not self.has_destab[r]:
                cands.append(("G", r, self.gz[r], self.ga[r]))
        for i, rec in enumerate(self.logicals):
            if rec.sym is None:
                cands.append(("L", i, rec.z, rec.a))
        k = len(cands)
        if k > 14:
            raise TableauError("too many non-generator rows")

        d_flip = []
        delta_a = []
        delta_z = []
        for kind, i, cz, ca in cands:
            df = self._anti_d_vs_row(cz, ca)
            df &= self.has_destab
            d_flip.append(df)
            delta_a.append(ca ^ _xor_rows(self.ga, df))
            delta_z.append(cz ^ _xor_rows(self.gz, df))

        for mask in _mask_order(k):
            if mask == 0:
                continue
            ta = base_a.copy()
            tz = base_z.copy()
            for i in range(k):
                if mask >> i & 1:
                    ta = ta ^ delta_a[i]
                    tz = tz ^ delta_z[i]
            if ta.any():
                continue
            val = self._pure_z_value(tz)
            if val == 0:
                continue
            anti = anti_base.copy()
            for i in range(k):
                if mask >> i & 1:
                    anti ^= d_flip[i]
            chosen = [cands[i] for i in range(k) if mask >> i & 1]
            return self._assemble_case_b(p, anti, cands, chosen, tz, val)
        raise TableauError("measurement not resolvable")

    def _assemble_case_b(self, p, anti, cands, chosen, tz, val):
        g = self.g
        rz = np.zeros(g.n_edges, dtype=np.uint8)
        ra = np.zeros(g.n_plaquettes, dtype=np.uint8)
        ra[p] = 1
        rsb = 0
        for r in np.nonzero(anti)[0]:
            rsb = self._row_mult_into(rz, ra, rsb, self.gz[r],
                                      self.ga[r], int(self.gsb[r]))
        for kind, idx, cz, ca in chosen:
            sb = int(self.gsb[idx]) if kind == "G" else self.logicals[idx].sb
            rsb = self._row_mult_into(rz, ra, rsb, cz, ca, sb)
        if ra.any() or not np.array_equal(rz, tz):
            raise TableauError("inconsistent measurement decomposition")
        return int((1 - 2 * rsb) * val)

    def _pure_z_value(self, rz) -> int:
        """Value of a pure-Z operator on the state, when its support is a
        XOR of vertex stars: the product of the enclosed vertex signs.
        Returns 0 when the support is not a star sum."""
        if not rz.any():
            return 1
        g = self.g
        val = 1
        colors = (int(c) for c in np.unique(g.edge_color[np.nonzero(rz)[0]]))
        for c in colors:
            order, pvert, pedge = g.vertex_tree(c)
            x = np.zeros(g.n_vertices, dtype=np.uint8)
            for i in range(1, order.shape[0]):
                v = order[i]
                x[v] = x[pvert[v]] ^ rz[pedge[v]]
            edges = g.per_color_edges[c]
            ev = g.edge2vert[edges]
            ok = (x[ev[:, 0]] ^ x[ev[:, 1]]) == rz[edges]
            if not ok.all():
                return 0
            sel = (x[order] == 1)
            if sel.any():
                val *= int(np.prod(self.vsign[order[sel]]))
        return val

    def plaquette_expectation(self, p: int, pair_cache=None) -> float:
        """Non-destructive <A_p>: 0 when a measurement would be stochastic,
        else the deterministic outcome."""
        r = self.prist_slot[p]
        if r >= 0:
            return float(1 - 2 * int(self.prist_sb[p]))
        if self._anti(p, self.gz, self.ga).any():
            return 0.0
        if any(self._anti_record(p, rec) for rec in self.logicals):
            return 0.0
        return float(self._case_b(p, pair_cache))

    def logical_signs(self):
        out = {}
        for rec in self.logicals:
            out[rec.label] = None if rec.collapsed else 1 - 2 * rec.sb
        return out

    def defect_vertices(self, color: int):
        verts = self.g.per_color_verts[color]
        return [int(v) for v in verts if self.vsign[v] < 0]

    # ------------------------------------------------------------------
    def snapshot(self) -> dict:
        return {
            "vsign": self.vsign.tolist(),
            "gz": self.gz.tolist(), "ga": self.ga.tolist(),
            "gsb": self.gsb.tolist(),
            "dz": self.dz.tolist(), "da": self.da.tolist(),
            "dsb": self.dsb.tolist(),
            "logicals": [
                {"label": list(r.label), "kind": r.kind, "sb": int(r.sb),
                 "collapsed": r.collapsed,
                 "z": r.z.tolist(), "a": r.a.tolist()}
                for r in self.logicals
            ],
        }


def tableau_init(g: LatticeGeometry, basis: str) -> QuasiStabilizerTableau:
    return QuasiStabilizerTableau(g, basis)
