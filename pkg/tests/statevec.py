# Dense state-vector oracle used to validate the stabilizer machinery.
# Kept deliberately independent of the tableau implementation. All gates in
# this problem (X, Z, CZ) are real, so amplitudes are stored as real arrays;
# gates act through reshaped views and multi-axis flips, never through
# index arrays, keeping the memory footprint at ~2 state vectors.

from __future__ import annotations

import numpy as np


class DenseOracle:
    def __init__(self, g, qubits=None, dtype=None):
        self.g = g
        if qubits is None:
            qubits = list(range(g.n_edges))
        self.qubits = [int(e) for e in qubits]
        self.pos = {e: i for i, e in enumerate(self.qubits)}
        self.n = len(self.qubits)
        if dtype is None:
            dtype = np.float64 if self.n <= 24 else np.float32
        self.dtype = dtype
        self.psi = None

    # ------------------------------------------------------------------
    def init_zero(self):
        self.psi = np.zeros(2 ** self.n, dtype=self.dtype)
        self.psi[0] = 1.0

    def init_plus(self):
        self.psi = np.full(2 ** self.n, 2 ** (-self.n / 2), dtype=self.dtype)

    # ------------------------------------------------------------------
    def _cz_inplace(self, arr, e, f):
        i, j = sorted((self.pos[e], self.pos[f]))
        a, b, c = 2 ** i, 2 ** (j - i - 1), 2 ** (self.n - j - 1)
        v = arr.reshape(a, 2, b, 2, c)
        v[:, 1, :, 1, :] *= -1

    def _z_inplace(self, arr, e):
        i = self.pos[e]
        a, b = 2 ** i, 2 ** (self.n - i - 1)
        v = arr.reshape(a, 2, b)
        v[:, 1, :] *= -1

    def _apply_pure(self, xs, czs, zs, psi):
        """Return (Z's)(CZ's)(X flips)|psi> as a new array."""
        if xs:
            v = psi.reshape((2,) * self.n)
            axes = tuple(self.pos[e] for e in xs)
            out = np.ascontiguousarray(np.flip(v, axis=axes)).reshape(-1)
        else:
            out = psi.copy()
        for a, b in czs:
            self._cz_inplace(out, a, b)
        for e in zs:
            self._z_inplace(out, e)
        return out

    def plaquette_gates(self, p):
        g = self.g
        xs = [int(e) for e in g.boundary[p]]
        czs = [(int(a), int(b)) for a, b in g.cz_pairs[p]] if g.colors == 3 else []
        return xs, czs

    def apply_plaquette_pure(self, p, psi=None):
        psi = self.psi if psi is None else psi
        xs, czs = self.plaquette_gates(p)
        return self._apply_pure(xs, czs, [], psi)

    def apply_loop_pure(self, sym, psi=None):
        psi = self.psi if psi is None else psi
        return self._apply_pure(list(sym.edges), list(sym.pairs), [], psi)

    def apply_x(self, e):
        self.psi = self._apply_pure([e], [], [], self.psi)

    def apply_z(self, e):
        self._z_inplace(self.psi, e)

    def apply_cz(self, e, f):
        self._cz_inplace(self.psi, e, f)

    def apply_zstring(self, edges):
        for e in edges:
            self._z_inplace(self.psi, e)

    # ------------------------------------------------------------------
    def norm2(self):
        return float(np.dot(self.psi, self.psi))

    def expectation_pure(self, out) -> float:
        return float(np.dot(self.psi, out)) / self.norm2()

    def project_pure(self, out, sign) -> float:
        if sign > 0:
            self.psi += out
        else:
            self.psi -= out
        w = self.norm2() / 4.0
        if w > 1e-12:
            self.psi *= 0.5 / np.sqrt(w)
        return w

    def zdiag_expectation(self, edges) -> float:
        """Expectation of a product of Z's, by folding the weight tensor."""
        w = (self.psi * self.psi).reshape((2,) * self.n)
        axes = sorted((self.pos[int(e)] for e in edges), reverse=True)
        for ax in axes:
            w = w.take(0, axis=ax) - w.take(1, axis=ax)
        tot = self.norm2()
        return float(w.sum()) / tot

    def vertex_expectation(self, v) -> float:
        return self.zdiag_expectation([int(e) for e in self.g.star[v]])

    def plaquette_expectation(self, p) -> float:
        return self.expectation_pure(self.apply_plaquette_pure(p))

    def project_plaquette(self, p, sign) -> float:
        return self.project_pure(self.apply_plaquette_pure(p), sign)

    def project_zstring(self, edges, sign) -> float:
        out = self._apply_pure([], [], [int(e) for e in edges], self.psi)
        return self.project_pure(out, sign)

    def project_vertex(self, v, sign) -> float:
        return self.project_zstring([int(e) for e in self.g.star[v]], sign)


def patch_qubits(g, plaqs, extra_edges=()):
    """All qubits touched by the given plaquettes (boundary + interior)."""
    qs = set(int(e) for e in extra_edges)
    for p in plaqs:
        qs.update(int(e) for e in g.boundary[p])
        if g.colors == 3:
            qs.update(int(e) for e in g.interior[p])
    return sorted(qs)
