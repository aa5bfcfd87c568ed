# Minimum-weight perfect matching on small dense graphs.
#
# Primal-dual blossom algorithm, O(n^3). Internally solves MAXIMUM-weight
# perfect matching with a standard affine weight shift; integer weights keep
# every dual integral. Indices are 1-based inside the solver (0 = null), with
# ids 1..n for vertices and n+1..3n/2+1 for blossoms. The hot path lives in
# _blossom (jitted); the class below is the reference implementation kept
# for cross-checking.

from __future__ import annotations

import numpy as np

from ._blossom import solve_max_weight_pm

INF = float("inf")


class _Solver:
    def __init__(self, W):
        n = W.shape[0]
        self.n = n
        N = n + n // 2 + 2
        self.N = N
        self.gu = np.zeros((N, N), dtype=np.int64)
        self.gv = np.zeros((N, N), dtype=np.int64)
        self.gw = np.zeros((N, N), dtype=np.int64)
        for u in range(1, n + 1):
            for v in range(1, n + 1):
                self.gu[u, v] = u
                self.gv[u, v] = v
                if u != v:
                    self.gw[u, v] = W[u - 1, v - 1]
        self.lab = np.zeros(N, dtype=np.int64)
        wmax = int(W.max()) if n else 0
        self.lab[1:n + 1] = wmax
        self.match = np.zeros(N, dtype=np.int64)
        self.slack = np.zeros(N, dtype=np.int64)
        self.st = np.arange(N, dtype=np.int64)
        self.pa = np.zeros(N, dtype=np.int64)
        self.S = np.full(N, -1, dtype=np.int64)
        self.vis = np.zeros(N, dtype=np.int64)
        self.flower = [[] for _ in range(N)]
        self.flower_from = np.zeros((N, n + 1), dtype=np.int64)
        for x in range(1, n + 1):
            self.flower_from[x, x] = x
        self.n_x = n
        self.q = []
        self.t = 0

    # ------------------------------------------------------------------
    def e_delta(self, u, v):
        return (self.lab[self.gu[u, v]] + self.lab[self.gv[u, v]]
                - 2 * self.gw[u, v])

    def update_slack(self, u, x):
        if not self.slack[x] or \
                self.e_delta(u, x) < self.e_delta(self.slack[x], x):
            self.slack[x] = u

    def set_slack(self, x):
        self.slack[x] = 0
        for u in range(1, self.n + 1):
            if self.gw[u, x] > 0 and self.st[u] != x and self.S[self.st[u]] == 0:
                self.update_slack(u, x)

    def q_push(self, x):
        stack = [x]
        while stack:
            y = stack.pop()
            if y <= self.n:
                self.q.append(y)
            else:
                stack.extend(self.flower[y])

    def set_st(self, x, b):
        stack = [x]
        while stack:
            y = stack.pop()
            self.st[y] = b
            if y > self.n:
                stack.extend(self.flower[y])

    def get_pr(self, b, xr):
        fl = self.flower[b]
        pr = fl.index(xr)
        if pr % 2 == 1:
            fl[1:] = fl[:0:-1]
            return len(fl) - pr
        return pr

    def set_match(self, u, v):
        self.match[u] = self.gv[u, v]
        if u <= self.n:
            return
        xr = self.flower_from[u, self.gu[u, v]]
        pr = self.get_pr(u, xr)
        fl = self.flower[u]
        for i in range(pr):
            self.set_match(fl[i], fl[i ^ 1])
        self.set_match(xr, v)
        self.flower[u] = fl[pr:] + fl[:pr]

    def augment(self, u, v):
        while True:
            xnv = self.st[self.match[u]]
            self.set_match(u, v)
            if not xnv:
                return
            self.set_match(xnv, self.st[self.pa[xnv]])
            u, v = self.st[self.pa[xnv]], xnv

    def get_lca(self, u, v):
        self.t += 1
        while u or v:
            if u:
                if self.vis[u] == self.t:
                    return u
                self.vis[u] = self.t
                u = self.st[self.match[u]]
                if u:
                    u = self.st[self.pa[u]]
            u, v = v, u
        return 0

    def add_blossom(self, u, lca, v):
        b = self.n + 1
        while b <= self.n_x and self.st[b]:
            b += 1
        if b > self.n_x:
            self.n_x += 1
        self.lab[b] = 0
        self.S[b] = 0
        self.match[b] = self.match[lca]
        fl = [lca]
        x = self.st[u]
        while x != lca:
            fl.append(x)
            y = self.st[self.match[x]]
            fl.append(y)
            self.q_push(y)
            x = self.st[self.pa[y]]
        fl[1:] = fl[:0:-1]
        x = self.st[v]
        while x != lca:
            fl.append(x)
            y = self.st[self.match[x]]
            fl.append(y)
            self.q_push(y)
            x = self.st[self.pa[y]]
        self.flower[b] = fl
        self.set_st(b, b)
        for x in range(1, self.n_x + 1):
            self.gw[b, x] = self.gw[x, b] = 0
        self.flower_from[b, 1:] = 0
        for xs in fl:
            for x in range(1, self.n_x + 1):
                if self.gw[b, x] == 0 or \
                        self.e_delta(xs, x) < self.e_delta(b, x):
                    self.gu[b, x] = self.gu[xs, x]
                    self.gv[b, x] = self.gv[xs, x]
                    self.gw[b, x] = self.gw[xs, x]
                    self.gu[x, b] = self.gv[xs, x]
                    self.gv[x, b] = self.gu[xs, x]
                    self.gw[x, b] = self.gw[xs, x]
            if xs <= self.n:
                self.flower_from[b, xs] = xs
            else:
                for x in range(1, self.n + 1):
                    if self.flower_from[xs, x]:
                        self.flower_from[b, x] = xs
        self.set_slack(b)

    def expand_blossom(self, b):
        for xs in list(self.flower[b]):
            self.set_st(xs, xs)
        xr = self.flower_from[b, self.gu[b, self.pa[b]]]
        pr = self.get_pr(b, xr)
        fl = self.flower[b]
        i = 0
        while i < pr:
            xs = fl[i]
            xns = fl[i + 1]
            self.pa[xs] = self.gu[xns, xs]
            self.S[xs] = 1
            self.S[xns] = 0
            self.slack[xs] = 0
            self.set_slack(xns)
            self.q_push(xns)
            i += 2
        self.S[xr] = 1
        self.pa[xr] = self.pa[b]
        for i in range(pr + 1, len(fl)):
            xs = fl[i]
            self.S[xs] = -1
            self.set_slack(xs)
        self.st[b] = 0
        self.flower[b] = []

    def on_found_edge(self, eu, ev):
        u, v = self.st[eu], self.st[ev]
        if self.S[v] == -1:
            self.pa[v] = eu
            self.S[v] = 1
            nu = self.st[self.match[v]]
            self.slack[v] = 0
            self.slack[nu] = 0
            self.S[nu] = 0
            self.q_push(nu)
        elif self.S[v] == 0:
            lca = self.get_lca(u, v)
            if not lca:
                self.augment(u, v)
                self.augment(v, u)
                return True
            self.add_blossom(eu, lca, ev)
        return False

    def matching_phase(self):
        self.S[:] = -1
        self.slack[:] = 0
        self.q = []
        for x in range(1, self.n_x + 1):
            if self.st[x] == x and not self.match[x]:
                self.pa[x] = 0
                self.S[x] = 0
                self.q_push(x)
        if not self.q:
            return False
        while True:
            while self.q:
                u = self.q.pop(0)
                if self.S[self.st[u]] == 1:
                    continue
                for v in range(1, self.n + 1):
                    if self.gw[u, v] > 0 and self.st[u] != self.st[v]:
                        if self.e_delta(u, v) == 0:
                            if self.on_found_edge(u, v):
                                return True
                        else:
                            self.update_slack(u, self.st[v])
            d = None
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b and self.S[b] == 1:
                    cand = self.lab[b] // 2
                    d = cand if d is None else min(d, cand)
            for x in range(1, self.n_x + 1):
                if self.st[x] == x and self.slack[x]:
                    delta = self.e_delta(self.slack[x], x)
                    if self.S[x] == -1:
                        cand = delta
                    elif self.S[x] == 0:
                        cand = delta // 2
                    else:
                        continue
                    d = cand if d is None else min(d, cand)
            if d is None:
                raise RuntimeError("no perfect matching exists")
            for u in range(1, self.n + 1):
                if self.S[self.st[u]] == 0:
                    self.lab[u] -= d
                elif self.S[self.st[u]] == 1:
                    self.lab[u] += d
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b and self.S[b] >= 0:
                    self.lab[b] += 2 * d if self.S[b] == 0 else -2 * d
            self.q = []
            for x in range(1, self.n_x + 1):
                if self.st[x] == x and self.slack[x] and \
                        self.st[self.slack[x]] != x and \
                        self.e_delta(self.slack[x], x) == 0:
                    if self.on_found_edge(self.slack[x], x):
                        return True
            for b in range(self.n + 1, self.n_x + 1):
                if self.st[b] == b and self.S[b] == 1 and self.lab[b] == 0:
                    self.expand_blossom(b)

    def solve(self):
        while self.matching_phase():
            pass
        return self.match[1:self.n + 1] - 1


def max_weight_perfect_matching(W: np.ndarray, reference: bool = False) -> np.ndarray:
    """Maximum-weight perfect matching of a dense weight matrix with
    strictly positive integer weights. Returns mate[i]."""
    n = W.shape[0]
    if n % 2:
        raise ValueError("odd number of nodes")
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if reference:
        mate = _Solver(W.astype(np.int64)).solve()
    else:
        mate = solve_max_weight_pm(np.ascontiguousarray(W, dtype=np.int64))
    if np.any(mate < 0):
        raise RuntimeError("matching incomplete")
    return mate


def mwpm(dist: np.ndarray) -> list[tuple[int, int]]:
    """Minimum-weight perfect matching for a symmetric integer distance
    matrix; deterministic for fixed input. Returns index pairs."""
    n = dist.shape[0]
    if n % 2:
        raise ValueError("odd number of defects cannot be paired")
    if n == 0:
        return []
    if n == 2:
        return [(0, 1)]
    d = dist.astype(np.int64)
    big = int(d.max()) * n + 1
    W = big - d
    np.fill_diagonal(W, 0)
    mate = max_weight_perfect_matching(W)
    return [(i, int(mate[i])) for i in range(n) if i < mate[i]]


def matching_weight(dist: np.ndarray, pairs) -> int:
    return int(sum(dist[a, b] for a, b in pairs))


def brute_force_mwpm(dist: np.ndarray) -> list[tuple[int, int]]:
    """Exhaustive minimum over all pairings; oracle for small n."""
    n = dist.shape[0]
    if n % 2:
        raise ValueError("odd number of defects cannot be paired")
    if n > 12:
        raise ValueError("brute force limited to n <= 12")
    best = (None, None)

    def rec(rem, acc, w):
        nonlocal best
        if not rem:
            if best[0] is None or w < best[0]:
                best = (w, list(acc))
            return
        a = rem[0]
        for j in range(1, len(rem)):
            b = rem[j]
            acc.append((a, b))
            rec(rem[1:j] + rem[j + 1:], acc, w + int(dist[a, b]))
            acc.pop()

    rec(list(range(n)), [], 0)
    return best[1]


def greedy_pairing(dist: np.ndarray) -> list[tuple[int, int]]:
    """Deterministic nearest-neighbor pairing (not minimum weight)."""
    n = dist.shape[0]
    if n % 2:
        raise ValueError("odd number of defects cannot be paired")
    rem = list(range(n))
    pairs = []
    while rem:
        a = rem.pop(0)
        j = int(np.argmin([dist[a, b] for b in rem]))
        pairs.append((a, rem.pop(j)))
    return pairs
