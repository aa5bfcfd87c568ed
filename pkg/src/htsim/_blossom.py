# Array-based primal-dual blossom solver for maximum-weight perfect
# matching, O(n^3), jitted. Ids are 1-based (0 = null): 1..n vertices,
# n+1..N blossoms. Integer weights keep the duals integral.

from __future__ import annotations

import numpy as np

from ._kernels import njit


@njit(cache=True)
def _e_delta(u, v, gu, gv, gw, lab):
    return lab[gu[u, v]] + lab[gv[u, v]] - 2 * gw[u, v]


@njit(cache=True)
def _update_slack(u, x, gu, gv, gw, lab, slack):
    if slack[x] == 0 or _e_delta(u, x, gu, gv, gw, lab) < \
            _e_delta(slack[x], x, gu, gv, gw, lab):
        slack[x] = u


@njit(cache=True)
def _set_slack(x, n, gu, gv, gw, lab, slack, st, S):
    slack[x] = 0
    for u in range(1, n + 1):
        if gw[u, x] > 0 and st[u] != x and S[st[u]] == 0:
            _update_slack(u, x, gu, gv, gw, lab, slack)


@njit(cache=True)
def _q_push(x, n, flower, flen, q, qs):
    # iterative expansion of blossom members
    stack = np.empty(q.shape[0], dtype=np.int64)
    sp = 0
    stack[sp] = x
    sp += 1
    while sp > 0:
        sp -= 1
        y = stack[sp]
        if y <= n:
            q[qs[1]] = y
            qs[1] += 1
        else:
            for i in range(flen[y]):
                stack[sp] = flower[y, i]
                sp += 1


@njit(cache=True)
def _set_st(x, b, n, flower, flen, st):
    stack = np.empty(st.shape[0] * 4, dtype=np.int64)
    sp = 0
    stack[sp] = x
    sp += 1
    while sp > 0:
        sp -= 1
        y = stack[sp]
        st[y] = b
        if y > n:
            for i in range(flen[y]):
                stack[sp] = flower[y, i]
                sp += 1


@njit(cache=True)
def _get_pr(b, xr, flower, flen):
    l = flen[b]
    pr = 0
    for i in range(l):
        if flower[b, i] == xr:
            pr = i
            break
    if pr % 2 == 1:
        # reverse flower[b, 1:l]
        i, j = 1, l - 1
        while i < j:
            tmp = flower[b, i]
            flower[b, i] = flower[b, j]
            flower[b, j] = tmp
            i += 1
            j -= 1
        return l - pr
    return pr


@njit(cache=True)
def _set_match(u0, v0, n, gu, gv, match, flower, flen, flower_from):
    cap = flower.shape[0] * 4 + 16
    su = np.empty(cap, dtype=np.int64)
    sv = np.empty(cap, dtype=np.int64)
    sp = 0
    su[sp] = u0
    sv[sp] = v0
    sp += 1
    while sp > 0:
        sp -= 1
        u = su[sp]
        v = sv[sp]
        match[u] = gv[u, v]
        if u <= n:
            continue
        xr = flower_from[u, gu[u, v]]
        pr = _get_pr(u, xr, flower, flen)
        for i in range(pr):
            su[sp] = flower[u, i]
            sv[sp] = flower[u, i ^ 1]
            sp += 1
        su[sp] = xr
        sv[sp] = v
        sp += 1
        # rotate flower[u] left by pr
        l = flen[u]
        tmp = np.empty(l, dtype=np.int64)
        for i in range(l):
            tmp[i] = flower[u, (pr + i) % l]
        for i in range(l):
            flower[u, i] = tmp[i]
    return


@njit(cache=True)
def _augment(u, v, n, gu, gv, match, st, pa, flower, flen, flower_from):
    while True:
        xnv = st[match[u]]
        _set_match(u, v, n, gu, gv, match, flower, flen, flower_from)
        if xnv == 0:
            return
        _set_match(xnv, st[pa[xnv]], n, gu, gv, match, flower, flen, flower_from)
        u = st[pa[xnv]]
        v = xnv


@njit(cache=True)
def _get_lca(u, v, st, match, pa, vis, tcnt):
    t = tcnt[0] + 1
    tcnt[0] = t
    while u != 0 or v != 0:
        if u != 0:
            if vis[u] == t:
                return u
            vis[u] = t
            u = st[match[u]]
            if u != 0:
                u = st[pa[u]]
        tmp = u
        u = v
        v = tmp
    return 0


@njit(cache=True)
def _add_blossom(eu, lca, ev, n, nx_arr, gu, gv, gw, lab, match, slack, st,
                 pa, S, flower, flen, flower_from, q, qs):
    b = n + 1
    while b <= nx_arr[0] and st[b] != 0:
        b += 1
    if b > nx_arr[0]:
        nx_arr[0] = b
    lab[b] = 0
    S[b] = 0
    match[b] = match[lca]
    flen[b] = 0
    flower[b, 0] = lca
    flen[b] = 1
    x = st[eu]
    while x != lca:
        flower[b, flen[b]] = x
        flen[b] += 1
        y = st[match[x]]
        flower[b, flen[b]] = y
        flen[b] += 1
        _q_push(y, n, flower, flen, q, qs)
        x = st[pa[y]]
    # reverse flower[b, 1:flen]
    i, j = 1, flen[b] - 1
    while i < j:
        tmp = flower[b, i]
        flower[b, i] = flower[b, j]
        flower[b, j] = tmp
        i += 1
        j -= 1
    x = st[ev]
    while x != lca:
        flower[b, flen[b]] = x
        flen[b] += 1
        y = st[match[x]]
        flower[b, flen[b]] = y
        flen[b] += 1
        _q_push(y, n, flower, flen, q, qs)
        x = st[pa[y]]
    _set_st(b, b, n, flower, flen, st)
    nx = nx_arr[0]
    for x in range(1, nx + 1):
        gw[b, x] = 0
        gw[x, b] = 0
    for x in range(1, n + 1):
        flower_from[b, x] = 0
    for fi in range(flen[b]):
        xs = flower[b, fi]
        for x in range(1, nx + 1):
            if gw[b, x] == 0 or _e_delta(xs, x, gu, gv, gw, lab) < \
                    _e_delta(b, x, gu, gv, gw, lab):
                gu[b, x] = gu[xs, x]
                gv[b, x] = gv[xs, x]
                gw[b, x] = gw[xs, x]
                gu[x, b] = gv[xs, x]
                gv[x, b] = gu[xs, x]
                gw[x, b] = gw[xs, x]
        if xs <= n:
            flower_from[b, xs] = xs
        else:
            for x in range(1, n + 1):
                if flower_from[xs, x] != 0:
                    flower_from[b, x] = xs
    _set_slack(b, n, gu, gv, gw, lab, slack, st, S)


@njit(cache=True)
def _expand_blossom(b, n, gu, gv, gw, lab, match, slack, st, pa, S,
                    flower, flen, flower_from, q, qs):
    for i in range(flen[b]):
        _set_st(flower[b, i], flower[b, i], n, flower, flen, st)
    xr = flower_from[b, gu[b, pa[b]]]
    pr = _get_pr(b, xr, flower, flen)
    i = 0
    while i < pr:
        xs = flower[b, i]
        xns = flower[b, i + 1]
        pa[xs] = gu[xns, xs]
        S[xs] = 1
        S[xns] = 0
        slack[xs] = 0
        _set_slack(xns, n, gu, gv, gw, lab, slack, st, S)
        _q_push(xns, n, flower, flen, q, qs)
        i += 2
    S[xr] = 1
    pa[xr] = pa[b]
    for i in range(pr + 1, flen[b]):
        xs = flower[b, i]
        S[xs] = -1
        _set_slack(xs, n, gu, gv, gw, lab, slack, st, S)
    st[b] = 0
    flen[b] = 0


@njit(cache=True)
def _on_found_edge(eu, ev, n, nx_arr, gu, gv, gw, lab, match, slack, st, pa,
                   S, vis, tcnt, flower, flen, flower_from, q, qs):
    u = st[eu]
    v = st[ev]
    if S[v] == -1:
        pa[v] = eu
        S[v] = 1
        nu = st[match[v]]
        slack[v] = 0
        slack[nu] = 0
        S[nu] = 0
        _q_push(nu, n, flower, flen, q, qs)
    elif S[v] == 0:
        lca = _get_lca(u, v, st, match, pa, vis, tcnt)
        if lca == 0:
            _augment(u, v, n, gu, gv, match, st, pa, flower, flen, flower_from)
            _augment(v, u, n, gu, gv, match, st, pa, flower, flen, flower_from)
            return True
        _add_blossom(eu, lca, ev, n, nx_arr, gu, gv, gw, lab, match, slack,
                     st, pa, S, flower, flen, flower_from, q, qs)
    return False


@njit(cache=True)
def _matching_phase(n, nx_arr, gu, gv, gw, lab, match, slack, st, pa, S,
                    vis, tcnt, flower, flen, flower_from, q, qs):
    for x in range(S.shape[0]):
        S[x] = -1
        slack[x] = 0
    qs[0] = 0
    qs[1] = 0
    for x in range(1, nx_arr[0] + 1):
        if st[x] == x and match[x] == 0:
            pa[x] = 0
            S[x] = 0
            _q_push(x, n, flower, flen, q, qs)
    if qs[1] == 0:
        return 0
    while True:
        while qs[0] < qs[1]:
            u = q[qs[0]]
            qs[0] += 1
            if S[st[u]] == 1:
                continue
            for v in range(1, n + 1):
                if gw[u, v] > 0 and st[u] != st[v]:
                    if _e_delta(u, v, gu, gv, gw, lab) == 0:
                        if _on_found_edge(u, v, n, nx_arr, gu, gv, gw, lab,
                                          match, slack, st, pa, S, vis, tcnt,
                                          flower, flen, flower_from, q, qs):
                            return 1
                    else:
                        _update_slack(u, st[v], gu, gv, gw, lab, slack)
        d = np.int64(-1)
        for b in range(n + 1, nx_arr[0] + 1):
            if st[b] == b and S[b] == 1:
                cand = lab[b] // 2
                if d < 0 or cand < d:
                    d = cand
        for x in range(1, nx_arr[0] + 1):
            if st[x] == x and slack[x] != 0:
                delta = _e_delta(slack[x], x, gu, gv, gw, lab)
                if S[x] == -1:
                    cand = delta
                elif S[x] == 0:
                    cand = delta // 2
                else:
                    continue
                if d < 0 or cand < d:
                    d = cand
        if d < 0:
            return -1
        for u in range(1, n + 1):
            if S[st[u]] == 0:
                lab[u] -= d
            elif S[st[u]] == 1:
                lab[u] += d
        for b in range(n + 1, nx_arr[0] + 1):
            if st[b] == b and S[b] >= 0:
                if S[b] == 0:
                    lab[b] += 2 * d
                else:
                    lab[b] -= 2 * d
        qs[0] = 0
        qs[1] = 0
        for x in range(1, nx_arr[0] + 1):
            if st[x] == x and slack[x] != 0 and st[slack[x]] != x and \
                    _e_delta(slack[x], x, gu, gv, gw, lab) == 0:
                if _on_found_edge(slack[x], x, n, nx_arr, gu, gv, gw, lab,
                                  match, slack, st, pa, S, vis, tcnt,
                                  flower, flen, flower_from, q, qs):
                    return 1
        for b in range(n + 1, nx_arr[0] + 1):
            if st[b] == b and S[b] == 1 and lab[b] == 0:
                _expand_blossom(b, n, gu, gv, gw, lab, match, slack, st, pa,
                                S, flower, flen, flower_from, q, qs)


@njit(cache=True)
def solve_max_weight_pm(W):
    """mate[i] (0-based) for the maximum-weight perfect matching of the
    positive integer weight matrix W."""
    n = W.shape[0]
    N = n + n // 2 + 2
    gu = np.zeros((N, N), dtype=np.int64)
    gv = np.zeros((N, N), dtype=np.int64)
    gw = np.zeros((N, N), dtype=np.int64)
    wmax = np.int64(0)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            gu[u, v] = u
            gv[u, v] = v
            if u != v:
                gw[u, v] = W[u - 1, v - 1]
                if gw[u, v] > wmax:
                    wmax = gw[u, v]
    lab = np.zeros(N, dtype=np.int64)
    for u in range(1, n + 1):
        lab[u] = wmax
    match = np.zeros(N, dtype=np.int64)
    slack = np.zeros(N, dtype=np.int64)
    st = np.arange(N, dtype=np.int64)
    pa = np.zeros(N, dtype=np.int64)
    S = np.full(N, -1, dtype=np.int64)
    vis = np.zeros(N, dtype=np.int64)
    tcnt = np.zeros(1, dtype=np.int64)
    flower = np.zeros((N, n + 2), dtype=np.int64)
    flen = np.zeros(N, dtype=np.int64)
    flower_from = np.zeros((N, n + 1), dtype=np.int64)
    for x in range(1, n + 1):
        flower_from[x, x] = x
    q = np.zeros(16 * N + 64, dtype=np.int64)
    qs = np.zeros(2, dtype=np.int64)
    nx_arr = np.zeros(1, dtype=np.int64)
    nx_arr[0] = n

    while True:
        res = _matching_phase(n, nx_arr, gu, gv, gw, lab, match, slack, st,
                              pa, S, vis, tcnt, flower, flen, flower_from,
                              q, qs)
        if res == 0:
            break
        if res < 0:
            return np.full(n, -1, dtype=np.int64)
    mate = np.empty(n, dtype=np.int64)
    for i in range(n):
        mate[i] = match[i + 1] - 1
    return mate
