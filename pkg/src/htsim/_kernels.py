# Event-loop kernels for the random sequential update dynamics.
#
# One Monte Carlo sweep performs one site event per edge. Each event draws
# the edge, a binary choice fixing the incident vertex/plaquette acted on,
# and a branch variable selecting heralded noise (4 outcomes), unheralded
# noise (3), X correction or Z correction. Flag updates are resolved fully
# in-kernel (the flags are an autonomous classical subsystem); actions that
# touch the quantum state are either applied to the Pauli frame in-kernel
# (toric mode) or emitted as an action list that the caller replays against
# the tableau (d4 mode).

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in prod
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(f):
            return f

        return deco


# modes
FLAGS_TORIC = 0
FLAGS_D4 = 1
FRAME_TORIC = 2
ACTIONS_D4 = 3

# action codes
ACT_X = 0
ACT_Z = 1
ACT_ZX = 2
ACT_XLEAF = 3
ACT_XLOOP = 4
ACT_ZLEAF = 5
ACT_ZLOOP = 6

# Z-loop patterns keyed by the flag bits on the (N, NW, SW) boundary slots:
# lowered slots (-1 padded), raised external slots, push slot
_ZL_LOWER = np.array([[0, 1, -1], [1, 2, -1], [0, 2, -1], [0, 1, 2]], dtype=np.int32)
_ZL_RAISE = np.array([[0, -1], [1, -1], [0, 1], [0, 1]], dtype=np.int32)
_ZL_PUSH = np.array([0, 1, 0, 0], dtype=np.int32)


@njit(cache=True)
def _zl_pattern(f0, f1, f2):
    if f0 and f1 and not f2:
        return 0
    if not f0 and f1 and f2:
        return 1
    if f0 and not f1 and f2:
        return 2
    if f0 and f1 and f2:
        return 3
    return -1


@njit(cache=True)
def event_loop(
    mode,
    nsweeps,
    rng,
    # flag state
    nX, nZ,
    # frame state (toric mode; dummies otherwise)
    ex, ez, bdef, adef, logpar,
    in_zh, in_zv, in_xh, in_xv,
    # tables
    edge2vert, edge2plaq, star, bnd, interior,
    sub1, xl_up, xl_left, xl_third, xl_outer, zl_ext,
    leafz, loopz,
    # branch cumulative probabilities (7 entries; z-correction is the tail)
    cum,
    # recording
    rec_nx, rec_nz, rec_ndb, rec_nda, rec_ameas,
    # early stop: observable 0=nX 1=nZ 2=mean, threshold<0 disables
    stop_obs, stop_threshold,
    # action emission buffer
    actions,
):
    E = nX.shape[0]
    V = star.shape[0]
    P = bnd.shape[0]
    d4 = mode == FLAGS_D4 or mode == ACTIONS_D4
    frame = mode == FRAME_TORIC
    emit = mode == ACTIONS_D4

    cntX = 0
    cntZ = 0
    for e in range(E):
        cntX += nX[e]
        cntZ += nZ[e]

    nact = 0
    ameas = 0
    done_sweep = -1

    for sweep in range(nsweeps):
        for _ in range(E):
            j = rng.integers(0, E)
            b = rng.integers(0, 2)
            u = rng.random()

            if u < cum[3]:
                # heralded noise: X / Z / ZX / identity, flags always raised
                if nX[j] == 0:
                    nX[j] = 1
                    cntX += 1
                if nZ[j] == 0:
                    nZ[j] = 1
                    cntZ += 1
                if u < cum[0]:
                    kind = ACT_X
                elif u < cum[1]:
                    kind = ACT_Z
                elif u < cum[2]:
                    kind = ACT_ZX
                else:
                    kind = -1
                if kind >= 0:
                    if frame:
                        _frame_pauli(kind, j, ex, ez, bdef, adef, logpar,
                                     in_zh, in_zv, in_xh, in_xv,
                                     edge2vert, edge2plaq)
                    elif emit:
                        actions[nact, 0] = kind
                        actions[nact, 1] = j
                        actions[nact, 2] = sweep
                        nact += 1
            elif u < cum[6]:
                # unheralded noise: X / Z / ZX, no flags
                if u < cum[4]:
                    kind = ACT_X
                elif u < cum[5]:
                    kind = ACT_Z
                else:
                    kind = ACT_ZX
                if frame:
                    _frame_pauli(kind, j, ex, ez, bdef, adef, logpar,
                                 in_zh, in_zv, in_xh, in_xv,
                                 edge2vert, edge2plaq)
                elif emit:
                    actions[nact, 0] = kind
                    actions[nact, 1] = j
                    actions[nact, 2] = sweep
                    nact += 1
            elif u < cum[7]:
                # X correction at the chosen incident vertex
                v = edge2vert[j, b]
                s = nX[star[v, 0]] + nX[star[v, 1]] + nX[star[v, 2]]
                if s == 1:
                    k = star[v, 0]
                    if nX[star[v, 1]]:
                        k = star[v, 1]
                    elif nX[star[v, 2]]:
                        k = star[v, 2]
                    nX[k] = 0
                    cntX -= 1
                    if d4:
                        for i in range(4):
                            t = leafz[k, i]
                            if nZ[t] == 0:
                                nZ[t] = 1
                                cntZ += 1
                    if frame:
                        if bdef[v]:
                            _frame_pauli(ACT_X, k, ex, ez, bdef, adef, logpar,
                                         in_zh, in_zv, in_xh, in_xv,
                                         edge2vert, edge2plaq)
                    elif emit:
                        actions[nact, 0] = ACT_XLEAF
                        actions[nact, 1] = v
                        actions[nact, 2] = k
                        nact += 1
                elif sub1[v] == 1:
                    up = xl_up[v]
                    left = xl_left[v]
                    if nX[up] == 1 and nX[left] == 1 and nX[xl_third[v]] == 0:
                        nX[up] = 0
                        nX[left] = 0
                        cntX -= 2
                        for i in range(4):
                            t = xl_outer[v, i]
                            if nX[t] == 0:
                                nX[t] = 1
                                cntX += 1
                        if d4:
                            for i in range(6):
                                t = loopz[v, i]
                                if nZ[t] == 0:
                                    nZ[t] = 1
                                    cntZ += 1
                        if frame:
                            if bdef[v]:
                                _frame_pauli(ACT_X, up, ex, ez, bdef, adef,
                                             logpar, in_zh, in_zv, in_xh,
                                             in_xv, edge2vert, edge2plaq)
                        elif emit:
                            actions[nact, 0] = ACT_XLOOP
                            actions[nact, 1] = v
                            actions[nact, 2] = up
                            nact += 1
            else:
                # Z correction at the chosen incident plaquette
                p = edge2plaq[j, b]
                if d4:
                    blocked = False
                    for i in range(6):
                        if nX[interior[p, i]]:
                            blocked = True
                            break
                    if blocked:
                        continue
                cnt = 0
                for i in range(6):
                    cnt += nZ[bnd[p, i]]
                if cnt == 1:
                    k = bnd[p, 0]
                    for i in range(1, 6):
                        if nZ[bnd[p, i]]:
                            k = bnd[p, i]
                    ameas += 1
                    nZ[k] = 0
                    cntZ -= 1
                    if frame:
                        if adef[p]:
                            _frame_pauli(ACT_Z, k, ex, ez, bdef, adef, logpar,
                                         in_zh, in_zv, in_xh, in_xv,
                                         edge2vert, edge2plaq)
                    elif emit:
                        actions[nact, 0] = ACT_ZLEAF
                        actions[nact, 1] = p
                        actions[nact, 2] = k
                        nact += 1
                elif cnt >= 2 and nZ[bnd[p, 3]] == 0 and nZ[bnd[p, 4]] == 0 \
                        and nZ[bnd[p, 5]] == 0:
                    pat = _zl_pattern(nZ[bnd[p, 0]], nZ[bnd[p, 1]], nZ[bnd[p, 2]])
                    if pat >= 0:
                        ameas += 1
                        for i in range(3):
                            sl = _ZL_LOWER[pat, i]
                            if sl >= 0:
                                nZ[bnd[p, sl]] = 0
                                cntZ -= 1
                        for i in range(2):
                            sl = _ZL_RAISE[pat, i]
                            if sl >= 0:
                                t = zl_ext[p, sl]
                                if nZ[t] == 0:
                                    nZ[t] = 1
                                    cntZ += 1
                        if frame:
                            if adef[p]:
                                k = bnd[p, _ZL_PUSH[pat]]
                                _frame_pauli(ACT_Z, k, ex, ez, bdef, adef,
                                             logpar, in_zh, in_zv, in_xh,
                                             in_xv, edge2vert, edge2plaq)
                        elif emit:
                            actions[nact, 0] = ACT_ZLOOP
                            actions[nact, 1] = p
                            actions[nact, 2] = pat
                            nact += 1

        rec_nx[sweep] = cntX / E
        rec_nz[sweep] = cntZ / E
        rec_ameas[sweep] = ameas
        ameas = 0
        if frame:
            db = 0
            for v in range(V):
                db += bdef[v]
            da = 0
            for p in range(P):
                da += adef[p]
            rec_ndb[sweep] = db / V
            rec_nda[sweep] = da / P
        if stop_threshold >= 0.0:
            if stop_obs == 0:
                obs = cntX / E
            elif stop_obs == 1:
                obs = cntZ / E
            else:
                obs = 0.5 * (cntX + cntZ) / E
            if obs >= stop_threshold:
                done_sweep = sweep
                break

    return nact, done_sweep


@njit(cache=True)
def _frame_pauli(kind, j, ex, ez, bdef, adef, logpar,
                 in_zh, in_zv, in_xh, in_xv, edge2vert, edge2plaq):
    if kind == ACT_X or kind == ACT_ZX:
        ex[j] ^= 1
        bdef[edge2vert[j, 0]] ^= 1
        bdef[edge2vert[j, 1]] ^= 1
        logpar[0] ^= in_zh[j]
        logpar[1] ^= in_zv[j]
    if kind == ACT_Z or kind == ACT_ZX:
        ez[j] ^= 1
        adef[edge2plaq[j, 0]] ^= 1
        adef[edge2plaq[j, 1]] ^= 1
        logpar[2] ^= in_xh[j]
        logpar[3] ^= in_xv[j]
