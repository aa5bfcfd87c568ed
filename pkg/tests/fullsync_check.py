# End-to-end check: dense 27-qubit state vector vs the tableau on the
# smallest three-color torus, both bases, including measurement trajectories.
# Run directly (python3 tests/fullsync_check.py) or via the test wrapper.

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import numpy as np

from htsim import build_geometry
from htsim.tableau import tableau_init
from statevec import DenseOracle  # noqa: E402


def make_dense(g, basis):
    o = DenseOracle(g, dtype=np.float32)
    if basis == "zero":
        o.init_zero()
        for p in range(g.n_plaquettes):
            assert o.project_plaquette(p, +1) > 1e-7
    else:
        o.init_plus()
        for v in range(g.n_vertices):
            o.project_vertex(v, +1)
        for c in range(3):
            o.project_zstring(g.zlog_v[c], +1)
        for p in range(g.n_plaquettes):
            assert o.project_plaquette(p, +1) > 1e-7
        for c in range(3):
            w = o.project_pure(o.apply_loop_pure(g.loop_logical(c)), +1)
            assert w > 1e-7, ("XV projection annihilated state", c, w)
    assert o.norm2() > 0
    return o


def record_expectation(g, o, rec):
    """Expectation of a logical record's composite operator
    sign * Z(bits) * A(bits ascending) * [loop symbol]; rightmost acts
    first. The record stabilizes the state, so this must equal +1, i.e.
    the unsigned composite must equal the recorded sign."""
    psi = o.psi
    out = o.apply_loop_pure(rec.sym, psi) if rec.sym is not None else psi.copy()
    for q in sorted((int(x) for x in np.nonzero(rec.a)[0]), reverse=True):
        out = o.apply_plaquette_pure(q, out)
    zs = [int(e) for e in np.nonzero(rec.z)[0]]
    out = o._apply_pure([], [], zs, out)
    return o.expectation_pure(out)


def compare(g, t, o, basis, tag, check_plaqs=True):
    for v in range(g.n_vertices):
        bv = o.vertex_expectation(v)
        assert abs(bv - t.measure_vertex(v)) < 2e-3, (tag, "B", v, bv)
    if check_plaqs:
        for p in range(g.n_plaquettes):
            ap = o.plaquette_expectation(p)
            tap = t.plaquette_expectation(p)
            assert abs(ap - tap) < 5e-3, (tag, "A", p, ap, tap)
    for rec in t.logicals:
        if rec.collapsed:
            continue
        want = 1 - 2 * rec.sb
        got = record_expectation(g, o, rec)
        assert abs(got - want) < 5e-3, (tag, rec.label, got, want)


def run(basis, nsteps=40, seed=7, verbose=True):
    g = build_geometry(3, 3)
    t0 = time.time()
    o = make_dense(g, basis)
    t = tableau_init(g, basis)
    rng = np.random.default_rng(seed)
    compare(g, t, o, basis, f"{basis}:init")
    if verbose:
        print(f"{basis}: init sync OK ({time.time()-t0:.0f}s)", flush=True)
    for step in range(nsteps):
        r = rng.random()
        if r < 0.30:
            e = int(rng.integers(g.n_edges))
            t.apply_pauli_x(e)
            o.apply_x(e)
        elif r < 0.55:
            e = int(rng.integers(g.n_edges))
            t.apply_pauli_z(e)
            o.apply_z(e)
        else:
            p = int(rng.integers(g.n_plaquettes))
            exp = o.plaquette_expectation(p)
            tm = t.measure_plaquette(p, rng)
            if abs(exp) > 0.5:
                assert tm == int(np.sign(exp)), (basis, step, p, exp, tm)
            else:
                assert abs(exp) < 5e-3, (basis, step, p, exp)
            o.project_plaquette(p, tm)
    compare(g, t, o, basis, f"{basis}:final")
    if verbose:
        print(f"{basis}: {nsteps}-event trajectory sync PASSED "
              f"({time.time()-t0:.0f}s)", flush=True)


if __name__ == "__main__":
    for basis in ("zero", "plus"):
        run(basis)
    print("FULL SYNC OK")
