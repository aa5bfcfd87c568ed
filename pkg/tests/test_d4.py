import numpy as np
import pytest

from htsim import build_geometry
from htsim.d4 import TrajectoryConfig, _streams, d4_event, run_trajectory
from htsim.flags import FlagState, RatesConfig, run_flag_sweeps
from htsim.tableau import tableau_init


@pytest.fixture(scope="module")
def g6():
    return build_geometry(6, 3)


def test_config_validation():
    r = RatesConfig(model="d4")
    with pytest.raises(ValueError):
        TrajectoryConfig(L=6, rates=r, t_final=0)
    with pytest.raises(ValueError):
        TrajectoryConfig(L=6, rates=r, record_stride=0)


def test_chunked_equals_event_by_event(g6):
    r = RatesConfig(eta=1.0, gamma_x=8.0, gamma_z=20.0, model="d4")
    cfg = TrajectoryConfig(L=6, rates=r, basis="plus", t_final=6, seed=11,
                           record_stride=2)
    out, t1, flags1 = run_trajectory(cfg, g6)
    rng_event, rng_coin, _ = _streams(11)
    t2 = tableau_init(g6, "plus")
    flags2 = FlagState.empty(g6)
    for _ in range(6 * g6.n_edges):
        d4_event(t2, flags2, g6, r, rng_event, rng_coin)
    assert np.array_equal(t1.vsign, t2.vsign)
    assert np.array_equal(t1.gz, t2.gz)
    assert np.array_equal(t1.ga, t2.ga)
    assert np.array_equal(t1.gsb, t2.gsb)
    assert np.array_equal(flags1.nX, flags2.nX)
    assert np.array_equal(flags1.nZ, flags2.nZ)
    for a, b in zip(t1.logicals, t2.logicals):
        assert a.sb == b.sb and np.array_equal(a.z, b.z)


def test_no_noise_is_inert(g6):
    r = RatesConfig(eta=0.0, gamma_x=20.0, gamma_z=50.0, model="d4")
    cfg = TrajectoryConfig(L=6, rates=r, basis="zero", t_final=20, seed=2,
                           record_stride=5)
    out, t, flags = run_trajectory(cfg, g6)
    assert not flags.nX.any() and not flags.nZ.any()
    assert (t.vsign == 1).all()
    assert out.nda[-1] == 0


def test_heralded_leaf_raises_decoration_flags(g6):
    """One heralded error, then a leaf correction: the lowered X flag leaves
    new Z flags on the four coupled edges."""
    r = RatesConfig(eta=0.0, gamma_x=10.0, gamma_z=0.0, model="d4")
    t = tableau_init(g6, "zero")
    flags = FlagState.empty(g6)
    j = 7
    t.apply_pauli_x(j)
    flags.nX[j] = 1
    flags.nZ[j] = 1
    rng_event, rng_coin, _ = _streams(5)
    for _ in range(40 * g6.n_edges):
        d4_event(t, flags, g6, r, rng_event, rng_coin)
        if not flags.nX.any():
            break
    assert not flags.nX.any()
    assert (t.vsign == 1).all()
    for h in g6.leaf_z_heralds[j]:
        assert flags.nZ[h] == 1


def test_z_correction_gated_on_interior_flags(g6):
    r = RatesConfig(eta=0.0, gamma_x=0.0, gamma_z=50.0, model="d4")
    t = tableau_init(g6, "zero")
    flags = FlagState.empty(g6)
    p = 0
    k = int(g6.boundary[p][0])
    flags.nZ[k] = 1
    blocker = int(g6.interior[p][0])
    flags.nX[blocker] = 1
    rng_event, rng_coin, _ = _streams(3)
    before = t.a_meas_count
    for _ in range(10 * g6.n_edges):
        d4_event(t, flags, g6, r, rng_event, rng_coin)
    # the other plaquette sharing k may clean it up, but p itself never fires
    # while its interior X flag stands: check the flag is still consistent
    q2 = int(g6.edge2plaq[k, 0])
    if q2 == p:
        q2 = int(g6.edge2plaq[k, 1])
    blocked_both = any(flags.nX[e] for e in g6.interior[q2])
    if blocked_both:
        assert flags.nZ[k] == 1
        assert t.a_meas_count == before


def test_flag_marginal_matches_flags_only(g6):
    """The flag state of the full dynamics is statistically identical to the
    flags-only simulation at equal rates."""
    r = RatesConfig(eta=1.0, gamma_x=8.0, gamma_z=30.0, model="d4")
    n = 24
    sweeps = 12
    full = np.zeros(2)
    only = np.zeros(2)
    for i in range(n):
        cfg = TrajectoryConfig(L=6, rates=r, basis="zero", t_final=sweeps,
                               seed=i, record_stride=sweeps)
        out, _, fl = run_trajectory(cfg, g6)
        full += (fl.nX.mean(), fl.nZ.mean())
        st = FlagState.empty(g6)
        rng = np.random.default_rng(np.random.SeedSequence([500, i]))
        run_flag_sweeps(st, g6, r, rng, sweeps)
        only += (st.nX.mean(), st.nZ.mean())
    full /= n
    only /= n
    assert abs(full[0] - only[0]) < 0.08
    assert abs(full[1] - only[1]) < 0.08


def test_heralding_invariant_full_dynamics(g6):
    r = RatesConfig(eta=1.0, gamma_x=10.0, gamma_z=60.0, phi_e=1.0, model="d4")
    for seed in range(3):
        cfg = TrajectoryConfig(L=6, rates=r, basis="zero", t_final=10,
                               seed=seed, record_stride=10)
        out, t, flags = run_trajectory(cfg, g6)
        for v in np.nonzero(t.vsign < 0)[0]:
            assert any(flags.nX[e] for e in g6.star[v]), (seed, v)


def test_expectation_estimates(g6):
    from htsim.d4 import defect_density_a, defect_density_b
    t = tableau_init(g6, "zero")
    assert defect_density_a(t) == 0.0
    assert defect_density_b(t) == 0.0
    rng = np.random.default_rng(0)
    for e in range(0, g6.n_edges, 2):
        t.apply_pauli_x(e)
        t.apply_pauli_z(e)
    nda = defect_density_a(t)
    assert 0.2 < nda <= 0.75


def test_flag_fidelity_bounds_full_fidelity(g6):
    """The empty-flag projector underestimates recovery: whenever all flags
    are down the decoder succeeds, so F_flag <= F ensemble-wise."""
    from htsim.metrics import flag_fidelity
    r = RatesConfig(eta=1.0, gamma_x=14.0, gamma_z=80.0, model="d4")
    n = 30
    f_flag = f_full = 0
    for i in range(n):
        cfg = TrajectoryConfig(L=6, rates=r, basis="zero", t_final=6,
                               seed=i, record_stride=6, decode_stride=6)
        out, t, fl = run_trajectory(cfg, g6)
        f_flag += flag_fidelity(fl)
        f_full += int(out.fid[-1])
        # per-trajectory implication: no flags -> decode succeeds
        if flag_fidelity(fl):
            assert out.fid[-1] == 1
    assert f_flag <= f_full


def test_seed_reproducibility(g6):
    r = RatesConfig(eta=1.0, gamma_x=8.0, gamma_z=30.0, model="d4")
    outs = []
    for _ in range(2):
        cfg = TrajectoryConfig(L=6, rates=r, basis="zero", t_final=8, seed=9,
                               record_stride=4, decode_stride=8)
        out, t, fl = run_trajectory(cfg, g6)
        outs.append((out.nx.tobytes(), out.nz.tobytes(), out.fid.tobytes(),
                     t.vsign.tobytes()))
    assert outs[0] == outs[1]
