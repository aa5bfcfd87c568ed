import numpy as np
import pytest

from htsim.flags import RatesConfig
from htsim.meanfield import mf_integrate, mf_rhs, mf_scan


def test_fixed_points():
    r = RatesConfig(eta=1.0, gamma_x=5.0, gamma_z=7.0)
    assert mf_rhs(1.0, 1.0, r) == (0.0, 0.0)
    r0 = RatesConfig(eta=1.0, gamma_x=0.0, gamma_z=0.0)
    assert mf_rhs(0.0, 0.0, r0) == (1.0, 1.0)


def test_pure_filling_closed_form():
    r = RatesConfig(eta=1.0, gamma_x=0.0, gamma_z=0.0)
    for tf in (0.5, 1.0, 2.0):
        nx, nz = mf_integrate((0.0, 0.0), r, tf, dt=1e-3)
        assert abs(nx - (1 - np.exp(-tf))) < 1e-6
        assert abs(nz - (1 - np.exp(-tf))) < 1e-6


def test_x_transition_at_twice_noise_rate():
    # the stationary density solves 2 gx n (1-n) = eta; real roots need
    # gx >= 2 eta
    lo = RatesConfig(eta=1.0, gamma_x=1.9, gamma_z=0.0)
    hi = RatesConfig(eta=1.0, gamma_x=2.4, gamma_z=0.0)
    nx_lo, _ = mf_integrate((0.0, 0.0), lo, 300.0, dt=1e-2)
    nx_hi, _ = mf_integrate((0.0, 0.0), hi, 300.0, dt=1e-2)
    assert nx_lo > 0.98
    assert nx_hi < 0.6


def test_large_rates_stay_active():
    r = RatesConfig(eta=1.0, gamma_x=30.0, gamma_z=200.0)
    nx, nz = mf_integrate((0.0, 0.0), r, 1000.0, dt=1e-2)
    assert nx < 0.05 and nz < 0.2


def test_bounds_and_bad_dt():
    r = RatesConfig(eta=1.0, gamma_x=3.0, gamma_z=3.0)
    nx, nz = mf_integrate((0.0, 0.0), r, 50.0, dt=0.05)
    assert -1e-9 <= nx <= 1 + 1e-9 and -1e-9 <= nz <= 1 + 1e-9
    with pytest.raises(ValueError):
        mf_integrate((0, 0), r, 1.0, dt=0)


def test_scan_three_regions():
    gx = np.linspace(0, 10, 12)
    gz = np.linspace(0, 40, 12)
    nx, nz = mf_scan(gx, gz, t_final=2000.0, dt=1e-2)
    # absorbing corner
    assert nx[0, 0] > 0.99 and nz[0, 0] > 0.99
    # active at large rates
    assert nx[-1, -1] < 0.3 and nz[-1, -1] < 0.8
    # partially active strip: x active, z full, at high gx low gz
    assert nx[-1, 0] < 0.3 and nz[-1, 0] > 0.99
    # at large gz the absorbing region hands over to the fully active one
    # without an intermediate partially active strip
    top = (nx[:, -1] < 0.5) & (nz[:, -1] > 0.99)
    assert not top.any()
