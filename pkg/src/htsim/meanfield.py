# Site-approximation rate equations for the coupled flag densities and a
# fixed-step integrator for phase-diagram scans.

from __future__ import annotations

import numpy as np

from .flags import RatesConfig


def mf_rhs(nx, nz, r: RatesConfig):
    """Right-hand side of the site-approximation equations. The X density
    relaxes through leaf removal only; the Z density is fed by X
    corrections and drained by Z leaf moves gated on empty surroundings."""
    eta, gx, gz = r.eta, r.gamma_x, r.gamma_z
    dnx = eta * (1.0 - nx) - 2.0 * gx * nx * (1.0 - nx) ** 2
    dnz = (eta * (1.0 - nz)
           + 2.0 * gx * nx * (1.0 - nx) ** 2 * (1.0 - nz)
           - 2.0 * gz * nz * (1.0 - nz) ** 5 * (1.0 - nx) ** 6)
    return dnx, dnz


def mf_integrate(s0, r: RatesConfig, t_final: float, dt: float = 1e-2,
                 record_stride: int = 0, max_retries: int = 20):
    """Classical fourth-order fixed-step integration to t_final. A step
    leaving [0,1] beyond tolerance halves dt and retries, up to a cap.
    Returns (nx, nz) at t_final, or the recorded trajectory."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    tol = 1e-9
    nx, nz = float(s0[0]), float(s0[1])
    t = 0.0
    traj = [(t, nx, nz)] if record_stride else None
    k = 0
    while t < t_final - 1e-12:
        h = min(dt, t_final - t)
        retries = 0
        while True:
            k1 = mf_rhs(nx, nz, r)
            k2 = mf_rhs(nx + 0.5 * h * k1[0], nz + 0.5 * h * k1[1], r)
            k3 = mf_rhs(nx + 0.5 * h * k2[0], nz + 0.5 * h * k2[1], r)
            k4 = mf_rhs(nx + h * k3[0], nz + h * k3[1], r)
            nx1 = nx + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            nz1 = nz + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            if -tol <= nx1 <= 1 + tol and -tol <= nz1 <= 1 + tol:
                break
            retries += 1
            if retries > max_retries:
                raise RuntimeError("integration step failed to stay in bounds")
            h *= 0.5
        nx = min(max(nx1, 0.0), 1.0)
        nz = min(max(nz1, 0.0), 1.0)
        t += h
        k += 1
        if record_stride and k % record_stride == 0:
            traj.append((t, nx, nz))
    if record_stride:
        return np.array(traj)
    return nx, nz


def mf_scan(gx_values, gz_values, eta: float = 1.0, t_final: float = 1e4,
            dt: float = 1e-2):
    """Late-time (nx, nz) over a rate grid, vectorized over grid points."""
    gx, gz = np.meshgrid(np.asarray(gx_values, dtype=float),
                         np.asarray(gz_values, dtype=float), indexing="ij")
    nx = np.zeros_like(gx)
    nz = np.zeros_like(gx)

    def rhs(nx, nz):
        dnx = eta * (1.0 - nx) - 2.0 * gx * nx * (1.0 - nx) ** 2
        dnz = (eta * (1.0 - nz)
               + 2.0 * gx * nx * (1.0 - nx) ** 2 * (1.0 - nz)
               - 2.0 * gz * nz * (1.0 - nz) ** 5 * (1.0 - nx) ** 6)
        return dnx, dnz

    nsteps = int(round(t_final / dt))
    h = t_final / nsteps
    for step in range(nsteps):
        k1x, k1z = rhs(nx, nz)
        k2x, k2z = rhs(nx + 0.5 * h * k1x, nz + 0.5 * h * k1z)
        k3x, k3z = rhs(nx + 0.5 * h * k2x, nz + 0.5 * h * k2z)
        k4x, k4z = rhs(nx + h * k3x, nz + h * k3z)
        nx1 = np.clip(nx + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x), 0.0, 1.0)
        nz1 = np.clip(nz + h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z), 0.0, 1.0)
        if step % 1000 == 999:
            if max(np.abs(nx1 - nx).max(), np.abs(nz1 - nz).max()) < 1e-14:
                return nx1, nz1
        nx, nz = nx1, nz1
    return nx, nz
