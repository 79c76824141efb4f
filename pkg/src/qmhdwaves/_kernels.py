"""Time-advance kernels for the linearized 1D spectral simulator.

The RK4 inner loop is the hot path: every step touches each Fourier mode
four times with a handful of complex multiplies, so Python-level overhead
dominates at realistic grid sizes.  When numba is importable the loop runs
as a compiled nopython kernel; otherwise (or when the environment variable
QMHDWAVES_NO_NUMBA is set to a non-empty value other than "0") a vectorized
pure-numpy implementation of the identical algebra is used.  Both paths are
always defined so they can be benchmarked against each other.

Mode layout: the domain is 1D along x, so every mode has k = (kappa, 0, 0)
with signed kappa, while v, h and the background field keep all three
components.  The h_x component is identically conserved (its time
derivative vanishes mode by mode), so the kernels advance the six live
components (v_x, v_y, v_z, h_y, h_z, rho').
"""

import os

import numpy as np

_flag = os.environ.get("QMHDWAVES_NO_NUMBA", "")
NUMBA_DISABLED = _flag not in ("", "0")

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled by QMHDWAVES_NO_NUMBA")
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _mode_rhs(vx, vy, vz, hy, hz, rp, kappa, a_mag, a_u, a_rho, g_t, g_c,
              h0x, h0y, h0z):
    """Right-hand side of d(state)/dt for one mode (or arrays of modes).

    Works elementwise, so the same expressions serve the scalar numba loop
    and the vectorized numpy path.  Coefficients:
        a_mag = kappa / (4 pi rho0)
        a_u   = U0(kappa)^2 kappa / rho0
        a_rho = rho0 kappa
        g_t   = eta kappa^2 / rho0            (transverse viscous decay)
        g_c   = (xi + eta/3) kappa^2 / rho0   (extra compressive decay)
    """
    dvx = -1j * (a_mag * (h0y * hy + h0z * hz) + a_u * rp) - (g_t + g_c) * vx
    dvy = 1j * a_mag * h0x * hy - g_t * vy
    dvz = 1j * a_mag * h0x * hz - g_t * vz
    dhy = 1j * kappa * (h0x * vy - h0y * vx)
    dhz = 1j * kappa * (h0x * vz - h0z * vx)
    drp = -1j * a_rho * vx
    return dvx, dvy, dvz, dhy, dhz, drp


def advance_numpy(fields, coef, h0, dt, n_steps):
    """Advance the six live component arrays in place by n_steps of RK4."""
    vx, vy, vz, hy, hz, rp = fields
    kappa, a_mag, a_u, a_rho, g_t, g_c = coef
    h0x, h0y, h0z = h0
    sixth = dt / 6.0
    half = dt / 2.0
    for _ in range(n_steps):
        k1 = _mode_rhs(vx, vy, vz, hy, hz, rp,
                       kappa, a_mag, a_u, a_rho, g_t, g_c, h0x, h0y, h0z)
        s2 = [y + half * d for y, d in zip((vx, vy, vz, hy, hz, rp), k1)]
        k2 = _mode_rhs(*s2, kappa, a_mag, a_u, a_rho, g_t, g_c, h0x, h0y, h0z)
        s3 = [y + half * d for y, d in zip((vx, vy, vz, hy, hz, rp), k2)]
        k3 = _mode_rhs(*s3, kappa, a_mag, a_u, a_rho, g_t, g_c, h0x, h0y, h0z)
        s4 = [y + dt * d for y, d in zip((vx, vy, vz, hy, hz, rp), k3)]
        k4 = _mode_rhs(*s4, kappa, a_mag, a_u, a_rho, g_t, g_c, h0x, h0y, h0z)
        for y, d1, d2, d3, d4 in zip((vx, vy, vz, hy, hz, rp),
                                     k1, k2, k3, k4):
            y += sixth * (d1 + 2.0 * (d2 + d3) + d4)


if HAS_NUMBA:
    _mode_rhs_jit = njit(cache=True)(_mode_rhs)

    @njit(cache=True)
    def _advance_loop(vx, vy, vz, hy, hz, rp, kappa, a_mag, a_u, a_rho,
                      g_t, g_c, h0x, h0y, h0z, dt, n_steps):
        n = vx.shape[0]
        sixth = dt / 6.0
        half = dt / 2.0
        for _ in range(n_steps):
            for j in range(n):
                kj = kappa[j]
                am = a_mag[j]
                au = a_u[j]
                ar = a_rho[j]
                gt = g_t[j]
                gc = g_c[j]
                y1, y2, y3 = vx[j], vy[j], vz[j]
                y4, y5, y6 = hy[j], hz[j], rp[j]
                a1, a2, a3, a4, a5, a6 = _mode_rhs_jit(
                    y1, y2, y3, y4, y5, y6,
                    kj, am, au, ar, gt, gc, h0x, h0y, h0z)
                b1, b2, b3, b4, b5, b6 = _mode_rhs_jit(
                    y1 + half * a1, y2 + half * a2, y3 + half * a3,
                    y4 + half * a4, y5 + half * a5, y6 + half * a6,
                    kj, am, au, ar, gt, gc, h0x, h0y, h0z)
                c1, c2, c3, c4, c5, c6 = _mode_rhs_jit(
                    y1 + half * b1, y2 + half * b2, y3 + half * b3,
                    y4 + half * b4, y5 + half * b5, y6 + half * b6,
                    kj, am, au, ar, gt, gc, h0x, h0y, h0z)
                d1, d2, d3, d4, d5, d6 = _mode_rhs_jit(
                    y1 + dt * c1, y2 + dt * c2, y3 + dt * c3,
                    y4 + dt * c4, y5 + dt * c5, y6 + dt * c6,
                    kj, am, au, ar, gt, gc, h0x, h0y, h0z)
                vx[j] = y1 + sixth * (a1 + 2.0 * (b1 + c1) + d1)
                vy[j] = y2 + sixth * (a2 + 2.0 * (b2 + c2) + d2)
                vz[j] = y3 + sixth * (a3 + 2.0 * (b3 + c3) + d3)
                hy[j] = y4 + sixth * (a4 + 2.0 * (b4 + c4) + d4)
                hz[j] = y5 + sixth * (a5 + 2.0 * (b5 + c5) + d5)
                rp[j] = y6 + sixth * (a6 + 2.0 * (b6 + c6) + d6)

    def advance_numba(fields, coef, h0, dt, n_steps):
        """numba-compiled counterpart of advance_numpy (in place)."""
        vx, vy, vz, hy, hz, rp = fields
        kappa, a_mag, a_u, a_rho, g_t, g_c = coef
        h0x, h0y, h0z = h0
        _advance_loop(vx, vy, vz, hy, hz, rp, kappa, a_mag, a_u, a_rho,
                      g_t, g_c, float(h0x), float(h0y), float(h0z),
                      float(dt), int(n_steps))

    advance = advance_numba
else:
    advance_numba = None
    advance = advance_numpy


def backend_name():
    """Name of the advance backend selected at import time."""
    return "numba" if HAS_NUMBA else "numpy"
