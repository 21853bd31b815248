"""Hot numeric kernels with an optional numba backend.

The only genuinely hot loop in the package is the adaptive Runge-Kutta
integrator used by the ODE oracle (thousands of sequential micro-steps per
parameter point, across large verification grids).  It is compiled with
``numba.njit`` when numba is importable; setting the environment variable
``QBATTERY_DISABLE_NUMBA=1`` before import selects the pure-numpy fallback
(same code, uncompiled).  ``benchmarks/bench_rk45.py`` compares both paths.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("QBATTERY_DISABLE_NUMBA", "").lower() in (
    "1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    NUMBA_ENABLED = True
except ImportError:
    njit = None
    NUMBA_ENABLED = False


def _rk45_linear_impl(m, y0, t_eval, rtol, atol):
    """Dormand-Prince 5(4) integration of the linear system y' = m @ y.

    ``t_eval`` must be sorted ascending, starting at >= 0; steps land exactly
    on each requested output time, so no interpolation error is introduced.
    Returns an array of shape (len(t_eval), dim).
    """
    dim = y0.shape[0]
    out = np.empty((t_eval.shape[0], dim), np.complex128)
    t = 0.0
    y = y0.copy()
    k1 = np.dot(m, y)

    # initial step from the matrix scale
    mnorm = 0.0
    for i in range(dim):
        row = 0.0
        for j in range(dim):
            row += abs(m[i, j])
        if row > mnorm:
            mnorm = row
    h = 0.01 / mnorm if mnorm > 0.0 else 0.1

    for idx in range(t_eval.shape[0]):
        tt = t_eval[idx]
        while t < tt - 1e-14 * (1.0 + tt):
            hs = h
            if t + hs > tt:
                hs = tt - t

            k2 = np.dot(m, y + hs * (0.2 * k1))
            k3 = np.dot(m, y + hs * (0.075 * k1 + 0.225 * k2))
            k4 = np.dot(m, y + hs * ((44.0 / 45.0) * k1
                                     - (56.0 / 15.0) * k2
                                     + (32.0 / 9.0) * k3))
            k5 = np.dot(m, y + hs * ((19372.0 / 6561.0) * k1
                                     - (25360.0 / 2187.0) * k2
                                     + (64448.0 / 6561.0) * k3
                                     - (212.0 / 729.0) * k4))
            k6 = np.dot(m, y + hs * ((9017.0 / 3168.0) * k1
                                     - (355.0 / 33.0) * k2
                                     + (46732.0 / 5247.0) * k3
                                     + (49.0 / 176.0) * k4
                                     - (5103.0 / 18656.0) * k5))
            ynew = y + hs * ((35.0 / 384.0) * k1
                             + (500.0 / 1113.0) * k3
                             + (125.0 / 192.0) * k4
                             - (2187.0 / 6784.0) * k5
                             + (11.0 / 84.0) * k6)
            k7 = np.dot(m, ynew)
            # 5th-order minus embedded 4th-order solution
            err = hs * ((71.0 / 57600.0) * k1
                        - (71.0 / 16695.0) * k3
                        + (71.0 / 1920.0) * k4
                        - (17253.0 / 339200.0) * k5
                        + (22.0 / 525.0) * k6
                        - (1.0 / 40.0) * k7)

            errnorm = 0.0
            for i in range(dim):
                sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
                e = abs(err[i]) / sc
                errnorm += e * e
            errnorm = math.sqrt(errnorm / dim)

            if errnorm <= 1.0:
                t += hs
                y = ynew
                k1 = k7  # FSAL
            if errnorm == 0.0:
                factor = 5.0
            else:
                factor = 0.9 * errnorm ** -0.2
                if factor > 5.0:
                    factor = 5.0
                elif factor < 0.2:
                    factor = 0.2
            h = hs * factor
        out[idx, :] = y
    return out


if NUMBA_ENABLED:
    rk45_linear = njit(cache=True)(_rk45_linear_impl)
else:
    rk45_linear = _rk45_linear_impl


def warmup() -> None:
    """Trigger JIT compilation on tiny systems (no-op for the numpy path)."""
    for dim in (2, 3):
        m = -np.eye(dim, dtype=np.complex128)
        y0 = np.ones(dim, dtype=np.complex128)
        rk45_linear(m, y0, np.array([0.0, 0.1]), 1e-8, 1e-8)
