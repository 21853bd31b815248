"""Independent brute-force integrator for the coupled amplitude equations.

The memory integral with exponential kernel (gamma*lam/2) * exp(-lam*(t-t'))
is closed exactly by one auxiliary amplitude z(t) = int_0^t exp(-lam*(t-t'))
c1(t') dt', turning the integro-differential system into the local linear ODE

    c1' = -i*Omega*c2 - (gamma*lam/2)*z
    c2' = -i*Omega*c1
    z'  =  c1 - lam*z

with no approximation, so the oracle is exact up to integrator tolerance.
In the flat-spectrum limit the kernel is a delta function and the drag on c1
becomes a plain gamma/2 (fixed by the characteristic polynomial
s^2 + gamma*s/2 + Omega^2 of the infinite-width limit):

    c1' = -i*Omega*c2 - (gamma/2)*c1
    c2' = -i*Omega*c1

This module is the reference the analytic propagator is checked against; it
shares no code with the partial-fraction inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import rk45_linear
from .model import InitialState, ModelParams

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class AmplitudeSeries:
    """Time series of the single-excitation amplitudes.

    ``z`` is the auxiliary memory amplitude (zeros for memoryless runs).
    """

    times: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    z: np.ndarray


def system_matrix(params: ModelParams) -> np.ndarray:
    """3x3 generator of the (c1, c2, z) system; its eigenvalues are the
    roots of the cubic s^3 + lam*s^2 + (Omega^2 + lam*gamma/2)*s + lam*Omega^2."""
    if params.memoryless:
        raise ValueError("memoryless params have no finite-width system matrix")
    om = params.coupling_qb_cavity
    gamma = params.coupling_cavity_env
    lam = params.spectral_width
    return np.array([
        [0.0, -1j * om, -0.5 * gamma * lam],
        [-1j * om, 0.0, 0.0],
        [1.0, 0.0, -lam],
    ], dtype=np.complex128)


def system_matrix_memoryless(params: ModelParams) -> np.ndarray:
    """2x2 generator of the flat-spectrum (c1, c2) system."""
    if not params.memoryless:
        raise ValueError("params are not memoryless")
    om = params.coupling_qb_cavity
    gamma = params.coupling_cavity_env
    return np.array([
        [-0.5 * gamma, -1j * om],
        [-1j * om, 0.0],
    ], dtype=np.complex128)


def _as_t_eval(tmax: float, t_eval, steps: int) -> np.ndarray:
    if t_eval is not None:
        t_eval = np.asarray(t_eval, dtype=np.float64)
        if t_eval.ndim != 1 or t_eval.size == 0 or np.any(np.diff(t_eval) < 0):
            raise ValueError("t_eval must be a non-empty ascending 1-d array")
        if t_eval[0] < 0:
            raise ValueError("t_eval must be non-negative")
        return t_eval
    if tmax <= 0:
        raise ValueError(f"tmax must be positive, got {tmax}")
    return np.linspace(0.0, tmax, steps)


def _check_tol(tol: float) -> None:
    if not 1e-12 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-12, 1e-6], got {tol}")


def integrate(params: ModelParams, init: InitialState, tmax: float,
              tol: float = DEFAULT_TOL, t_eval=None,
              steps: int = 501) -> AmplitudeSeries:
    """Adaptive RK45 integration of the finite-width 3-component system."""
    if params.memoryless:
        raise ValueError("memoryless params: use integrate_memoryless")
    _check_tol(tol)
    times = _as_t_eval(tmax, t_eval, steps)
    y0 = np.array([init.c1_0, init.c2_0, 0.0], dtype=np.complex128)
    ys = rk45_linear(system_matrix(params), y0, times, tol, tol)
    return AmplitudeSeries(times, ys[:, 0], ys[:, 1], ys[:, 2])


def integrate_memoryless(params: ModelParams, init: InitialState, tmax: float,
                         tol: float = DEFAULT_TOL, t_eval=None,
                         steps: int = 501) -> AmplitudeSeries:
    """Adaptive RK45 integration of the flat-spectrum 2-component system."""
    if not params.memoryless:
        raise ValueError("finite-width params: use integrate")
    _check_tol(tol)
    times = _as_t_eval(tmax, t_eval, steps)
    y0 = np.array([init.c1_0, init.c2_0], dtype=np.complex128)
    ys = rk45_linear(system_matrix_memoryless(params), y0, times, tol, tol)
    return AmplitudeSeries(times, ys[:, 0], ys[:, 1],
                           np.zeros_like(ys[:, 0]))
