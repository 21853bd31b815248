"""Physical parameter set, initial states and the Lorentzian coupling spectrum.

Conventions used throughout the package:

* ``omega0`` is the qubit transition frequency and the overall energy scale;
  energies are reported in units of ``omega0`` when ``omega0 = 1`` (default).
* The cavity is resonant with the qubit (``omega_c = omega0``); there is no
  detuning parameter.
* ``spectral_width = math.inf`` selects the memoryless (flat-spectrum) limit.
  It is a distinguished parameter value, not a separate type, so every
  downstream operation works uniformly in both regimes.
* The Lorentzian coupling spectrum is J(w) = (gamma/2pi) * width^2 /
  ((omega0 - w)^2 + width^2): ``spectral_width`` is the half-width and
  ``gamma`` the overall coupling weight.  All dynamics are driven by the
  equivalent exponential memory kernel (gamma*width/2) * exp(-width*|t-t'|);
  J itself is exposed for documentation and plotting only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MEMORYLESS = math.inf
"""Sentinel for ``spectral_width`` selecting the flat-spectrum limit."""


@dataclass(frozen=True)
class ModelParams:
    """Immutable physical parameters of one charging scenario.

    Attributes
    ----------
    omega0 : qubit transition frequency (energy scale).
    coupling_qb_cavity : qubit-cavity coupling strength Omega.
    coupling_cavity_env : effective cavity-environment coupling gamma.
    spectral_width : Lorentzian half-width lambda; ``math.inf`` selects the
        memoryless limit.
    """

    omega0: float
    coupling_qb_cavity: float
    coupling_cavity_env: float
    spectral_width: float

    @property
    def memoryless(self) -> bool:
        return math.isinf(self.spectral_width)


@dataclass(frozen=True)
class InitialState:
    """Single-excitation initial amplitudes.

    ``c1_0`` multiplies |g_B, 1_c> (excitation in the cavity) and ``c2_0``
    multiplies |e_B, 0_c> (excitation in the battery qubit).
    """

    c1_0: complex
    c2_0: complex


def make_params(omega0: float, Omega: float, gamma: float,
                lam: float) -> ModelParams:
    """Validate and build a :class:`ModelParams`.

    ``lam`` may be ``math.inf`` (or :data:`MEMORYLESS`) to select the
    memoryless engine.  Raises ``ValueError`` on non-positive ``omega0`` or
    ``Omega``, negative ``gamma``, or non-positive finite ``lam``.
    """
    if not (math.isfinite(omega0) and omega0 > 0):
        raise ValueError(f"omega0 must be finite and positive, got {omega0}")
    if not (math.isfinite(Omega) and Omega > 0):
        raise ValueError(f"Omega must be finite and positive, got {Omega}")
    if not (math.isfinite(gamma) and gamma >= 0):
        raise ValueError(f"gamma must be finite and non-negative, got {gamma}")
    if math.isnan(lam) or lam <= 0:
        raise ValueError(f"lambda must be positive or inf, got {lam}")
    return ModelParams(float(omega0), float(Omega), float(gamma), float(lam))


def make_initial_state(c1_0: complex, c2_0: complex) -> InitialState:
    """Validate normalization |c1|^2 + |c2|^2 = 1 (tolerance 1e-12)."""
    norm = abs(c1_0) ** 2 + abs(c2_0) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"initial state not normalized: |c1|^2+|c2|^2 = {norm}")
    return InitialState(complex(c1_0), complex(c2_0))


def empty_battery_state() -> InitialState:
    """Initially empty battery: the single excitation starts in the cavity."""
    return InitialState(1.0 + 0.0j, 0.0 + 0.0j)


def excited_battery_state() -> InitialState:
    """Excitation starts in the battery qubit (used by the BLP state pair)."""
    return InitialState(0.0 + 0.0j, 1.0 + 0.0j)


def spectral_density_at(params: ModelParams, omega: float) -> float:
    """Lorentzian coupling spectrum J(omega); peaks at resonance.

    Rejects memoryless parameters: in the flat-spectrum limit J degenerates
    and carries no information (the memory kernel is a delta function).
    """
    if params.memoryless:
        raise ValueError("spectral density is unsupported for memoryless "
                         "(infinite-width) parameters")
    lam = params.spectral_width
    gamma = params.coupling_cavity_env
    return (gamma / (2.0 * math.pi)) * lam ** 2 / (
        (params.omega0 - omega) ** 2 + lam ** 2)
