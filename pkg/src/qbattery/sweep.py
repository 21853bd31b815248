"""Parameter-grid evaluation and CSV/JSON serialization.

Grids are keyed by the dimensionless ratios gamma/Omega and lambda/Omega
(the latter may be ``inf`` for the flat-spectrum limit); cell values are in
units of omega0 for the energy quantities.  Cells are independent and may be
evaluated by a process pool; the result is identical for any worker count.
"""

from __future__ import annotations

import concurrent.futures
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .metrics import blp_nonmarkovianity, maximize_over_tau
from .model import make_params
from .propagator import ChargingTrajectory

QUANTITIES = ("stored_energy_max", "ergotropy_max", "nonmarkovianity")


@dataclass(frozen=True)
class SweepSpec:
    """Axes and quantity of one parameter sweep."""

    gamma_over_omega: tuple[float, ...]
    lambda_over_omega: tuple[float, ...]
    quantity: str
    tmax: float | None = None
    grid: int | None = None
    omega0: float = 1.0
    Omega: float = 1.0

    def __post_init__(self):
        if not self.gamma_over_omega or not self.lambda_over_omega:
            raise ValueError("sweep axes must be non-empty")
        if any(g <= 0 for g in self.gamma_over_omega):
            raise ValueError("gamma/Omega values must be positive")
        if any(not (l > 0) for l in self.lambda_over_omega):
            raise ValueError("lambda/Omega values must be positive or inf")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}; "
                             f"choose from {QUANTITIES}")


@dataclass
class SweepResult:
    """Rectangular grid of scalars: rows follow gamma/Omega, columns
    lambda/Omega.  ``flags`` holds per-cell markers ('' when clean)."""

    spec: SweepSpec
    values: np.ndarray
    flags: list[list[str]]
    metadata: dict = field(default_factory=dict)


def _eval_cell(args) -> tuple[float, str]:
    g_ratio, l_ratio, quantity, omega0, Omega, tmax, grid = args
    params = make_params(omega0, Omega, g_ratio * Omega, l_ratio * Omega)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if quantity == "nonmarkovianity":
            report = blp_nonmarkovianity(params, tmax=tmax, grid=grid)
            if report.divergent:
                return math.nan, "divergent"
            return report.measure, "truncated" if report.truncated else ""
        report = maximize_over_tau(params, tmax=tmax)
        flag = "boundary" if report.at_boundary else ""
        if quantity == "stored_energy_max":
            return report.delta_e_max / omega0, flag
        return report.w_max / omega0, flag


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate the requested quantity on the full axes cross product."""
    cells = [(g, l, spec.quantity, spec.omega0, spec.Omega, spec.tmax,
              spec.grid)
             for g in spec.gamma_over_omega
             for l in spec.lambda_over_omega]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_eval_cell, cells))
    else:
        results = [_eval_cell(c) for c in cells]

    ng = len(spec.gamma_over_omega)
    nl = len(spec.lambda_over_omega)
    values = np.array([v for v, _ in results]).reshape(ng, nl)
    flags = [[results[i * nl + j][1] for j in range(nl)] for i in range(ng)]
    metadata = {
        "quantity": spec.quantity,
        "units": "omega0",
        "tool_version": __version__,
        "omega0": spec.omega0,
        "Omega": spec.Omega,
        "tmax": spec.tmax,
        "grid": spec.grid,
    }
    return SweepResult(spec, values, flags, metadata)


def _fmt(x: float) -> str:
    return "%.17g" % x


def sweep_to_csv(result: SweepResult) -> str:
    """CSV with '#'-prefixed metadata, a header row of lambda/Omega values
    and one row per gamma/Omega value."""
    buf = io.StringIO()
    for key, val in result.metadata.items():
        buf.write(f"# {key}={val}\n")
    for i, row in enumerate(result.flags):
        for j, flag in enumerate(row):
            if flag:
                buf.write(f"# flag: {i},{j},{flag}\n")
    buf.write("gamma_over_omega," + ",".join(
        "lambda_" + _fmt(l) for l in result.spec.lambda_over_omega) + "\n")
    for g, row in zip(result.spec.gamma_over_omega, result.values):
        buf.write(_fmt(g) + "," + ",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def sweep_to_json(result: SweepResult) -> str:
    payload = {
        "gamma_over_omega": list(result.spec.gamma_over_omega),
        "lambda_over_omega": list(result.spec.lambda_over_omega),
        "quantity": result.spec.quantity,
        "tmax": result.spec.tmax,
        "grid": result.spec.grid,
        "omega0": result.spec.omega0,
        "Omega": result.spec.Omega,
        "values": [list(row) for row in result.values],
        "flags": result.flags,
        "metadata": result.metadata,
    }
    return json.dumps(payload, indent=2)


def sweep_from_json(text: str) -> SweepResult:
    """Re-parse a JSON sweep; reproduces the in-memory grid exactly."""
    payload = json.loads(text)
    spec = SweepSpec(
        gamma_over_omega=tuple(payload["gamma_over_omega"]),
        lambda_over_omega=tuple(payload["lambda_over_omega"]),
        quantity=payload["quantity"],
        tmax=payload["tmax"],
        grid=payload["grid"],
        omega0=payload["omega0"],
        Omega=payload["Omega"],
    )
    values = np.array(payload["values"], dtype=np.float64)
    return SweepResult(spec, values, payload["flags"], payload["metadata"])


TRAJECTORY_COLUMNS = ("Omega_tau", "re_kappa", "im_kappa", "population",
                      "stored_energy", "ergotropy")


def trajectory_table(traj: ChargingTrajectory) -> np.ndarray:
    return np.column_stack([traj.times, traj.kappa.real, traj.kappa.imag,
                            traj.population, traj.stored_energy,
                            traj.ergotropy])


def trajectory_to_csv(traj: ChargingTrajectory, metadata: dict) -> str:
    buf = io.StringIO()
    for key, val in metadata.items():
        buf.write(f"# {key}={val}\n")
    buf.write(",".join(TRAJECTORY_COLUMNS) + "\n")
    for row in trajectory_table(traj):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def trajectory_to_json(traj: ChargingTrajectory, metadata: dict) -> str:
    table = trajectory_table(traj)
    payload = {"metadata": metadata,
               "columns": list(TRAJECTORY_COLUMNS),
               "rows": [list(row) for row in table]}
    return json.dumps(payload, indent=2)
