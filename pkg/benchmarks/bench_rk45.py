"""Benchmark the adaptive RK kernel: numba JIT vs pure-numpy fallback.

Runs the 36-combination oracle verification workload in two subprocesses,
one with QBATTERY_DISABLE_NUMBA=1, and reports wall times.

    python3 benchmarks/bench_rk45.py
"""

from __future__ import annotations

import os
import subprocess
import sys

WORKLOAD = """
import time
import numpy as np
import qbattery as qb
from qbattery._kernels import warmup, NUMBA_ENABLED

warmup()  # exclude JIT compilation from the timing
taus = np.linspace(0.0, 50.0, 1001)
start = time.perf_counter()
for g in (0.1, 0.5, 1.0, 5.0, 10.0, 50.0):
    for lam in (0.1, 0.5, 1.0, 5.0, 10.0, 50.0):
        params = qb.make_params(1.0, 1.0, g, lam)
        qb.integrate(params, qb.empty_battery_state(), 50.0, t_eval=taus)
elapsed = time.perf_counter() - start
mode = "numba" if NUMBA_ENABLED else "numpy"
print(f"{mode}\t{elapsed:.3f}")
"""


def run(disable_numba: bool) -> str:
    env = dict(os.environ)
    env["QBATTERY_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env,
                         capture_output=True, text=True, check=True)
    return out.stdout.strip()


def main() -> None:
    print("backend\tseconds (36 integrations, Omega*t in [0, 50], tol 1e-10)")
    numba_line = run(disable_numba=False)
    numpy_line = run(disable_numba=True)
    print(numba_line)
    print(numpy_line)
    t_numba = float(numba_line.split("\t")[1])
    t_numpy = float(numpy_line.split("\t")[1])
    if t_numba > 0:
        print(f"speedup\t{t_numpy / t_numba:.1f}x")


if __name__ == "__main__":
    main()
