#!/usr/bin/env python3
"""Benchmark the compiled integrator core against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [n_steps]

Both backends run identical workloads; the report includes the speedup and
the maximum output difference (expected to be zero: the extension is built
without FP contraction so the arithmetic matches bitwise).
"""

import sys
import time

import numpy as np

from fluxring import _core_py

try:
    from fluxring import _core
except ImportError:
    _core = None

N_STEPS = int(sys.argv[1]) if len(sys.argv) > 1 else 500_000
RECORD_EVERY = 1000

LORENTZ_ARGS = (1.0, 0.0, 0.0, 1.0, _core_py.FORCE_HARMONIC, 1.0, 0.0,
                0.01, 50.0, _core_py.RAMP_SMOOTHSTEP, 1e-4, N_STEPS, RECORD_EVERY)
HAMILTON_ARGS = (_core_py.GAUGE_LANDAU, 1.0, 0.0, 0.0, 1.0,
                 _core_py.FORCE_HARMONIC, 1.0, 0.0,
                 0.01, 50.0, _core_py.RAMP_SMOOTHSTEP, 1e-4, N_STEPS, RECORD_EVERY)


def run(func, args):
    start = time.perf_counter()
    result = func(*args)
    return time.perf_counter() - start, result


def compare(name, func_name, args):
    t_py, ref = run(getattr(_core_py, func_name), args)
    print(f"{name:>18}: python  {t_py:8.3f} s  "
          f"({N_STEPS / t_py / 1e6:6.2f} Msteps/s)")
    if _core is None:
        print(f"{'':>18}  compiled core not built; skipping comparison")
        return
    t_cy, fast = run(getattr(_core, func_name), args)
    diff = max(float(np.abs(a - b).max()) for a, b in zip(ref, fast))
    print(f"{'':>18}  cython  {t_cy:8.3f} s  "
          f"({N_STEPS / t_cy / 1e6:6.2f} Msteps/s)  "
          f"speedup {t_py / t_cy:6.1f}x  max |diff| {diff:.3e}")


def main():
    print(f"RK4 kernel benchmark, {N_STEPS} steps per run")
    compare("lorentz", "integrate_lorentz", LORENTZ_ARGS)
    compare("hamilton (landau)", "integrate_hamilton", HAMILTON_ARGS)


if __name__ == "__main__":
    main()
