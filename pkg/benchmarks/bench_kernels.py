#!/usr/bin/env python3
"""Compare the pure-python and compiled kernel backends.

The backend is chosen once at import time (QUBITHERM_KERNELS), so this
script re-runs itself in a subprocess per backend, times the batched
kernels on identical inputs, and prints a table with the speedup of the
compiled extension over the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--rows N] [--repeats R]
"""

import argparse
import json
import os
import subprocess
import sys
import time

CASES = ("stokes_bloch", "expectation", "entropy", "free_energy", "fidelity")


def _timed(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_worker(rows, repeats):
    import numpy as np

    from qubitherm import _kernels

    rng = np.random.default_rng(12345)
    intensities = rng.uniform(0.05, 0.95, size=(rows, 6))
    bloch = _kernels.stokes_bloch(intensities)
    obs = np.array([0.0, 0.3, -0.2, 0.9])
    target = np.array([0.1, -0.4, 0.5])

    timings = {
        "stokes_bloch": _timed(lambda: _kernels.stokes_bloch(intensities),
                               repeats),
        "expectation": _timed(lambda: _kernels.functional_values(
            bloch, _kernels.KIND_EXPECTATION, obs), repeats),
        "entropy": _timed(lambda: _kernels.functional_values(
            bloch, _kernels.KIND_ENTROPY, np.empty(0)), repeats),
        "free_energy": _timed(lambda: _kernels.functional_values(
            bloch, _kernels.KIND_FREE_ENERGY,
            np.array([1.0, 1.0, 5.986])), repeats),
        "fidelity": _timed(lambda: _kernels.functional_values(
            bloch, _kernels.KIND_FIDELITY, target), repeats),
    }
    print(json.dumps({"backend": _kernels.backend_name(),
                      "timings": timings}))


def run_backend(backend, rows, repeats):
    env = dict(os.environ, QUBITHERM_KERNELS=backend)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker",
         "--rows", str(rows), "--repeats", str(repeats)],
        env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        return None, proc.stderr.strip().splitlines()[-1:]
    return json.loads(proc.stdout), None


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=200000,
                        help="number of simulated tomography rows")
    parser.add_argument("--repeats", type=int, default=5,
                        help="repetitions per case (best time wins)")
    parser.add_argument("--worker", action="store_true",
                        help=argparse.SUPPRESS)
    args = parser.parse_args(argv)
    if args.worker:
        run_worker(args.rows, args.repeats)
        return 0

    results = {}
    for backend in ("python", "cython"):
        data, err = run_backend(backend, args.rows, args.repeats)
        if data is None:
            print("backend %-7s unavailable (%s)"
                  % (backend, "; ".join(err or ["unknown error"])))
        else:
            results[backend] = data["timings"]
            print("backend %-7s ready (reports %r)"
                  % (backend, data["backend"]))
    if "python" not in results:
        print("pure-python backend failed; nothing to compare")
        return 1

    print()
    print("%d rows, best of %d runs" % (args.rows, args.repeats))
    header = "%-14s %12s %12s %9s" % ("kernel", "python (ms)",
                                      "cython (ms)", "speedup")
    print(header)
    print("-" * len(header))
    for case in CASES:
        py = results["python"][case] * 1e3
        if "cython" in results:
            cy = results["cython"][case] * 1e3
            print("%-14s %12.3f %12.3f %8.2fx" % (case, py, cy, py / cy))
        else:
            print("%-14s %12.3f %12s %9s" % (case, py, "-", "-"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
