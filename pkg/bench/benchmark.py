#!/usr/bin/env python3
"""Benchmark the compiled propagation kernel against the pure NumPy one.

Runs the same monodromy workloads through both backends and reports wall
times, speedups, and the largest disagreement between the two results.

Usage: python bench/benchmark.py [--repeat N]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from ngonstab import linsys
from ngonstab.kernel import MIN_EFFECTIVE_TOL, TOL_SAFETY
from ngonstab.matrices import symplectic_j

try:
    from ngonstab import _propagate_cy
except ImportError:
    _propagate_cy = None
from ngonstab import _propagate_py

WORKLOADS = [
    ("beta(1.36) e=0.0", linsys.Beta(1.36, 0.0)),
    ("beta(1.36) e=0.5", linsys.Beta(1.36, 0.5)),
    ("beta(1.36) e=0.9", linsys.Beta(1.36, 0.9)),
    ("mode(5,2)  e=0.5", linsys.Essential(5, 2, 0.5)),
    ("mode(12,1) e=0.9", linsys.Essential(12, 1, 0.9)),
    ("full(5)    e=0.5", linsys.Full(5, 0.5)),
]


def _arguments(kind, tol):
    c0, c1 = linsys.coefficient_splitting(kind)
    j = symplectic_j(c0.shape[0])
    effective = max(tol * TOL_SAFETY, MIN_EFFECTIVE_TOL)
    thetas = np.array([2 * math.pi])
    return (j @ c0, -(j @ c1), kind.e, effective, linsys.max_step_ceiling(kind.e), thetas)


def _time(impl, args, repeat):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = impl.propagate_segments(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--tol", type=float, default=1e-12)
    args = parser.parse_args()

    if _propagate_cy is None:
        print("compiled kernel not available; run pip install -e . first")

    print(f"{'workload':18s} {'dim':>3s} {'steps':>6s} {'python':>10s} "
          f"{'compiled':>10s} {'speedup':>8s} {'max diff':>9s}")
    for name, kind in WORKLOADS:
        call = _arguments(kind, args.tol)
        t_py, (ys_py, _, steps, _) = _time(_propagate_py, call, args.repeat)
        row = f"{name:18s} {call[0].shape[0]:3d} {steps:6d} {t_py * 1e3:8.1f}ms"
        if _propagate_cy is not None:
            t_cy, (ys_cy, _, _, _) = _time(_propagate_cy, call, args.repeat)
            diff = float(np.abs(ys_py - ys_cy).max())
            row += f" {t_cy * 1e3:8.1f}ms {t_py / t_cy:7.1f}x {diff:9.2e}"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
