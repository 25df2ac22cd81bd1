"""Backend selection and the single entry point for matrix propagation.

Two interchangeable kernels implement the same Dormand-Prince 5(4) scheme:
a compiled Cython extension (preferred) and a pure NumPy fallback.  The
choice is made at import time; set NGONSTAB_KERNEL=python or =compiled to
force one (useful for the benchmark and for debugging).

The error control runs at an internal tolerance ``tol * TOL_SAFETY``: the
requested tolerance governs the accuracy of the monodromy entries, but the
symplectic defect is an absolute measure that must resolve below 1e-9 for
monodromies of norm ~1e4, which needs several extra digits of local
accuracy.  The kernels accumulate in extended precision, so the tightened
control stays above their roundoff floor.
"""

from __future__ import annotations

import os

import numpy as np

_requested = os.environ.get("NGONSTAB_KERNEL", "auto").strip().lower()
if _requested in ("", "auto"):
    try:
        from . import _propagate_cy as _impl

        _BACKEND = "compiled"
    except ImportError:
        from . import _propagate_py as _impl

        _BACKEND = "python"
elif _requested in ("compiled", "cython", "c"):
    from . import _propagate_cy as _impl

    _BACKEND = "compiled"
elif _requested in ("python", "pure", "numpy"):
    from . import _propagate_py as _impl

    _BACKEND = "python"
else:
    raise ValueError(f"NGONSTAB_KERNEL={_requested!r}: use 'auto', 'compiled' or 'python'")

TOL_SAFETY = 1e-5
MIN_EFFECTIVE_TOL = 5e-18


def backend() -> str:
    """Name of the active propagation backend ('compiled' or 'python')."""
    return _BACKEND


def propagate(
    a0: np.ndarray,
    a1: np.ndarray,
    e: float,
    tol: float,
    max_step: float,
    thetas,
) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Fundamental solution of Y' = (A0 + A1/(1+e cos theta)) Y, Y(0) = I.

    Returns float64 snapshots of Y at each requested theta, the symplectic
    defect |Y^T J Y - J|_inf there (measured in extended precision), and
    the accepted/rejected step counts.
    """
    a0 = np.asarray(a0, dtype=float)
    a1 = np.asarray(a1, dtype=float)
    if a0.ndim != 2 or a0.shape[0] != a0.shape[1] or a0.shape != a1.shape:
        raise ValueError("coefficient matrices must be square and congruent")
    thetas = np.asarray(thetas, dtype=float)
    if thetas.size == 0 or np.any(np.diff(thetas) <= 0) or thetas[0] <= 0:
        raise ValueError("thetas must be positive and strictly increasing")
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity {e} outside [0, 1)")
    if max_step <= 0:
        raise ValueError("max_step must be positive")
    effective = max(tol * TOL_SAFETY, MIN_EFFECTIVE_TOL)
    return _impl.propagate_segments(a0, a1, e, effective, max_step, thetas)
