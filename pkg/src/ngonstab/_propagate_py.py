"""Pure NumPy propagation kernel (fallback backend).

Integrates the matrix linear system

    Y'(theta) = (A0 + A1 / (1 + e cos theta)) Y(theta),   Y(0) = I,

with an embedded Dormand-Prince 5(4) pair, adaptive per-step error control
at rtol = atol = tol, and a hard step ceiling.  All state is accumulated in
extended precision (np.longdouble): the symplectic-defect contract at high
eccentricity sits below the float64 roundoff floor for monodromies of norm
~1e4, so double accumulation would fail it even with exact integration.

Shares its exact algorithm and tableau with the compiled backend in
``_propagate_cy``; either can be substituted for the other.
"""

from __future__ import annotations

import numpy as np

_LD = np.longdouble

_C = np.array([0, 1, 3, 4, 8, 1, 1], dtype=_LD) / np.array(
    [1, 5, 10, 5, 9, 1, 1], dtype=_LD
)
_A = np.zeros((7, 7), dtype=_LD)
_A[1, :1] = [_LD(1) / 5]
_A[2, :2] = [_LD(3) / 40, _LD(9) / 40]
_A[3, :3] = [_LD(44) / 45, _LD(-56) / 15, _LD(32) / 9]
_A[4, :4] = [
    _LD(19372) / 6561,
    _LD(-25360) / 2187,
    _LD(64448) / 6561,
    _LD(-212) / 729,
]
_A[5, :5] = [
    _LD(9017) / 3168,
    _LD(-355) / 33,
    _LD(46732) / 5247,
    _LD(49) / 176,
    _LD(-5103) / 18656,
]
_A[6, :6] = [
    _LD(35) / 384,
    _LD(0),
    _LD(500) / 1113,
    _LD(125) / 192,
    _LD(-2187) / 6784,
    _LD(11) / 84,
]
_B5 = _A[6].copy()
_B4 = np.array(
    [
        _LD(5179) / 57600,
        _LD(0),
        _LD(7571) / 16695,
        _LD(393) / 640,
        _LD(-92097) / 339200,
        _LD(187) / 2100,
        _LD(1) / 40,
    ]
)
_ERR = _B5 - _B4

_MAX_STEPS = 20_000_000


def _defect(y: np.ndarray) -> float:
    """|Y^T J Y - J|_inf with J = [[0, -I], [I, 0]], in extended precision."""
    d = y.shape[0]
    m = d // 2
    jy = np.empty_like(y)
    jy[:m] = -y[m:]
    jy[m:] = y[:m]
    g = y.T @ jy
    g[:m, m:] += np.eye(m, dtype=_LD)
    g[m:, :m] -= np.eye(m, dtype=_LD)
    return float(np.abs(g).max())


def propagate_segments(a0, a1, e, tol, max_step, thetas):
    """Propagate Y' = (A0 + A1/(1+e cos theta)) Y from 0 through `thetas`.

    Returns (ys, defects, steps, rejected): float64 snapshots of Y at each
    requested theta, the symplectic defect there, and step counters.
    """
    a0 = np.ascontiguousarray(a0, dtype=_LD)
    a1 = np.ascontiguousarray(a1, dtype=_LD)
    d = a0.shape[0]
    e_ld = _LD(e)
    tol_ld = _LD(tol)
    y = np.eye(d, dtype=_LD)
    k = np.empty((7, d, d), dtype=_LD)
    t = _LD(0)
    h = _LD(min(max_step, 1e-2))
    k[0] = (a0 + a1 / (1 + e_ld * np.cos(t))) @ y
    steps = rejected = 0
    ys = np.empty((len(thetas), d, d))
    defects = np.empty(len(thetas))
    for idx, t_target in enumerate(thetas):
        t_end = _LD(t_target)
        while t < t_end:
            h = min(h, _LD(max_step), t_end - t)
            for i in range(1, 7):
                yi = y + h * np.tensordot(_A[i, :i], k[:i], axes=1)
                f = 1 / (1 + e_ld * np.cos(t + _C[i] * h))
                k[i] = (a0 + f * a1) @ yi
            ynew = y + h * np.tensordot(_B5, k, axes=1)
            err = h * np.tensordot(_ERR, k, axes=1)
            scale = tol_ld * (1 + np.maximum(np.abs(y), np.abs(ynew)))
            enorm = float(np.sqrt(np.mean((err / scale) ** 2)))
            if enorm <= 1.0:
                t = t + h
                y = ynew
                k[0] = k[6].copy()
                steps += 1
            else:
                rejected += 1
            if steps + rejected > _MAX_STEPS:
                raise RuntimeError("step budget exhausted; tolerance too tight")
            factor = 5.0 if enorm == 0.0 else min(5.0, max(0.2, 0.9 * enorm**-0.2))
            h = h * _LD(factor)
        ys[idx] = y.astype(float)
        defects[idx] = _defect(y)
    return ys, defects, steps, rejected
