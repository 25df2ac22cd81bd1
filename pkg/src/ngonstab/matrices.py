"""Small constant matrices and exact trigonometry on the n-th roots of unity.

Conventions used throughout the package:

* ``symplectic_j(d)`` is the standard symplectic form ``[[0, -I], [I, 0]]``
  that defines the Hamiltonian systems ``y' = J B(theta) y``.
* ``planar_j(d)`` is the block-diagonal ``diag(J2, ..., J2)`` acting as a
  quarter-turn rotation on each planar particle (or mode) separately.
"""

from __future__ import annotations

import math

import numpy as np

J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


def symplectic_j(d: int) -> np.ndarray:
    """Standard symplectic form [[0, -I_m], [I_m, 0]] of even dimension d."""
    if d % 2:
        raise ValueError(f"symplectic form needs even dimension, got {d}")
    m = d // 2
    j = np.zeros((d, d))
    j[:m, m:] = -np.eye(m)
    j[m:, :m] = np.eye(m)
    return j


def planar_j(d: int) -> np.ndarray:
    """Block-diagonal diag(J2, ..., J2) of even dimension d."""
    if d % 2:
        raise ValueError(f"planar rotation generator needs even dimension, got {d}")
    j = np.zeros((d, d))
    for i in range(0, d, 2):
        j[i, i + 1] = -1.0
        j[i + 1, i] = 1.0
    return j


def rotation(theta: float) -> np.ndarray:
    """Planar rotation R(theta)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def reflection(theta: float) -> np.ndarray:
    """Reflection R^(theta) = [[cos, sin], [sin, -cos]] (rotation composed
    with a flip); appears in the closed form of the Hessian blocks."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


def cos_sin_fraction(m: int, n: int) -> tuple[float, float]:
    """(cos, sin) of 2*pi*m/n with the quadrant multiples exact.

    Reducing the argument modulo n and special-casing the four axis angles
    kills cancellation for large n and makes identities such as
    sin(pi * j) = 0 hold exactly instead of to ~1e-16.
    """
    m %= n
    if m == 0:
        return 1.0, 0.0
    if 2 * m == n:
        return -1.0, 0.0
    if 4 * m == n:
        return 0.0, 1.0
    if 4 * m == 3 * n:
        return 0.0, -1.0
    ang = 2.0 * math.pi * m / n
    return math.cos(ang), math.sin(ang)
