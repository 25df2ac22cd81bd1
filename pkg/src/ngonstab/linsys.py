"""Periodic linear Hamiltonian systems of the pulsating ring and their
fundamental solutions.

Every system here has the form

    y'(theta) = J B(theta) y(theta),      y(0) = I,  theta in [0, 2*pi],

where J is the standard symplectic form and the symmetric coefficient
matrix splits as B(theta) = C0 - C1 / (1 + e cos theta) with constant C0,
C1.  For the planar kinds,

    B(theta) = [[ I,  -Jp ], [ Jp,  I - W / (1 + e cos theta) ]],

with Jp the per-mode quarter-turn diag(J2, ...) and W the reduced
potential block: I + U_l for a ring mode, I + diag(2, -1) for the Kepler
(dilation/rotation) pair, plain I for the translation pair, and the full
block-diagonal stack for the unreduced 4n-dimensional system.  The scalar
kind is the one-degree-of-freedom system with B = diag(1, 1 - delta/(...)),
and the beta kind uses the two-parameter potential
R_beta = (3/2) I + beta*diag(-1, 1) in place of I + U.

Monodromies are obtained by adaptive integration to 2*pi (see ``kernel``);
at e = 0 the systems are autonomous and the matrix exponential provides an
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import reduction
from .errors import NearSingularError
from .kernel import propagate
from .matrices import planar_j, symplectic_j

ECCENTRICITY_CAP = 0.99
TOL_MIN, TOL_MAX = 1e-14, 1e-6
DEFAULT_TOL = 1e-12

_QUARTERS = np.array([0.5, 1.0, 1.5, 2.0]) * math.pi


def _check_e(e: float) -> None:
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity {e} outside [0, 1)")


@dataclass(frozen=True)
class Translation:
    """B1: the pair of translation directions (multiplier +1 block)."""

    e: float = 0.0

    def __post_init__(self):
        _check_e(self.e)


@dataclass(frozen=True)
class KeplerBlock:
    """B2: dilation and rotation directions, the linearized Kepler pair."""

    e: float = 0.0

    def __post_init__(self):
        _check_e(self.e)


@dataclass(frozen=True)
class Essential:
    """Mode block l of the essential part of the n-gon system."""

    n: int
    l: int
    e: float = 0.0

    def __post_init__(self):
        _check_e(self.e)
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")
        if not 1 <= self.l <= self.n // 2:
            raise ValueError(f"mode l={self.l} outside 1..{self.n // 2}")


@dataclass(frozen=True)
class Full:
    """The complete 4n-dimensional system of the n-gon in the reduced
    coordinates (all blocks stacked)."""

    n: int
    e: float = 0.0

    def __post_init__(self):
        _check_e(self.e)
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")


@dataclass(frozen=True)
class Scalar:
    """One-degree-of-freedom system with potential delta/(1+e cos theta)."""

    delta: float
    e: float = 0.0

    def __post_init__(self):
        _check_e(self.e)


@dataclass(frozen=True)
class Beta:
    """Four-dimensional system with potential R_beta/(1+e cos theta)."""

    beta: float
    e: float = 0.0

    def __post_init__(self):
        _check_e(self.e)
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")


SystemKind = Translation | KeplerBlock | Essential | Full | Scalar | Beta


@dataclass(frozen=True, eq=False)
class FundamentalSolution:
    """Transition matrix at theta = 2*pi with quality diagnostics.

    symplectic_defect is |Y^T J Y - J|_inf at 2*pi; checkpoint_defects
    holds the same quantity at the quarter periods pi/2, pi, 3*pi/2, 2*pi.
    """

    monodromy: np.ndarray
    symplectic_defect: float
    steps: int
    tol: float
    checkpoint_defects: np.ndarray = field(repr=False, default=None)


def potential_matrix(kind: SystemKind) -> np.ndarray:
    """The matrix replacing I + U in the lower-right coefficient block
    (for the scalar kind, the 1x1 matrix [delta])."""
    if isinstance(kind, Translation):
        return np.eye(2)
    if isinstance(kind, KeplerBlock):
        return np.eye(2) + np.diag([2.0, -1.0])
    if isinstance(kind, Essential):
        u = reduction.closed_form_block(kind.n, kind.l)
        return np.eye(u.shape[0]) + u
    if isinstance(kind, Full):
        blocks = reduction.closed_form_blocks(kind.n)
        u = _block_diag([blocks[label] for label in reduction.block_labels(kind.n)])
        return np.eye(2 * kind.n) + u
    if isinstance(kind, Scalar):
        return np.array([[kind.delta]])
    if isinstance(kind, Beta):
        return 1.5 * np.eye(2) + kind.beta * np.diag([-1.0, 1.0])
    raise TypeError(f"not a SystemKind: {kind!r}")


def _block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    total = sum(b.shape[0] for b in blocks)
    out = np.zeros((total, total))
    pos = 0
    for b in blocks:
        k = b.shape[0]
        out[pos : pos + k, pos : pos + k] = b
        pos += k
    return out


def dimension(kind: SystemKind) -> int:
    """Phase-space dimension of the system."""
    return 2 * potential_matrix(kind).shape[0]


def coefficient_splitting(kind: SystemKind) -> tuple[np.ndarray, np.ndarray]:
    """Constant matrices (C0, C1) with B(theta) = C0 - C1/(1+e cos theta)."""
    w = potential_matrix(kind)
    c = w.shape[0]
    c0 = np.eye(2 * c)
    c1 = np.zeros((2 * c, 2 * c))
    c1[c:, c:] = w
    if not isinstance(kind, Scalar):
        jp = planar_j(c)
        c0[:c, c:] = -jp
        c0[c:, :c] = jp
    return c0, c1


def coefficient_matrix(kind: SystemKind, theta: float) -> np.ndarray:
    """B(theta); symmetric and 2*pi-periodic."""
    c0, c1 = coefficient_splitting(kind)
    return c0 - c1 / (1.0 + kind.e * math.cos(theta))


def max_step_ceiling(e: float) -> float:
    """Step ceiling tracking the coefficient peak at theta = pi, where the
    factor 1/(1+e cos theta) reaches 1/(1-e)."""
    return 0.5 * math.pi * (1.0 - e) / (1.0 + e)


def fundamental_solution(kind: SystemKind, tol: float = DEFAULT_TOL) -> FundamentalSolution:
    """Integrate y' = J B(theta) y over one period.

    Refuses e > 0.99 (the coefficient magnitude ~1/(1-e) leaves the
    integrator's validated envelope; near-singular statements are made by
    the region arithmetic instead).
    """
    if kind.e > ECCENTRICITY_CAP:
        raise NearSingularError(
            f"eccentricity {kind.e} > {ECCENTRICITY_CAP}: coefficient matrix is "
            "near-singular at theta = pi; integration refused"
        )
    if not TOL_MIN <= tol <= TOL_MAX:
        raise ValueError(f"tol {tol} outside [{TOL_MIN}, {TOL_MAX}]")
    c0, c1 = coefficient_splitting(kind)
    j = symplectic_j(c0.shape[0])
    a0 = j @ c0
    a1 = -(j @ c1)
    ys, defects, steps, _ = propagate(
        a0, a1, kind.e, tol, max_step_ceiling(kind.e), _QUARTERS
    )
    return FundamentalSolution(
        monodromy=ys[-1],
        symplectic_defect=float(defects[-1]),
        steps=steps,
        tol=tol,
        checkpoint_defects=defects,
    )


def constant_oracle(kind: SystemKind) -> np.ndarray:
    """Monodromy of the autonomous e = 0 system, exp(2*pi*J*B), via the
    scaling-and-squaring matrix exponential.  Independent of the
    integration route; only valid at e = 0."""
    if kind.e != 0.0:
        raise ValueError("constant-coefficient oracle requires e = 0")
    b = coefficient_matrix(kind, 0.0)
    j = symplectic_j(b.shape[0])
    return expm(2.0 * math.pi * (j @ b))
