"""Regular n-gon central configuration and the Newtonian potential.

The configuration places n unit masses at the vertices of the unit circle,
vertex k at angle theta_k = 2*pi*k/n for k = 1..n (so vertex n sits at
(1, 0)).  Such a ring satisfies the central-configuration equation

    grad U(a) + lambda * M * a = 0,      lambda = U(a) / I(a),

where U is the negative Newtonian potential, M the mass matrix and I the
moment of inertia.  For the ring, lambda also has the closed form
(1/4) * sum_{j=1}^{n-1} csc(pi*j/n), which is used as a cross-check.

Mutual distances are evaluated from the chord formula
d_ij = 2*|sin(pi*(i-j)/n)| rather than from coordinates, which keeps them
accurate for large n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrices import cos_sin_fraction, planar_j, reflection, rotation

_LAMBDA_CROSSCHECK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class NGonConfiguration:
    """Positions, masses and derived scalars of a planar ring of bodies.

    positions is the stacked vector (x_1^T, ..., x_n^T)^T of length 2n;
    distances is the full n x n matrix of mutual distances; lambda_ is
    U(a)/I(a) and moment is I(a) = sum m_j |a_j|^2.
    """

    n: int
    positions: np.ndarray
    masses: np.ndarray
    distances: np.ndarray
    lambda_: float
    moment: float

    def mass_matrix(self) -> np.ndarray:
        """diag(m_1, m_1, ..., m_n, m_n) of size 2n."""
        return np.diag(np.repeat(self.masses, 2))

    def vertex(self, k: int) -> np.ndarray:
        """Position of vertex k, 1-based (vertex n sits at (1, 0))."""
        return self.positions[2 * (k - 1) : 2 * k]


@dataclass(frozen=True, eq=False)
class PotentialDerivatives:
    """Value, gradient and Hessian of U at a configuration.

    The Hessian is stored as the assembled 2n x 2n matrix; blocks(i, j)
    gives the 2x2 block U_ij.
    """

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 Hessian block for vertex pair (i, j), 1-based."""
        return self.hessian[2 * (i - 1) : 2 * i, 2 * (j - 1) : 2 * j]


def lambda_cosecant(n: int) -> float:
    """Closed form (1/4) * sum_{j<n} csc(pi*j/n) for the ring with unit
    masses on the unit circle."""
    return 0.25 * sum(1.0 / math.sin(math.pi * j / n) for j in range(1, n))


def ring_distance(n: int, i: int, j: int) -> float:
    """Chord length 2*|sin(pi*(i-j)/n)| between vertices i and j."""
    return 2.0 * abs(math.sin(math.pi * ((i - j) % n) / n))


def build_ngon(n: int) -> NGonConfiguration:
    """Construct the regular n-gon configuration with unit masses and radius.

    Raises ValueError for n < 3, or if the value U/I disagrees with the
    cosecant closed form beyond 1e-12 (which would indicate a broken build).
    """
    if n < 3:
        raise ValueError(f"regular n-gon needs n >= 3, got n={n}")
    positions = np.empty(2 * n)
    for k in range(1, n + 1):
        c, s = cos_sin_fraction(k, n)
        positions[2 * (k - 1)] = c
        positions[2 * k - 1] = s
    masses = np.ones(n)
    distances = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                distances[i, j] = ring_distance(n, i + 1, j + 1)
    moment = float(n)
    value = _potential_value(masses, distances)
    lam = value / moment
    closed = lambda_cosecant(n)
    if abs(lam - closed) > _LAMBDA_CROSSCHECK_TOL * max(1.0, closed):
        raise ValueError(
            f"lambda cross-check failed for n={n}: U/I={lam!r} vs csc sum={closed!r}"
        )
    return NGonConfiguration(
        n=n,
        positions=positions,
        masses=masses,
        distances=distances,
        lambda_=lam,
        moment=moment,
    )


def configuration_from_positions(
    positions: np.ndarray, masses: np.ndarray
) -> NGonConfiguration:
    """Build a configuration from raw coordinates (distances from the
    coordinates, lambda = U/I).  Used for perturbed and unequal-mass
    negative controls; no central-configuration property is assumed."""
    positions = np.asarray(positions, dtype=float)
    masses = np.asarray(masses, dtype=float)
    n = masses.size
    if positions.shape != (2 * n,):
        raise ValueError(f"positions must have shape ({2 * n},), got {positions.shape}")
    pts = positions.reshape(n, 2)
    diff = pts[:, None, :] - pts[None, :, :]
    distances = np.sqrt((diff**2).sum(axis=2))
    moment = float(np.sum(masses * (pts**2).sum(axis=1)))
    value = _potential_value(masses, distances)
    return NGonConfiguration(
        n=n,
        positions=positions,
        masses=masses,
        distances=distances,
        lambda_=value / moment,
        moment=moment,
    )


def _potential_value(masses: np.ndarray, distances: np.ndarray) -> float:
    n = masses.size
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            total += masses[i] * masses[j] / distances[i, j]
    return total


def potential_derivatives(config: NGonConfiguration) -> PotentialDerivatives:
    """Value, gradient and Hessian of U, assembled analytically.

    Off-diagonal Hessian blocks use the rank-one form
    U_ij = (m_i m_j / d_ij^3) (I_2 - 3 x_ij x_ij^T) with
    x_ij = (x_j - x_i)/d_ij; the diagonal blocks are forced to
    U_jj = -sum_{i != j} U_ij exactly as assembled, so row sums of blocks
    vanish identically (translation invariance).
    """
    n = config.n
    pts = config.positions.reshape(n, 2)
    m = config.masses
    d = config.distances
    grad = np.zeros((n, 2))
    hess = np.zeros((2 * n, 2 * n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rij = pts[j] - pts[i]
            dij = d[i, j]
            grad[i] += m[i] * m[j] * rij / dij**3
            xij = rij / dij
            block = (m[i] * m[j] / dij**3) * (np.eye(2) - 3.0 * np.outer(xij, xij))
            hess[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = block
    for j in range(n):
        diag = -sum(
            hess[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] for i in range(n) if i != j
        )
        hess[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = diag
    value = _potential_value(m, d)
    return PotentialDerivatives(value=value, gradient=grad.ravel(), hessian=hess)


def hessian_block_rotation_form(config: NGonConfiguration, i: int, j: int) -> np.ndarray:
    """Alternative closed form of the off-diagonal Hessian block for the
    regular n-gon (unit masses):

        U_ij = (1/d_ij^3) * (-1/2 I_2 + 3/2 R(theta_{j-i}) R^(2 theta_i)),

    with R a rotation and R^ a reflection.  Kept as an independent route so
    the two block formulas can be checked against each other; 1-based i, j.
    """
    if i == j:
        raise ValueError("rotation form applies to off-diagonal blocks only")
    n = config.n
    theta_i = 2.0 * math.pi * i / n
    theta_diff = 2.0 * math.pi * (j - i) / n
    dij = config.distances[i - 1, j - 1]
    return (1.0 / dij**3) * (
        -0.5 * np.eye(2) + 1.5 * rotation(theta_diff) @ reflection(2.0 * theta_i)
    )


def central_config_residual(config: NGonConfiguration) -> float:
    """Sup-norm of grad U(a) + lambda * M * a; at most ~1e-11 for a valid
    ring, and large for perturbed inputs."""
    deriv = potential_derivatives(config)
    mass_vec = np.repeat(config.masses, 2)
    return float(
        np.abs(deriv.gradient + config.lambda_ * mass_vec * config.positions).max()
    )


def translation_vector(n: int) -> np.ndarray:
    """e_1 = (1, 0, 1, 0, ..., 1, 0)^T of length 2n."""
    e1 = np.zeros(2 * n)
    e1[::2] = 1.0
    return e1


def symmetry_residuals(config: NGonConfiguration) -> tuple[float, float, float, float]:
    """The four eigenvector identities of the Hessian at a central
    configuration, as sup-norm residuals:

    translation:  D2U(a) e1 = 0  and  D2U(a) J e1 = 0,
    rotation:     (1/lambda) M^-1 D2U(a) (J a) = -J a,
    dilation:     (1/lambda) M^-1 D2U(a) a = 2 a.
    """
    n = config.n
    deriv = potential_derivatives(config)
    hess = deriv.hessian
    e1 = translation_vector(n)
    jn = planar_j(2 * n)
    a = config.positions
    minv = 1.0 / np.repeat(config.masses, 2)
    scaled = (minv[:, None] * hess) / config.lambda_
    r1 = float(np.abs(hess @ e1).max())
    r2 = float(np.abs(hess @ (jn @ e1)).max())
    r3 = float(np.abs(scaled @ (jn @ a) + jn @ a).max())
    r4 = float(np.abs(scaled @ a - 2.0 * a).max())
    return r1, r2, r3, r4
