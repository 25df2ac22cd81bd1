"""Spectra of symplectic monodromy matrices and stability classification.

A real symplectic matrix has its spectrum closed under both complex
conjugation and inversion, so eigenvalues come in quadruples
{mu, conj(mu), 1/mu, 1/conj(mu)} (collapsing on the reals and the unit
circle).  Stability is read off the distance of each eigenvalue modulus
from 1:

* Hyperbolic   - every eigenvalue stays off the unit circle,
* Elliptic     - everything on the circle and semi-simple,
* Degenerate   - a non-semi-simple cluster at +1 or -1,
* Mixed        - on-circle and off-circle eigenvalues together,
* Inconclusive - some modulus too close to the decision band to call.

The n-gon verdict aggregates the essential mode blocks: the first mode is
hyperbolic for every n and eccentricity, so the full ring is spectrally
unstable; the ring is hyperbolic exactly when every mode block is.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import linsys
from .matrices import symplectic_j

EPS_UC_DEFAULT = 1e-6

HYPERBOLIC = "Hyperbolic"
ELLIPTIC = "Elliptic"
MIXED = "Mixed"
DEGENERATE = "Degenerate"
INCONCLUSIVE = "Inconclusive"

VERDICT_HYPERBOLIC = "Hyperbolic"
VERDICT_MIXED = "Mixed"
VERDICT_UNSTABLE = "SpectrallyUnstable"

_RESIDUAL_FACTOR = 1e-8
_CLUSTER_RADIUS = 1e-6
_RANK_TOL = 1e-6


@dataclass(frozen=True)
class EigenvalueCluster:
    """A group of numerically coincident eigenvalues."""

    center: complex
    algebraic: int
    geometric: int

    @property
    def semisimple(self) -> bool:
        return self.geometric >= self.algebraic


@dataclass(frozen=True, eq=False)
class MonodromySpectrum:
    """Eigenvalues of one monodromy matrix with their classification."""

    eigenvalues: np.ndarray
    unit_margin: float
    classification: str
    clusters: tuple[EigenvalueCluster, ...]

    @property
    def semisimple(self) -> tuple[bool, ...]:
        return tuple(c.semisimple for c in self.clusters)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Per-mode spectra of the essential part of the n-gon and the overall
    verdict."""

    n: int
    e: float
    per_block: dict[int, MonodromySpectrum]
    verdict: str


def symplectic_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a (numerically) symplectic matrix, deterministically
    ordered by decreasing modulus then argument.

    Warns when the symplectic defect of the input is large; polishes any
    eigenpair whose residual exceeds 1e-8 |M| with one inverse-iteration
    step and fails loudly if that is not enough.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("monodromy must be a square matrix")
    d = m.shape[0]
    if d % 2:
        raise ValueError("monodromy must have even dimension")
    norm = float(np.abs(m).max())
    j = symplectic_j(d)
    defect = float(np.abs(m.T @ j @ m - j).max())
    # Forming M^T J M in float64 already costs ~eps*|M|^2, so the warning
    # threshold cannot sit below that floor for large monodromies.
    if defect > max(1e-6, 64 * np.finfo(float).eps * norm**2):
        warnings.warn(
            f"input is far from symplectic (defect {defect:.3e})", stacklevel=2
        )
    values, vectors = np.linalg.eig(m)
    for i in range(d):
        v = vectors[:, i]
        resid = np.linalg.norm(m @ v - values[i] * v)
        if resid > _RESIDUAL_FACTOR * norm:
            values[i], v = _polish(m, values[i], v)
            resid = np.linalg.norm(m @ v - values[i] * v)
            if resid > _RESIDUAL_FACTOR * norm:
                raise ArithmeticError(
                    f"eigenpair residual {resid:.3e} exceeds {_RESIDUAL_FACTOR:g}*|M|"
                )
    order = np.lexsort((np.angle(values), -np.abs(values)))
    return values[order]


def _polish(m: np.ndarray, value: complex, vector: np.ndarray):
    """One inverse-iteration step followed by a Rayleigh-quotient update."""
    d = m.shape[0]
    shift = value * (1.0 + 1e-12) + 1e-300
    try:
        w = np.linalg.solve(m.astype(complex) - shift * np.eye(d), vector)
    except np.linalg.LinAlgError:
        return value, vector
    w = w / np.linalg.norm(w)
    return complex(np.conj(w) @ m @ w), w


def _cluster(values: np.ndarray) -> list[list[complex]]:
    groups: list[list[complex]] = []
    for mu in values:
        radius = _CLUSTER_RADIUS * max(1.0, abs(mu))
        for g in groups:
            if abs(g[0] - mu) <= radius:
                g.append(mu)
                break
        else:
            groups.append([mu])
    return groups


def classify(m: np.ndarray, eps_uc: float = EPS_UC_DEFAULT) -> MonodromySpectrum:
    """Classify a monodromy matrix from its spectrum.

    An eigenvalue counts as on-circle when | |mu| - 1 | <= eps_uc;
    any margin inside (eps_uc, 10*eps_uc] makes the whole verdict
    Inconclusive, preventing silent misclassification near bifurcations.
    """
    m = np.asarray(m, dtype=float)
    values = symplectic_eigenvalues(m)
    d = m.shape[0]
    norm = float(np.abs(m).max())
    margins = np.abs(np.abs(values) - 1.0)
    unit_margin = float(margins.min())

    clusters = []
    for group in _cluster(values):
        center = complex(np.mean(group))
        algebraic = len(group)
        if algebraic == 1:
            geometric = 1
        else:
            rank = np.linalg.matrix_rank(
                m.astype(complex) - center * np.eye(d), tol=_RANK_TOL * norm
            )
            geometric = d - int(rank)
        clusters.append(
            EigenvalueCluster(center=center, algebraic=algebraic, geometric=geometric)
        )

    if np.any((margins > eps_uc) & (margins <= 10.0 * eps_uc)):
        label = INCONCLUSIVE
    elif np.all(margins > eps_uc):
        label = HYPERBOLIC
    else:
        degenerate = any(
            not c.semisimple
            and (abs(c.center - 1.0) <= eps_uc or abs(c.center + 1.0) <= eps_uc)
            for c in clusters
        )
        if degenerate:
            label = DEGENERATE
        elif np.all(margins <= eps_uc) and all(c.semisimple for c in clusters):
            label = ELLIPTIC
        else:
            label = MIXED
    return MonodromySpectrum(
        eigenvalues=values,
        unit_margin=unit_margin,
        classification=label,
        clusters=tuple(clusters),
    )


def classify_ngon(
    n: int,
    e: float,
    tol: float = linsys.DEFAULT_TOL,
    eps_uc: float = EPS_UC_DEFAULT,
) -> StabilityReport:
    """Classify every essential mode block of the n-gon at eccentricity e.

    The verdict is Hyperbolic when every block is, Mixed when the blocks
    split between hyperbolic and on-circle spectra (the n >= 6 regime), and
    SpectrallyUnstable when off-circle eigenvalues exist but no block is
    cleanly hyperbolic.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    modes = list(range(1, n // 2 + 1))

    def one(l: int) -> MonodromySpectrum:
        sol = linsys.fundamental_solution(linsys.Essential(n, l, e), tol)
        return classify(sol.monodromy, eps_uc)

    with ThreadPoolExecutor(max_workers=min(len(modes), 8)) as pool:
        spectra = list(pool.map(one, modes))
    per_block = dict(zip(modes, spectra))

    if all(s.classification == HYPERBOLIC for s in spectra):
        verdict = VERDICT_HYPERBOLIC
    elif any(s.classification == HYPERBOLIC for s in spectra):
        verdict = VERDICT_MIXED
    elif any(s.unit_margin > eps_uc for s in spectra):
        verdict = VERDICT_UNSTABLE
    else:
        verdict = VERDICT_MIXED
    return StabilityReport(n=n, e=e, per_block=per_block, verdict=verdict)


def spectrum_json(spec: MonodromySpectrum) -> dict:
    return {
        "eigenvalues": [{"re": float(v.real), "im": float(v.imag)} for v in spec.eigenvalues],
        "margin": spec.unit_margin,
        "class": spec.classification,
        "semisimple": list(spec.semisimple),
    }


def report_json(report: StabilityReport) -> dict:
    return {
        "n": report.n,
        "e": report.e,
        "blocks": [
            {
                "l": l,
                "eigenvalues": [
                    {"re": float(v.real), "im": float(v.imag)}
                    for v in spec.eigenvalues
                ],
                "margin": spec.unit_margin,
                "class": spec.classification,
            }
            for l, spec in sorted(report.per_block.items())
        ],
        "verdict": report.verdict,
    }
