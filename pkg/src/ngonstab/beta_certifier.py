"""Certified hyperbolic regions of the two-parameter (beta, e) system.

The four-dimensional beta-system (see ``linsys.Beta``) carries the
potential R_beta = (3/2) I + beta*diag(-1, 1); it matches the linearized
Lagrange triangle solution under beta = sqrt(9 - beta_L)/2, and the ring
mode blocks map onto it whenever their mean potential shift equals 1/2.

Hyperbolicity verified at a single checkpoint (beta0, e0) propagates by an
operator comparison to the open sets

    U1(beta0, e0):  0 <= beta < beta0*(1+e)/(1+3e-2*e0),   e >= e0,
    U2(beta0, e0):  0 <= beta < beta0*(1-e)/(1-3e+2*e0),   e <= e0,

so a finite ladder of checkpoints covers a strip [0, beta_bar) x [0, 1)
whose height beta_bar is computed here in closed form: on each checkpoint
interval the U1 bound from the left falls and the U2 bound from the right
rises, and their crossing solves a linear equation in e.  Numerical
integration only ever touches the checkpoints themselves (all with
e0 <= 0.9); arbitrarily high eccentricity is covered by the arithmetic.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import math

from . import linsys, reduction, spectrum
from .errors import CertificationError

DEFAULT_BETA0 = 1.36
OPERATOR_BETA_CAP = 1.5
_REDUCIBLE_TOL = 1e-9


@dataclass
class Checkpoint:
    """One verified (or to-be-verified) hyperbolic point of the beta-system."""

    beta0: float
    e0: float
    margin: float | None = None


@dataclass
class RegionCertificate:
    """A checkpoint ladder plus the clearance derived from it."""

    checkpoints: list[Checkpoint]
    clearance: float | None = None


@dataclass(frozen=True)
class EffectiveBeta:
    """Mapping of ring mode (n, l) onto the beta-system.

    mean_shift is the isotropic part added to the identity in the reduced
    potential; the mode reduces to the beta-system exactly when it equals
    1/2 (and, for the interior modes, the coupling sign allows the
    comparison).  route records which argument applies: the scalar
    single-frequency route for l = 1, the direct identification for the
    half mode, or the comparison-operator route for interior modes.
    """

    n: int
    l: int
    mean_shift: float
    beta_eff: float
    reducible: bool
    route: str


@dataclass(frozen=True)
class BoundWitness:
    """Which checkpoint and which of the two region families produced the
    best bound at a queried eccentricity."""

    beta0: float
    e0: float
    region: str
    bound: float


def default_checkpoints() -> list[Checkpoint]:
    """The ladder {(1.36, k/10) : k = 0..9}."""
    return [Checkpoint(DEFAULT_BETA0, k / 10.0) for k in range(10)]


def default_certificate() -> RegionCertificate:
    return RegionCertificate(checkpoints=default_checkpoints())


def beta_monodromy(beta: float, e: float, tol: float = linsys.DEFAULT_TOL) -> spectrum.MonodromySpectrum:
    """Spectrum of the beta-system monodromy at (beta, e)."""
    sol = linsys.fundamental_solution(linsys.Beta(beta, e), tol)
    return spectrum.classify(sol.monodromy)


def beta_from_mass(beta_l: float) -> float:
    """Translate the Lagrange mass parameter in [0, 9] to beta in [0, 3/2];
    monotone decreasing, with equal masses (9) at beta = 0."""
    if not 0.0 <= beta_l <= 9.0:
        raise ValueError(f"mass parameter {beta_l} outside [0, 9]")
    return math.sqrt(9.0 - beta_l) / 2.0


def effective_beta(n: int, l: int) -> EffectiveBeta:
    """Reduce ring mode (n, l) to beta-system form.

    For l = 1 the block is isotropic, (z/lambda) I, so beta_eff = 0 and the
    mean shift is z/lambda itself.  For the half mode (n even, l = n/2) the
    block is already diagonal.  Interior modes first drop the skew coupling
    through the comparison inequality, which requires S_l >= 0.
    """
    par = reduction.block_parameters(n, l)
    lam = par.lambda_
    if l == 1:
        return EffectiveBeta(
            n=n,
            l=l,
            mean_shift=par.z / lam,
            beta_eff=0.0,
            reducible=abs(par.z / lam - 0.5) <= _REDUCIBLE_TOL,
            route="scalar-delta",
        )
    beta_eff = (par.b - par.a) / (2.0 * lam)
    if 2 * l == n:
        mean = (par.a + par.b) / (2.0 * lam)
        reducible = abs(mean - 0.5) <= _REDUCIBLE_TOL
        route = "beta-direct"
    else:
        mean = (par.a + par.b - 2.0 * par.S) / (2.0 * lam)
        reducible = abs(mean - 0.5) <= _REDUCIBLE_TOL and par.S >= 0.0
        route = "beta-comparison"
    return EffectiveBeta(
        n=n, l=l, mean_shift=mean, beta_eff=beta_eff, reducible=reducible, route=route
    )


def _u1_bound(cp: Checkpoint, e: float) -> float | None:
    """Bound from U1(beta0, e0), valid for e >= e0."""
    if e < cp.e0:
        return None
    return cp.beta0 * (1.0 + e) / (1.0 + 3.0 * e - 2.0 * cp.e0)


def _u2_bound(cp: Checkpoint, e: float) -> float | None:
    """Bound from U2(beta0, e0), valid for e <= e0."""
    if e > cp.e0:
        return None
    return cp.beta0 * (1.0 - e) / (1.0 - 3.0 * e + 2.0 * cp.e0)


def region_membership(
    cert: RegionCertificate, beta: float, e: float
) -> tuple[bool, BoundWitness | None]:
    """Strict membership of (beta, e) in the union of checkpoint regions.

    Pure arithmetic, valid for every e in [0, 1) including beyond the
    integration cap.  The witness is the checkpoint and family attaining
    the best bound (also returned for non-members, as a diagnostic).
    Membership certifies hyperbolicity only once verify_checkpoints has
    passed on the same certificate.
    """
    if beta < 0.0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    if not 0.0 <= e < 1.0:
        raise ValueError(f"eccentricity {e} outside [0, 1)")
    best: BoundWitness | None = None
    for cp in cert.checkpoints:
        for region, bound in (("U1", _u1_bound(cp, e)), ("U2", _u2_bound(cp, e))):
            if bound is None:
                continue
            if best is None or bound > best.bound:
                best = BoundWitness(beta0=cp.beta0, e0=cp.e0, region=region, bound=bound)
    member = best is not None and beta < best.bound
    return member, best


def segment_clearance(cert: RegionCertificate) -> float:
    """Largest beta_bar with [0, beta_bar) x [0, 1) inside the region union,
    computed in closed form.

    Requires a ladder: one common beta0 and eccentricities
    0 = e^0 < e^1 < ... < e^m.  On [e^k, e^(k+1)] the binding bounds are
    the falling U1 curve from e^k and the rising U2 curve from e^(k+1);
    their crossing sits at e* = (e^k + e^(k+1)) / (2 - (e^(k+1) - e^k)).
    Past e^m only U1 applies and its infimum is the limit beta0/(2 - e^m).
    The result is stored on the certificate.
    """
    cps = sorted(cert.checkpoints, key=lambda c: c.e0)
    if not cps:
        raise ValueError("certificate has no checkpoints")
    beta0 = cps[0].beta0
    if any(abs(c.beta0 - beta0) > 0.0 for c in cps):
        raise ValueError("segment clearance needs a single-beta0 ladder")
    e_values = [c.e0 for c in cps]
    if e_values[0] != 0.0:
        raise ValueError("checkpoint ladder must start at e0 = 0")
    if any(b <= a for a, b in zip(e_values, e_values[1:])):
        raise ValueError("checkpoint eccentricities must be strictly increasing")
    if beta0 <= 0.0:
        raise ValueError("beta0 must be positive")

    candidates = []
    for ek, ek1 in zip(e_values, e_values[1:]):
        e_star = (ek + ek1) / (2.0 - (ek1 - ek))
        candidates.append(beta0 * (1.0 + e_star) / (1.0 + 3.0 * e_star - 2.0 * ek))
    candidates.append(beta0 / (2.0 - e_values[-1]))
    clearance = min(candidates)
    cert.clearance = clearance
    return clearance


def verify_checkpoints(cert: RegionCertificate, tol: float = linsys.DEFAULT_TOL) -> list[float]:
    """Integrate the beta-system at every checkpoint and demand hyperbolicity.

    Populates each checkpoint's margin and returns them in order.  Raises
    CertificationError naming the offending checkpoint otherwise; an
    eccentricity above the integration cap propagates the near-singular
    refusal unchanged.
    """
    for cp in cert.checkpoints:
        if cp.beta0 > OPERATOR_BETA_CAP:
            raise CertificationError(
                f"checkpoint beta0={cp.beta0} exceeds {OPERATOR_BETA_CAP}: "
                "hyperbolicity converts to operator positivity only for "
                "beta in [0, 3/2], so the region propagation does not apply"
            )

    def one(cp: Checkpoint) -> spectrum.MonodromySpectrum:
        return beta_monodromy(cp.beta0, cp.e0, tol)

    with ThreadPoolExecutor(max_workers=min(len(cert.checkpoints), 8)) as pool:
        spectra = list(pool.map(one, cert.checkpoints))
    margins = []
    for cp, sp in zip(cert.checkpoints, spectra):
        if sp.classification != spectrum.HYPERBOLIC:
            raise CertificationError(
                f"checkpoint (beta0={cp.beta0}, e0={cp.e0}) is not hyperbolic: "
                f"{sp.classification} with margin {sp.unit_margin:.3e}"
            )
        cp.margin = sp.unit_margin
        margins.append(sp.unit_margin)
    return margins


def segment_covered(eff: EffectiveBeta, clearance: float) -> bool:
    """Whether the reduced mode is certified hyperbolic for all e in [0, 1).

    The scalar route needs only a positive isotropic shift; the beta routes
    need reducibility, beta_eff below the clearance, and beta_eff within
    the operator-equivalence range [0, 3/2].
    """
    if eff.route == "scalar-delta":
        return eff.mean_shift > 0.0
    return (
        eff.reducible
        and eff.beta_eff < clearance
        and eff.beta_eff <= OPERATOR_BETA_CAP
    )


def certificate_json(cert: RegionCertificate, chain_modes=((3, 1), (4, 2), (5, 2))) -> dict:
    """JSON layout: checkpoints with margins, the clearance, and the chain
    of ring modes certified through the region."""
    clearance = cert.clearance if cert.clearance is not None else segment_clearance(cert)
    chain = []
    for n, l in chain_modes:
        eff = effective_beta(n, l)
        chain.append(
            {
                "n": n,
                "l": l,
                "beta_eff": eff.beta_eff,
                "mean_shift": eff.mean_shift,
                "route": eff.route,
                "covered": segment_covered(eff, clearance),
            }
        )
    return {
        "checkpoints": [
            {"beta0": cp.beta0, "e0": cp.e0, "margin": cp.margin}
            for cp in cert.checkpoints
        ],
        "clearance": clearance,
        "chain": chain,
    }
