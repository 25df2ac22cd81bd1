"""Symmetry-adapted basis and block diagonalization of the ring Hessian.

The 2n x 2n matrix A built here commutes with the block rotation J and is
orthonormal for the mass inner product (A^T M A = I).  Conjugating the
normalized Hessian with it splits the linearized problem into invariant
planes:

    A^-1 (1/lambda) M^-1 D2U(a) A
        = diag(O_2, diag(2, -1), U_1, U_2, ..., U_[n/2]),

with a zero block for the translation symmetry, diag(2, -1) for the
dilation/rotation (Kepler) directions, and one block per discrete Fourier
mode l of the ring.  Each mode block has a closed form in the sums

    P_l = sum_j (1 - cos(theta_jl) cos(theta_j)) / (2 d_nj^3),
    S_l = sum_j  sin(theta_jl) sin(theta_j)      / (2 d_nj^3),
    Q_l = sum_j (cos(theta_j) - cos(theta_jl))   / (2 d_nj^3),

over j = 1..n-1, with theta_j = 2*pi*j/n, theta_jl = 2*pi*j*l/n and
d_nj the chord to vertex n.  The mode l = 1 block collapses to
(z/lambda) I_2 with z = sum_j (1 - cos 2 theta_j)/(2 d_nj^3), and for even
n the mode n/2 block collapses to diag(a, b)/lambda because the sine
column vanishes identically.

The numeric reduction (conjugating the assembled Hessian) and the closed
forms are kept as independent routes; reduce_hessian reports the
discrepancy between them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configuration import (
    NGonConfiguration,
    lambda_cosecant,
    potential_derivatives,
    ring_distance,
    translation_vector,
)
from .matrices import cos_sin_fraction, planar_j


@dataclass(frozen=True, eq=False)
class SymmetryBasis:
    """The basis A with labeled column blocks and its defect norms.

    block_index maps labels "Cen", "Dil", "L1", ..., "Half" to half-open
    column ranges; ortho_residual = |A^T M A - I|_inf and
    commute_residual = |J A - A J|_inf.
    """

    A: np.ndarray
    block_index: dict[str, tuple[int, int]]
    ortho_residual: float
    commute_residual: float


@dataclass(frozen=True)
class BlockParameters:
    """Closed-form scalars of one mode block; a = P - 3Q, b = P + 3Q, and
    z is populated only for the first mode."""

    n: int
    l: int
    P: float
    Q: float
    S: float
    a: float
    b: float
    lambda_: float
    z: float | None = None


@dataclass(frozen=True, eq=False)
class ReducedBlocks:
    """Blocks extracted from the conjugated Hessian, in column order.

    offblock_residual is the largest entry outside the declared blocks;
    closed_form_residual the largest deviation of any extracted block from
    its closed form.
    """

    labels: tuple[str, ...]
    blocks: dict[str, np.ndarray]
    offblock_residual: float
    closed_form_residual: float


def block_labels(n: int) -> tuple[str, ...]:
    """Column block labels in order: Cen, Dil, L1, L2, ..., Half (n even)."""
    labels = ["Cen", "Dil", "L1"]
    labels += [f"L{l}" for l in range(2, (n - 1) // 2 + 1)]
    if n % 2 == 0:
        labels.append("Half")
    return tuple(labels)


def _block_width(label: str) -> int:
    return 2 if label in ("Cen", "Dil", "L1", "Half") else 4


def mode_count(n: int) -> int:
    """Number of Fourier mode blocks, floor(n/2)."""
    return n // 2


def block_parameters(n: int, l: int) -> BlockParameters:
    """Evaluate the P/S/Q sums for mode l of the n-gon.

    theta_jl is 2*pi*j*l/n; for l = n/2 every sin(theta_jl) vanishes
    exactly, so S = 0 as assembled.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got n={n}")
    if not 1 <= l <= n // 2:
        raise ValueError(f"mode index l={l} outside 1..{n // 2} for n={n}")
    P = S = Q = z = 0.0
    for j in range(1, n):
        cj, sj = cos_sin_fraction(j, n)
        cjl, sjl = cos_sin_fraction(j * l, n)
        c2j, _ = cos_sin_fraction(2 * j, n)
        w = 1.0 / (2.0 * ring_distance(n, n, j) ** 3)
        P += w * (1.0 - cjl * cj)
        S += w * (sjl * sj)
        Q += w * (cj - cjl)
        z += w * (1.0 - c2j)
    lam = lambda_cosecant(n)
    return BlockParameters(
        n=n,
        l=l,
        P=P,
        Q=Q,
        S=S,
        a=P - 3.0 * Q,
        b=P + 3.0 * Q,
        lambda_=lam,
        z=z if l == 1 else None,
    )


def closed_form_block(n: int, l: int) -> np.ndarray:
    """The mode block U_l of the reduced Hessian, from the closed forms.

    Mode 1 is (z/lambda) I_2; an interior mode 2 <= l <= (n-1)/2 is the
    4x4 coupling of the cosine and sine columns; mode n/2 (n even) is the
    2x2 diag(a, b)/lambda left after the sine columns vanish.
    """
    par = block_parameters(n, l)
    lam = par.lambda_
    if l == 1:
        return (par.z / lam) * np.eye(2)
    if 2 * l == n:
        return np.diag([par.a, par.b]) / lam
    a, b, s = par.a, par.b, par.S
    return (
        np.array(
            [
                [a, 0.0, 0.0, s],
                [0.0, b, -s, 0.0],
                [0.0, -s, a, 0.0],
                [s, 0.0, 0.0, b],
            ]
        )
        / lam
    )


def closed_form_blocks(n: int) -> dict[str, np.ndarray]:
    """All reduced blocks by label, including the zero translation block
    and the Kepler block diag(2, -1)."""
    out: dict[str, np.ndarray] = {
        "Cen": np.zeros((2, 2)),
        "Dil": np.diag([2.0, -1.0]),
        "L1": closed_form_block(n, 1),
    }
    for l in range(2, (n - 1) // 2 + 1):
        out[f"L{l}"] = closed_form_block(n, l)
    if n % 2 == 0:
        out["Half"] = closed_form_block(n, n // 2)
    return out


def _mode_columns(n: int, l: int) -> tuple[np.ndarray, np.ndarray]:
    """Stacked vectors v(l), w(l) with v_kl = cos(theta_kl) x_k and
    w_kl = sin(theta_kl) x_k."""
    v = np.empty(2 * n)
    w = np.empty(2 * n)
    for k in range(1, n + 1):
        ck, sk = cos_sin_fraction(k, n)
        ckl, skl = cos_sin_fraction(k * l, n)
        v[2 * k - 2 : 2 * k] = ckl * np.array([ck, sk])
        w[2 * k - 2 : 2 * k] = skl * np.array([ck, sk])
    return v, w


def build_basis(config: NGonConfiguration) -> SymmetryBasis:
    """Assemble A column block by column block and record its defects.

    Normalizations make every column a unit vector for the mass inner
    product: the double-angle vector of mode 1 and the mode-n/2 cosine
    vector have squared norm n, the interior-mode vectors n/2.
    """
    n = config.n
    jn = planar_j(2 * n)
    cols: list[np.ndarray] = []
    index: dict[str, tuple[int, int]] = {}

    def push(label: str, vectors: list[np.ndarray]) -> None:
        start = len(cols)
        cols.extend(vectors)
        index[label] = (start, len(cols))

    e1 = translation_vector(n)
    rn = 1.0 / np.sqrt(n)
    push("Cen", [rn * e1, rn * (jn @ e1)])
    a = config.positions
    push("Dil", [rn * a, rn * (jn @ a)])
    v1 = np.empty(2 * n)
    for k in range(1, n + 1):
        c2k, s2k = cos_sin_fraction(2 * k, n)
        v1[2 * k - 2 : 2 * k] = (c2k, s2k)
    push("L1", [rn * v1, rn * (jn @ v1)])
    r2n = np.sqrt(2.0 / n)
    for l in range(2, (n - 1) // 2 + 1):
        v, w = _mode_columns(n, l)
        push(f"L{l}", [r2n * v, r2n * (jn @ v), r2n * w, r2n * (jn @ w)])
    if n % 2 == 0:
        v, _ = _mode_columns(n, n // 2)
        push("Half", [rn * v, rn * (jn @ v)])

    A = np.column_stack(cols)
    mass = config.mass_matrix()
    ortho = float(np.abs(A.T @ mass @ A - np.eye(2 * n)).max())
    commute = float(np.abs(jn @ A - A @ jn).max())
    return SymmetryBasis(
        A=A, block_index=index, ortho_residual=ortho, commute_residual=commute
    )


def reduce_hessian(config: NGonConfiguration, basis: SymmetryBasis) -> ReducedBlocks:
    """Conjugate the normalized Hessian with A and extract the blocks.

    Uses A^-1 = A^T M (valid because A^T M A = I), so the conjugation is
    (1/lambda) A^T D2U(a) A.  Residuals quantify how block diagonal the
    result is and how well each block matches its closed form.
    """
    n = config.n
    if basis.A.shape != (2 * n, 2 * n):
        raise ValueError(
            f"basis dimension {basis.A.shape} does not match configuration n={n}"
        )
    hess = potential_derivatives(config).hessian
    reduced = (basis.A.T @ hess @ basis.A) / config.lambda_

    labels = block_labels(n)
    expected = closed_form_blocks(n)
    mask = np.ones_like(reduced, dtype=bool)
    blocks: dict[str, np.ndarray] = {}
    closed_residual = 0.0
    for label in labels:
        lo, hi = basis.block_index[label]
        blocks[label] = reduced[lo:hi, lo:hi].copy()
        mask[lo:hi, lo:hi] = False
        closed_residual = max(
            closed_residual, float(np.abs(blocks[label] - expected[label]).max())
        )
    offblock = float(np.abs(reduced[mask]).max())
    return ReducedBlocks(
        labels=labels,
        blocks=blocks,
        offblock_residual=offblock,
        closed_form_residual=closed_residual,
    )


def symmetry_checks(config: NGonConfiguration) -> tuple[float, float, float, float]:
    """Residuals of the four Hessian eigenvector identities (translation
    pair, rotation, dilation); all vanish for a central configuration."""
    from .configuration import symmetry_residuals

    return symmetry_residuals(config)


def reduced_blocks_json(reduced: ReducedBlocks) -> dict:
    """JSON layout: block label -> row-major entries, plus the residuals."""
    return {
        "blocks": {
            label: [list(row) for row in reduced.blocks[label]]
            for label in reduced.labels
        },
        "offblock_residual": reduced.offblock_residual,
        "closed_form_residual": reduced.closed_form_residual,
    }
