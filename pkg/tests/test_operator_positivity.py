import math

import numpy as np
import pytest
from scipy.integrate import quad

from ngonstab import beta_certifier as bc
from ngonstab import linsys, operator_positivity as op, spectrum


def test_fourier_constant_at_zero_eccentricity():
    coeffs = op.inverse_radius_fourier(0.0, 8)
    assert coeffs[0] == pytest.approx(1.0, abs=1e-14)
    assert np.abs(coeffs[1:]).max() <= 1e-14


def test_fourier_mean_against_quadrature():
    for e in (0.3, 0.5, 0.9):
        coeffs = op.inverse_radius_fourier(e, 16)
        assert coeffs[0] == pytest.approx(1.0 / math.sqrt(1.0 - e * e), abs=1e-12)
        mean, _ = quad(lambda t: 1.0 / (1.0 + e * math.cos(t)), 0, 2 * math.pi)
        assert coeffs[0] == pytest.approx(mean / (2 * math.pi), abs=1e-10)


def test_fourier_modes_against_quadrature():
    e = 0.5
    coeffs = op.inverse_radius_fourier(e, 8)
    for m in (1, 2, 5):
        val, _ = quad(
            lambda t: math.cos(m * t) / (1.0 + e * math.cos(t)), 0, 2 * math.pi
        )
        assert coeffs[m] == pytest.approx(val / math.pi, abs=1e-10)


def test_fourier_geometric_decay():
    coeffs = op.inverse_radius_fourier(0.9, 40)
    ratios = np.abs(coeffs[6:31] / coeffs[5:30])
    assert ratios.max() < 1.0
    assert ratios.std() <= 0.01 * ratios.mean()


def test_fourier_reconstruction():
    for e in (0.5, 0.9):
        m = 96
        coeffs = op.inverse_radius_fourier(e, m)
        theta = 2 * math.pi * np.arange(512) / 512
        series = coeffs[0] + sum(
            coeffs[k] * np.cos(k * theta) for k in range(1, m + 1)
        )
        exact = 1.0 / (1.0 + e * np.cos(theta))
        assert np.abs(series - exact).max() <= 1e-12


def test_fourier_validation():
    with pytest.raises(ValueError):
        op.inverse_radius_fourier(1.0, 8)
    with pytest.raises(ValueError):
        op.inverse_radius_fourier(0.5, 0)


def test_scalar_assembly_diagonal_at_zero():
    g = op.galerkin_assemble(op.ScalarOperator(1.5), 0.0, 0.0, 16)
    k = np.arange(-16, 17)
    assert np.allclose(g.matrix, np.diag(k**2 + 0.5), atol=1e-13)
    assert op.min_eigenvalue(g) == pytest.approx(0.5, abs=1e-12)
    g2 = op.galerkin_assemble(op.ScalarOperator(2.0), 0.0, 0.0, 16)
    assert op.min_eigenvalue(g2) == pytest.approx(1.0, abs=1e-12)


def test_scalar_boundary_delta_one():
    g = op.galerkin_assemble(op.ScalarOperator(1.0), 0.0, 0.0, 16)
    assert op.min_eigenvalue(g) == pytest.approx(0.0, abs=1e-12)


def test_scalar_negative_below_threshold():
    g = op.galerkin_assemble(op.ScalarOperator(0.8), 0.0, 0.0, 16)
    assert op.min_eigenvalue(g) == pytest.approx(-0.2, abs=1e-12)


def planar_mode_minimum(beta, n_modes):
    # independent oracle at e = 0: per-mode eigenvalues k^2 + 3/2 +- sqrt(beta^2 + 4k^2)
    ks = np.arange(-n_modes, n_modes + 1)
    return min(k * k + 1.5 - math.sqrt(beta * beta + 4 * k * k) for k in ks)


def test_planar_assembly_matches_mode_closed_form():
    for beta in (0.5, 1.36):
        g = op.galerkin_assemble(op.PlanarOperator(beta), 0.0, 0.0, 16)
        assert op.min_eigenvalue(g) == pytest.approx(
            planar_mode_minimum(beta, 16), abs=1e-11
        )
    assert planar_mode_minimum(1.36, 16) == pytest.approx(0.0814, abs=5e-5)


def test_assembly_hermitian():
    for kind in (op.ScalarOperator(1.2), op.PlanarOperator(1.1), op.BlockOperator(5, 2)):
        g = op.galerkin_assemble(kind, 0.6, 0.37, 24)
        h = g.matrix
        scale = np.abs(h).max()
        assert np.abs(h - h.conj().T).max() <= 1e-12 * scale


def test_min_eigenvalue_identity():
    g = op.GalerkinOperator(op.ScalarOperator(1.0), 0.0, 0.0, 8, np.eye(17))
    assert op.min_eigenvalue(g) == pytest.approx(1.0, abs=1e-13)


def test_block_component_counts():
    assert op._component_count(op.BlockOperator(5, 1)) == 2
    assert op._component_count(op.BlockOperator(6, 3)) == 2
    assert op._component_count(op.BlockOperator(5, 2)) == 4


def test_assembly_validation():
    with pytest.raises(ValueError):
        op.galerkin_assemble(op.ScalarOperator(1.5), 0.995, 0.0, 16)
    with pytest.raises(ValueError):
        op.galerkin_assemble(op.ScalarOperator(1.5), 0.5, 1.0, 16)
    with pytest.raises(ValueError):
        op.galerkin_assemble(op.ScalarOperator(1.5), 0.5, 0.0, 4)


def test_positivity_scan_basic():
    report = op.positivity_scan(op.ScalarOperator(1.5), 0.5, 64, 64)
    assert report.min_eig > 0 and report.converged
    report = op.positivity_scan(op.ScalarOperator(0.8), 0.0, 16, 32)
    assert report.min_eig < 0


def test_positivity_scan_planar_checkpoint():
    # positive scan at the checkpoint parameters, consistent with the
    # verified hyperbolicity of (1.36, 0.5)
    report = op.positivity_scan(op.PlanarOperator(1.36), 0.5, 64, 64)
    assert report.min_eig > 0 and report.converged


def test_scan_report_json():
    report = op.positivity_scan(op.ScalarOperator(1.5), 0.3, 16, 32)
    payload = op.report_json(report)
    assert {
        "kind", "e", "N", "omega_count", "min_eig", "worst_phi", "converged",
        "evidence",
    } == set(payload)
    assert payload["converged"] is True
    assert "not a certificate" in payload["evidence"]


def test_scalar_positivity_hyperbolicity_agreement():
    """delta > 1 makes the scalar operator positive for every twist and the
    scalar monodromy hyperbolic with positive real multipliers."""
    for delta in (1.1, 1.5, 3.0):
        for e in (0.0, 0.5, 0.9):
            assemble = op._assembler(op.ScalarOperator(delta), e, 48)
            mins = [
                op.min_eigenvalue(
                    op.GalerkinOperator(op.ScalarOperator(delta), e, phi, 48, assemble(phi))
                )
                for phi in (j / 64 for j in range(64))
            ]
            assert min(mins) > 0, (delta, e)
            sol = linsys.fundamental_solution(linsys.Scalar(delta, e), 1e-11)
            values = spectrum.symplectic_eigenvalues(sol.monodromy)
            assert spectrum.classify(sol.monodromy).classification == spectrum.HYPERBOLIC
            assert all(abs(v.imag) <= 1e-9 * abs(v) and v.real > 0 for v in values), (
                delta,
                e,
            )


def test_equivalence_sign_agreement_grid():
    """Positivity of the planar operator and hyperbolicity of the
    beta-system agree wherever the scan margin is decisive."""
    disagreements = []
    for beta in (0.3, 0.7, 1.1, 1.36, 1.45):
        for e in (0.0, 0.3, 0.6, 0.9):
            report = op.positivity_scan(op.PlanarOperator(beta), e)
            if abs(report.min_eig) <= 1e-4 or not report.converged:
                continue
            hyperbolic = (
                bc.beta_monodromy(beta, e, 1e-11).classification == spectrum.HYPERBOLIC
            )
            if (report.min_eig > 0) != hyperbolic:
                disagreements.append((beta, e, report.min_eig, hyperbolic))
    assert not disagreements


def test_block_comparison_five_gon():
    """The skew-free comparison operator lower-bounds the mode block:
    min_eig(block(5,2)) >= min_eig(planar(beta_eff)) - 1e-8, per twist."""
    eff = bc.effective_beta(5, 2)
    assert eff.reducible
    par_s = eff.beta_eff
    for e in (0.0, 0.5):
        block_asm = op._assembler(op.BlockOperator(5, 2), e, 64)
        planar_asm = op._assembler(op.PlanarOperator(par_s), e, 64)
        for j in range(16):
            phi = j / 16
            block_min = op.min_eigenvalue(
                op.GalerkinOperator(op.BlockOperator(5, 2), e, phi, 64, block_asm(phi))
            )
            planar_min = op.min_eigenvalue(
                op.GalerkinOperator(op.PlanarOperator(par_s), e, phi, 64, planar_asm(phi))
            )
            assert block_min >= planar_min - 1e-8, (e, phi)


def test_doubling_convergence():
    for kind, e in [
        (op.ScalarOperator(1.5), 0.9),
        (op.PlanarOperator(1.36), 0.9),
        (op.BlockOperator(5, 2), 0.5),
    ]:
        lo = op.min_eigenvalue(op.galerkin_assemble(kind, e, 0.25, 64))
        hi = op.min_eigenvalue(op.galerkin_assemble(kind, e, 0.25, 128))
        assert abs(lo - hi) <= 1e-8 * max(1.0, abs(hi))
