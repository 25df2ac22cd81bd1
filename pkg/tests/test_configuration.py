import math

import numpy as np
import pytest

from ngonstab import configuration as cfg
from ngonstab.matrices import planar_j


def cosecant_sum(n):
    # independent oracle for lambda
    return math.fsum(1.0 / math.sin(math.pi * j / n) for j in range(1, n)) / 4.0


def test_ngon_n3_positions_and_lambda():
    c = cfg.build_ngon(3)
    expected = np.array(
        [-0.5, math.sqrt(3) / 2, -0.5, -math.sqrt(3) / 2, 1.0, 0.0]
    )
    assert np.allclose(c.positions, expected, atol=1e-15)
    assert c.lambda_ == pytest.approx(1.0 / math.sqrt(3), abs=1e-14)
    assert c.lambda_ == pytest.approx(cosecant_sum(3), abs=1e-14)


def test_lambda_examples():
    assert cfg.build_ngon(4).lambda_ == pytest.approx((1 + 2 * math.sqrt(2)) / 4, abs=1e-14)
    c5 = cfg.build_ngon(5)
    assert c5.lambda_ == pytest.approx(1.3763819, abs=1e-7)
    assert c5.distances[4, 0] == pytest.approx(2 * math.sin(math.pi / 5), abs=1e-15)
    assert c5.distances[4, 0] == pytest.approx(1.1755705, abs=1e-7)


@pytest.mark.parametrize("n", range(3, 25))
def test_configuration_invariants(n):
    c = cfg.build_ngon(n)
    pts = c.positions.reshape(n, 2)
    assert np.abs(pts.sum(axis=0)).max() <= 1e-14
    assert c.moment == pytest.approx(n, abs=1e-12)
    assert c.lambda_ == pytest.approx(cosecant_sum(n), abs=1e-12)
    # distance symmetry d_ij = d_{n, (j+n-i) mod n}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            k = (j + n - i) % n
            if k == 0:
                continue
            assert c.distances[i - 1, j - 1] == pytest.approx(
                c.distances[n - 1, k - 1], abs=1e-14
            )


@pytest.mark.parametrize("n", range(3, 25))
def test_central_config_residual(n):
    assert cfg.central_config_residual(cfg.build_ngon(n)) <= 1e-11


def test_perturbed_configuration_is_not_central():
    c = cfg.build_ngon(3)
    positions = c.positions.copy()
    positions[0:2] *= 1.01
    perturbed = cfg.configuration_from_positions(positions, c.masses)
    assert cfg.central_config_residual(perturbed) > 1e-3


def test_build_ngon_rejects_small_n():
    with pytest.raises(ValueError):
        cfg.build_ngon(2)


def test_potential_value_n3():
    c = cfg.build_ngon(3)
    deriv = cfg.potential_derivatives(c)
    # three pairs at distance sqrt(3)
    assert deriv.value == pytest.approx(math.sqrt(3), abs=1e-14)


def test_gradient_matches_finite_differences():
    c = cfg.build_ngon(4)
    deriv = cfg.potential_derivatives(c)
    h = 1e-6
    for idx in range(8):
        plus = c.positions.copy()
        minus = c.positions.copy()
        plus[idx] += h
        minus[idx] -= h
        up = cfg.potential_derivatives(
            cfg.configuration_from_positions(plus, c.masses)
        ).value
        dn = cfg.potential_derivatives(
            cfg.configuration_from_positions(minus, c.masses)
        ).value
        assert deriv.gradient[idx] == pytest.approx((up - dn) / (2 * h), abs=1e-8)


def test_hessian_matches_gradient_finite_differences():
    c = cfg.build_ngon(5)
    deriv = cfg.potential_derivatives(c)
    h = 1e-6
    for idx in range(0, 10, 3):
        plus = c.positions.copy()
        minus = c.positions.copy()
        plus[idx] += h
        minus[idx] -= h
        gp = cfg.potential_derivatives(
            cfg.configuration_from_positions(plus, c.masses)
        ).gradient
        gm = cfg.potential_derivatives(
            cfg.configuration_from_positions(minus, c.masses)
        ).gradient
        assert np.allclose(deriv.hessian[:, idx], (gp - gm) / (2 * h), atol=1e-7)


def test_hessian_symmetry_and_diagonal_assembly():
    for n in (3, 4, 7, 12):
        c = cfg.build_ngon(n)
        deriv = cfg.potential_derivatives(c)
        hess = deriv.hessian
        scale = np.abs(hess).max()
        assert np.abs(hess - hess.T).max() <= 1e-13 * scale
        for j in range(1, n + 1):
            total = sum(deriv.block(j, i) for i in range(1, n + 1) if i != j)
            assert np.array_equal(deriv.block(j, j), -total)


def test_hessian_opposite_vertices_n4():
    c = cfg.build_ngon(4)
    deriv = cfg.potential_derivatives(c)
    x13 = (c.vertex(3) - c.vertex(1)) / 2.0
    expected = (1.0 / 8.0) * (np.eye(2) - 3.0 * np.outer(x13, x13))
    assert np.allclose(deriv.block(1, 3), expected, atol=1e-15)


@pytest.mark.parametrize("n", (3, 5, 8))
def test_hessian_rotation_form_agreement(n):
    c = cfg.build_ngon(n)
    deriv = cfg.potential_derivatives(c)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            rot = cfg.hessian_block_rotation_form(c, i, j)
            assert np.abs(deriv.block(i, j) - rot).max() <= 1e-12


@pytest.mark.parametrize("n", (3, 4, 7, 11))
def test_translation_nullvectors(n):
    c = cfg.build_ngon(n)
    hess = cfg.potential_derivatives(c).hessian
    e1 = cfg.translation_vector(n)
    jn = planar_j(2 * n)
    assert np.abs(hess @ e1).max() <= 1e-12
    assert np.abs(hess @ (jn @ e1)).max() <= 1e-12
