import math

import numpy as np
import pytest

from ngonstab import reduction
from ngonstab.configuration import build_ngon, configuration_from_positions


def direct_mode_sums(n, l):
    """Independent oracle: the P/S/Q sums evaluated with plain math calls."""
    P = math.fsum(
        (1 - math.cos(2 * math.pi * j * l / n) * math.cos(2 * math.pi * j / n))
        / (2 * (2 * math.sin(math.pi * j / n)) ** 3)
        for j in range(1, n)
    )
    S = math.fsum(
        math.sin(2 * math.pi * j * l / n)
        * math.sin(2 * math.pi * j / n)
        / (2 * (2 * math.sin(math.pi * j / n)) ** 3)
        for j in range(1, n)
    )
    Q = math.fsum(
        (math.cos(2 * math.pi * j / n) - math.cos(2 * math.pi * j * l / n))
        / (2 * (2 * math.sin(math.pi * j / n)) ** 3)
        for j in range(1, n)
    )
    return P, Q, S


def test_basis_block_layout():
    for n, expected in [
        (3, {"Cen": 2, "Dil": 2, "L1": 2}),
        (4, {"Cen": 2, "Dil": 2, "L1": 2, "Half": 2}),
        (5, {"Cen": 2, "Dil": 2, "L1": 2, "L2": 4}),
        (8, {"Cen": 2, "Dil": 2, "L1": 2, "L2": 4, "L3": 4, "Half": 2}),
    ]:
        basis = reduction.build_basis(build_ngon(n))
        widths = {k: hi - lo for k, (lo, hi) in basis.block_index.items()}
        assert widths == expected
        # ranges tile the 2n columns exactly once
        ranges = sorted(basis.block_index.values())
        assert ranges[0][0] == 0 and ranges[-1][1] == 2 * n
        assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))


@pytest.mark.parametrize("n", range(3, 17))
def test_basis_residuals(n):
    basis = reduction.build_basis(build_ngon(n))
    assert basis.ortho_residual <= 1e-12
    assert basis.commute_residual <= 1e-12


def test_mode1_parameters_n3():
    par = reduction.block_parameters(3, 1)
    assert par.z == pytest.approx(1.0 / (2.0 * math.sqrt(3)), abs=1e-15)
    assert par.z / par.lambda_ == pytest.approx(0.5, abs=1e-14)


def test_mode2_parameters_n5():
    par = reduction.block_parameters(5, 2)
    P, Q, S = direct_mode_sums(5, 2)
    assert par.P == pytest.approx(P, abs=1e-14)
    assert par.Q == pytest.approx(Q, abs=1e-14)
    assert par.S == pytest.approx(S, abs=1e-14)
    assert par.S == pytest.approx(0.262865, abs=5e-6)
    assert par.P == pytest.approx(0.9510565, abs=1e-7)
    assert par.Q == pytest.approx(0.5257311, abs=1e-7)


def test_mode2_parameters_n4_closed_forms():
    par = reduction.block_parameters(4, 2)
    lam = par.lambda_
    assert par.a / lam == pytest.approx((2 * math.sqrt(2) - 4) / (4 + math.sqrt(2)), abs=1e-12)
    assert par.b / lam == pytest.approx((8 - math.sqrt(2)) / (4 + math.sqrt(2)), abs=1e-12)
    assert (par.b - par.a) / (2 * lam) == pytest.approx(0.7164, abs=5e-5)


def test_parameter_identities():
    for n, l in [(5, 2), (7, 3), (8, 2)]:
        par = reduction.block_parameters(n, l)
        assert par.a + par.b == pytest.approx(2 * par.P, abs=1e-14)
        assert par.b - par.a == pytest.approx(6 * par.Q, abs=1e-14)
    assert reduction.block_parameters(6, 1).z > 0


@pytest.mark.parametrize("n", (4, 6, 8, 10))
def test_half_mode_sine_column_vanishes(n):
    par = reduction.block_parameters(n, n // 2)
    assert par.S == 0.0


def test_half_identity_n5_mean_shift():
    par = reduction.block_parameters(5, 2)
    assert (par.a + par.b - 2 * par.S) / (2 * par.lambda_) == pytest.approx(0.5, abs=1e-10)
    assert 3 * par.Q / par.lambda_ == pytest.approx(1.1459, abs=1e-4)


def test_block_parameters_range_check():
    with pytest.raises(ValueError):
        reduction.block_parameters(5, 3)
    with pytest.raises(ValueError):
        reduction.block_parameters(5, 0)


def test_reduce_hessian_n3():
    c = build_ngon(3)
    reduced = reduction.reduce_hessian(c, reduction.build_basis(c))
    assert np.allclose(reduced.blocks["Cen"], np.zeros((2, 2)), atol=1e-10)
    assert np.allclose(reduced.blocks["Dil"], np.diag([2.0, -1.0]), atol=1e-10)
    assert np.allclose(reduced.blocks["L1"], 0.5 * np.eye(2), atol=1e-10)


def test_reduce_hessian_n4_half_block():
    c = build_ngon(4)
    reduced = reduction.reduce_hessian(c, reduction.build_basis(c))
    assert np.allclose(
        reduced.blocks["Half"], np.diag([-0.2164, 1.2164]), atol=5e-5
    )


def test_reduce_hessian_n5_mode2_pattern():
    c = build_ngon(5)
    reduced = reduction.reduce_hessian(c, reduction.build_basis(c))
    par = reduction.block_parameters(5, 2)
    lam = par.lambda_
    expected = np.array(
        [
            [par.a, 0, 0, par.S],
            [0, par.b, -par.S, 0],
            [0, -par.S, par.a, 0],
            [par.S, 0, 0, par.b],
        ]
    ) / lam
    assert np.abs(reduced.blocks["L2"] - expected).max() <= 1e-10
    assert reduced.offblock_residual <= 1e-10


@pytest.mark.parametrize("n", range(3, 17))
def test_reduction_closed_forms_all_n(n):
    c = build_ngon(n)
    reduced = reduction.reduce_hessian(c, reduction.build_basis(c))
    assert reduced.offblock_residual <= 1e-10
    assert reduced.closed_form_residual <= 1e-10


def test_reduce_hessian_dimension_mismatch():
    basis = reduction.build_basis(build_ngon(4))
    with pytest.raises(ValueError):
        reduction.reduce_hessian(build_ngon(5), basis)


@pytest.mark.parametrize("n", (3, 7))
def test_symmetry_checks_central(n):
    residuals = reduction.symmetry_checks(build_ngon(n))
    assert max(residuals) <= 1e-10


def test_symmetry_checks_negative_control():
    c = build_ngon(4)
    masses = c.masses.copy()
    masses[0] = 2.0
    unequal = configuration_from_positions(c.positions, masses)
    residuals = reduction.symmetry_checks(unequal)
    assert residuals[3] > 1e-3  # dilation identity fails off the central set


def test_reduced_blocks_json_roundtrip():
    c = build_ngon(4)
    reduced = reduction.reduce_hessian(c, reduction.build_basis(c))
    payload = reduction.reduced_blocks_json(reduced)
    assert set(payload["blocks"]) == {"Cen", "Dil", "L1", "Half"}
    assert payload["offblock_residual"] <= 1e-10
    half = np.array(payload["blocks"]["Half"])
    assert half.shape == (2, 2)
