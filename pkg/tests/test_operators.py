import math

import numpy as np
import pytest

from cred import operators
from cred.imagecore import ShapeMismatchError, dot

from oracles import dense_circulant, dense_dft2, explicit_wrap, gaussian_weights


@pytest.mark.parametrize("sigma", [0.5, 1.0, 1.2, 2.0])
def test_kernel_definition(sigma):
    k = operators.gaussian_kernel(sigma)
    r = math.ceil(4 * sigma)
    assert k.shape == (2 * r + 1, 2 * r + 1)
    assert k.sum() == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(k, gaussian_weights(sigma, r), rtol=1e-13)


def test_build_invariants():
    op = operators.build(1.2, 40, 32)
    assert op.shape == (32, 40)
    assert op.kernel_radius == 5
    assert abs(op.transfer[0, 0] - 1.0) < 1e-12
    np.testing.assert_allclose(op.transfer_abs2, np.abs(op.transfer) ** 2)
    assert np.all(op.transfer_abs2 >= 0)


def test_kernel_too_large():
    with pytest.raises(ValueError):
        operators.build(2.0, 16, 8)
    with pytest.raises(ValueError):
        operators.build(-1.0, 16, 16)


def test_transfer_matches_dense_dft():
    op = operators.build(0.25, 8, 8)  # radius 1: 3x3 kernel
    assert op.kernel.shape == (3, 3)
    expected = dense_dft2(explicit_wrap(op.kernel, (8, 8)))
    assert np.max(np.abs(op.transfer - expected)) < 1e-12


def test_constant_fixed_point():
    op = operators.build(1.0, 24, 20)
    c = np.full((20, 24), 77.5)
    np.testing.assert_allclose(op.apply(c), c, atol=1e-10)
    np.testing.assert_allclose(op.apply_adjoint(c), c, atol=1e-10)


def test_identity_operator(rng):
    op = operators.build(0, 9, 7)
    x = rng.normal(size=(7, 9))
    np.testing.assert_allclose(op.apply(x), x, atol=1e-12)


def test_impulse_response():
    op = operators.build(1.0, 16, 16)
    e = np.zeros((16, 16))
    e[0, 0] = 1
    np.testing.assert_allclose(op.apply(e), explicit_wrap(op.kernel, (16, 16)), atol=1e-14)


@pytest.mark.parametrize("sigma", [0.25, 0.5])
def test_apply_matches_dense_circulant(rng, sigma):
    op = operators.build(sigma, 8, 8)
    m = dense_circulant(gaussian_weights(sigma, op.kernel_radius), (8, 8))
    x = rng.normal(size=(8, 8)) * 50
    assert np.max(np.abs(op.apply(x).ravel() - m @ x.ravel())) < 1e-10
    assert np.max(np.abs(op.apply_adjoint(x).ravel() - m.T @ x.ravel())) < 1e-10


def test_adjoint_identity(rng):
    op = operators.build(1.0, 32, 24)
    for _ in range(10):
        x, y = rng.normal(size=(2, 24, 32))
        lhs, rhs = dot(op.apply(x), y), dot(x, op.apply_adjoint(y))
        assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), 1.0)


def test_symmetric_psf_self_adjoint(rng):
    op = operators.build(1.5, 30, 30)
    y = rng.normal(size=(30, 30))
    np.testing.assert_allclose(op.apply_adjoint(y), op.apply(y), atol=1e-10)


def test_solve_c_zero(rng):
    op = operators.build(1.0, 16, 16)
    rhs = rng.normal(size=(16, 16))
    np.testing.assert_allclose(op.solve_regularized_normal(rhs, 0.0), rhs, atol=1e-12)


def test_solve_residual(rng):
    op = operators.build(1.0, 20, 16)
    rhs = rng.normal(size=(16, 20)) * 30
    c = 2.5
    x = op.solve_regularized_normal(rhs, c)
    back = c * op.apply_adjoint(op.apply(x)) + x
    assert np.linalg.norm(back - rhs) <= 1e-9 * np.linalg.norm(rhs)


def test_solve_matches_dense(rng):
    op = operators.build(0.7, 8, 8)
    m = dense_circulant(gaussian_weights(0.7, op.kernel_radius), (8, 8))
    rhs = rng.normal(size=(8, 8))
    c = 3.0
    expected = np.linalg.solve(c * m.T @ m + np.eye(64), rhs.ravel())
    assert np.max(np.abs(op.solve_regularized_normal(rhs, c).ravel() - expected)) < 1e-9


def test_solve_rejects_bad_c(rng):
    op = operators.build(1.0, 16, 16)
    with pytest.raises(ValueError):
        op.solve_regularized_normal(np.zeros((16, 16)), -1.0)


def test_nonexpansive(rng):
    op = operators.build(1.0, 32, 32)
    for _ in range(5):
        x = rng.normal(size=(32, 32))
        assert np.linalg.norm(op.apply(x)) <= np.linalg.norm(x)


def test_shape_checks():
    op = operators.build(1.0, 16, 16)
    for fn in (op.apply, op.apply_adjoint):
        with pytest.raises(ShapeMismatchError):
            fn(np.zeros((16, 15)))
    with pytest.raises(ShapeMismatchError):
        op.solve_regularized_normal(np.zeros((15, 16)), 1.0)


def test_to_dense_matches_oracle():
    op = operators.build(0.5, 8, 8)
    m = dense_circulant(gaussian_weights(0.5, op.kernel_radius), (8, 8))
    assert np.max(np.abs(op.to_dense() - m)) < 1e-12


def test_concurrent_apply(rng):
    from concurrent.futures import ThreadPoolExecutor

    op = operators.build(1.0, 64, 64)
    xs = [rng.normal(size=(64, 64)) for _ in range(8)]
    serial = [op.solve_regularized_normal(op.apply(x), 1.5) for x in xs]
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda x: op.solve_regularized_normal(op.apply(x), 1.5), xs))
    for a, b in zip(serial, threaded):
        assert np.array_equal(a, b)
