import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freezewave import make_grid
from freezewave.driver import fit_order
from freezewave.grid import BoundaryData, l2_norm
from freezewave.parabolic import (
    SingularSystemError,
    backward_euler_step,
    crank_nicolson_step,
    tridiagonal_solve,
)


def dense_theta_step(z, g, dt, bd, theta):
    """Reference step on the full node vector with dense linear algebra."""
    n = g.n_nodes
    lap = np.zeros((n, n))
    for j in range(1, n - 1):
        lap[j, j - 1 : j + 2] = np.array([1.0, -2.0, 1.0]) / g.dx**2
    z0 = np.array(z, dtype=float)
    z0[0], z0[-1] = bd.left, bd.right
    a = np.eye(n) - theta * dt * lap
    rhs = z0 + (1 - theta) * dt * lap @ z0
    return np.linalg.solve(a, rhs)


def sine_mode(g, k):
    return np.sin(k * np.pi * (g.nodes - g.l_minus) / (g.l_plus - g.l_minus))


def eigenvalue(g, k):
    return 4 / g.dx**2 * np.sin(k * np.pi * g.dx / (2 * (g.l_plus - g.l_minus))) ** 2


def test_tridiagonal_identity():
    rhs = np.array([3.0, -1.0, 2.5, 7.0])
    np.testing.assert_array_equal(tridiagonal_solve(np.zeros(3), np.ones(4), np.zeros(3), rhs), rhs)


def test_tridiagonal_3x3():
    x = tridiagonal_solve([-1.0, -1.0], [2.0, 2.0, 2.0], [-1.0, -1.0], [1.0, 0.0, 1.0])
    np.testing.assert_allclose(x, [1.0, 1.0, 1.0], rtol=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 200), st.integers(0, 2**32 - 1))
def test_tridiagonal_residual(n, seed):
    rng = np.random.default_rng(seed)
    lo, up = rng.normal(size=(2, n - 1))
    d = np.abs(np.r_[lo, 0]) + np.abs(np.r_[0, up]) + rng.uniform(0.1, 2, n)
    rhs = rng.normal(size=n)
    x = tridiagonal_solve(lo, d, up, rhs)
    a = np.diag(d) + np.diag(lo, -1) + np.diag(up, 1)
    assert np.max(np.abs(a @ x - rhs)) <= 1e-12 * np.max(np.abs(rhs)) * max(1, np.max(np.abs(a)))


def test_tridiagonal_singular():
    with pytest.raises(SingularSystemError):
        tridiagonal_solve([0.0], [0.0, 1.0], [0.0], [1.0, 1.0])
    with pytest.raises(SingularSystemError):
        tridiagonal_solve([], [0.0], [], [1.0])
    with pytest.raises(ValueError):
        tridiagonal_solve([0.0], [1.0, 1.0, 1.0], [0.0], [1.0, 1.0, 1.0])


@pytest.mark.parametrize("step", [backward_euler_step, crank_nicolson_step])
@pytest.mark.parametrize("value", [0.0, 1.5, -0.5])
def test_constant_preserved(std_grid, step, value):
    z = np.full(std_grid.n_nodes, value)
    out = step(z, std_grid, 0.01, BoundaryData(value, value))
    assert np.max(np.abs(out - z)) <= 1e-13


@pytest.mark.parametrize("step,theta", [(backward_euler_step, 1.0), (crank_nicolson_step, 0.5)])
def test_matches_dense_solve(std_grid, exact300, step, theta):
    bd = BoundaryData.from_function(exact300)
    z = exact300 + 0.05 * np.sin(3 * std_grid.nodes)
    z[0], z[-1] = bd.left, bd.right
    for dt in (1e-3, 0.01, 0.5):
        np.testing.assert_allclose(step(z, std_grid, dt, bd), dense_theta_step(z, std_grid, dt, bd, theta),
                                   rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("k", [1, 2, 7, 50])
@pytest.mark.parametrize("dt", [1e-3, 0.01, 1.0])
def test_sine_mode_amplification(k, dt):
    g = make_grid(-15, 15, 300)
    s = sine_mode(g, k)
    lam = eigenvalue(g, k)
    zero = BoundaryData(0.0, 0.0)
    np.testing.assert_allclose(backward_euler_step(s, g, dt, zero)[1:-1], (s / (1 + dt * lam))[1:-1],
                               rtol=1e-10, atol=1e-10 * np.max(np.abs(s)) / (1 + dt * lam))
    cn = (1 - dt * lam / 2) / (1 + dt * lam / 2)
    np.testing.assert_allclose(crank_nicolson_step(s, g, dt, zero)[1:-1], (cn * s)[1:-1],
                               rtol=1e-10, atol=1e-10 * abs(cn) * np.max(np.abs(s)) + 1e-15)


def test_backward_euler_consistency(std_grid, exact300):
    bd = BoundaryData.from_function(exact300)
    ratios = [l2_norm(backward_euler_step(exact300, std_grid, dt, bd) - exact300, std_grid) / dt
              for dt in (1e-2, 1e-3, 1e-4, 1e-5)]
    assert max(ratios) <= 2 * min(ratios)


def test_cn_vs_two_be_half_steps_second_order():
    g = make_grid(0, 1, 100)
    z = g.sample(lambda x: np.sin(np.pi * x) + 0.3 * np.sin(2 * np.pi * x) + 1 + x)
    bd = BoundaryData(1.0, 2.0)
    dts = [1e-3, 5e-4, 2.5e-4, 1.25e-4]
    diffs = []
    for dt in dts:
        half = backward_euler_step(backward_euler_step(z, g, dt / 2, bd), g, dt / 2, bd)
        diffs.append(l2_norm(crank_nicolson_step(z, g, dt, bd) - half, g))
    assert fit_order(dts, diffs) == pytest.approx(2.0, abs=0.2)


@pytest.mark.parametrize("step,order", [(backward_euler_step, 2.0), (crank_nicolson_step, 3.0)])
def test_local_error_against_exact_heat_solution(step, order):
    g = make_grid(0, 1, 100)
    coef = {1: 1.0, 2: 0.5, 3: 0.2}
    z0 = sum(c * sine_mode(g, k) for k, c in coef.items())
    dts = [1e-3, 5e-4, 2.5e-4, 1.25e-4]
    errs = []
    for dt in dts:
        exact = sum(c * np.exp(-eigenvalue(g, k) * dt) * sine_mode(g, k) for k, c in coef.items())
        errs.append(l2_norm(step(z0, g, dt, BoundaryData(0.0, 0.0)) - exact, g))
    assert fit_order(dts, errs) == pytest.approx(order, abs=0.1 * order)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 200), st.floats(1e-6, 1e3), st.integers(0, 2**32 - 1))
def test_unconditional_contraction(n, dt, seed):
    g = make_grid(-2, 3, n)
    z = np.random.default_rng(seed).normal(size=g.n_nodes)
    z[0] = z[-1] = 0.0
    zero = BoundaryData(0.0, 0.0)
    norm0 = l2_norm(z, g)
    for step in (backward_euler_step, crank_nicolson_step):
        assert l2_norm(step(z, g, dt, zero), g) <= norm0 * (1 + 1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_joint_linearity(alpha, beta, seed):
    g = make_grid(-15, 15, 60)
    rng = np.random.default_rng(seed)
    z1, z2 = rng.normal(size=(2, g.n_nodes))
    b1, b2 = BoundaryData(z1[0], z1[-1]), BoundaryData(z2[0], z2[-1])
    bc = BoundaryData(alpha * b1.left + beta * b2.left, alpha * b1.right + beta * b2.right)
    for step in (backward_euler_step, crank_nicolson_step):
        lhs = step(alpha * z1 + beta * z2, g, 0.05, bc)
        rhs = alpha * step(z1, g, 0.05, b1) + beta * step(z2, g, 0.05, b2)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (abs(alpha) + abs(beta) + 1) * 5)


def test_rejects_nonpositive_dt(std_grid, exact300):
    with pytest.raises(ValueError):
        backward_euler_step(exact300, std_grid, 0.0, BoundaryData.from_function(exact300))
