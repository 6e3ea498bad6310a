import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freezewave.driver import fit_order
from freezewave.grid import (
    BoundaryData,
    Grid1D,
    central_diff,
    check_grid_function,
    discrete_laplacian,
    inner_product,
    l2_norm,
    make_grid,
)


def test_std_grid():
    g = make_grid(-15, 15, 300)
    assert g.dx == pytest.approx(0.1, rel=1e-15)
    assert g.nodes.size == 301
    assert g.nodes[0] == -15.0 and g.nodes[-1] == 15.0
    assert np.all(np.diff(g.nodes) > 0)


def test_unit_grid_nodes(small_grid):
    assert small_grid.dx == 0.25
    np.testing.assert_array_equal(small_grid.nodes, [0, 0.25, 0.5, 0.75, 1.0])


@pytest.mark.parametrize("args", [(-15, 15, 3), (1, 1, 10), (2, -2, 10), (0, 1, 4.5)])
def test_make_grid_rejects(args):
    with pytest.raises(ValueError):
        make_grid(*args)


def test_nodes_are_read_only(small_grid):
    with pytest.raises(ValueError):
        small_grid.nodes[0] = 1.0


def test_check_grid_function(small_grid):
    with pytest.raises(ValueError):
        check_grid_function(np.zeros(4), small_grid)
    with pytest.raises(ValueError):
        check_grid_function(np.array([0, 1, np.nan, 0, 0.0]), small_grid)


def test_boundary_data():
    bd = BoundaryData.from_function(np.array([1.5, 0.0, -0.5]))
    assert (bd.left, bd.right) == (1.5, -0.5)
    with pytest.raises(ValueError):
        BoundaryData(np.inf, 0.0)


def test_central_diff_hand_values(small_grid):
    u = np.array([0, 1, 4, 9, 16.0])
    np.testing.assert_array_equal(central_diff(u, small_grid), [0, 8, 16, 24, 0])


def test_central_diff_affine_and_constant(std_grid):
    x = std_grid.nodes
    d = central_diff(3 * x + 1, std_grid)
    np.testing.assert_allclose(d[1:-1], 3.0, rtol=1e-12)
    assert d[0] == d[-1] == 0.0
    assert not np.any(central_diff(np.full_like(x, 2.5), std_grid))


def test_laplacian_hand_values(small_grid):
    u = np.array([0, 1, 0, 1, 0.0])
    np.testing.assert_array_equal(discrete_laplacian(u, small_grid), [0, -32, 32, -32, 0])


def test_laplacian_quadratic_and_affine(std_grid):
    x = std_grid.nodes
    lap = discrete_laplacian(x**2, std_grid)
    assert np.max(np.abs(lap[1:-1] - 2.0)) <= 1e-10 * std_grid.dx**-2 * np.max(x**2)
    assert np.max(np.abs(discrete_laplacian(3 * x - 2, std_grid))) <= 1e-10 * std_grid.dx**-2 * 47


def test_inner_product_examples(small_grid):
    one = np.ones(5)
    assert inner_product(one, one, small_grid) == 0.75
    assert inner_product(one, np.zeros(5), small_grid) == 0.0
    u = np.array([9, 1, 2, 3, 9.0])
    v = np.array([-9, 1, 1, 1, -9.0])
    assert inner_product(u, v, small_grid) == 1.5
    with pytest.raises(ValueError):
        inner_product(one, np.ones(4), small_grid)


def test_l2_norm_examples(small_grid):
    assert l2_norm(np.zeros(5), small_grid) == 0.0
    assert l2_norm(np.ones(5), small_grid) == pytest.approx(np.sqrt(0.75), rel=1e-15)
    assert l2_norm(np.array([7, 3, 4, 0, 7.0]), small_grid) == 2.5


finite = st.floats(-1e3, 1e3, allow_nan=False)
# no subnormals: ulp arithmetic there is not relative
coef = st.floats(-1e3, 1e3, allow_subnormal=False).map(lambda a: a if abs(a) > 1e-300 else 0.0)


def _abs_stencil(op, m, g):
    """Apply the operator with absolute-value coefficients: the entry's natural magnitude."""
    out = np.zeros_like(m)
    if op is central_diff:
        out[1:-1] = (m[2:] + m[:-2]) / (2 * g.dx)
    else:
        out[1:-1] = (m[2:] + 2 * m[1:-1] + m[:-2]) / g.dx**2
    return out


@settings(max_examples=300, deadline=None)
@given(st.integers(4, 60), coef, coef, st.integers(0, 2**32 - 1))
def test_linearity_within_4ulp(n, alpha, beta, seed):
    g = make_grid(-3, 5, n)
    u, w = np.random.default_rng(seed).normal(size=(2, g.n_nodes))
    for op in (central_diff, discrete_laplacian):
        lhs = op(alpha * u + beta * w, g)
        rhs = alpha * op(u, g) + beta * op(w, g)
        scale = _abs_stencil(op, np.abs(alpha * u) + np.abs(beta * w), g)
        assert np.all(np.abs(lhs - rhs) <= 4 * np.spacing(scale))


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e3, 1e3).filter(lambda s: abs(s) > 1e-3), st.floats(-1, 1), st.floats(-20, -0.1), st.integers(4, 500))
def test_affine_exactness(slope, offset, left, n):
    # intercepts comparable to slope * domain size; beyond that rounding of u dominates
    g = make_grid(left, left + 7.3, n)
    d = central_diff(slope * (g.nodes - 10 * offset), g)[1:-1]
    np.testing.assert_allclose(d, slope, rtol=1e-12)


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, st.integers(4, 500))
def test_quadratic_exactness(a, b, c, n):
    g = make_grid(-2.0, 3.0, n)
    u = a * g.nodes**2 + b * g.nodes + c
    lap = discrete_laplacian(u, g)[1:-1]
    scale = max(np.max(np.abs(u)), 1.0)
    assert np.all(np.abs(lap - 2 * a) <= 1e-10 * g.dx**-2 * scale)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 300), st.integers(0, 2**32 - 1))
def test_inner_product_symmetric_bitwise(n, seed):
    g = make_grid(-1, 1, n)
    u, v = np.random.default_rng(seed).normal(size=(2, g.n_nodes))
    assert inner_product(u, v, g) == inner_product(v, u, g)


def test_central_diff_second_order_on_sine():
    dxs, errs = [], []
    for n in (150, 300, 600, 1200):
        g = make_grid(-15, 15, n)
        d = central_diff(np.sin(g.nodes), g)
        errs.append(np.max(np.abs(d - np.cos(g.nodes))[1:-1]))
        dxs.append(g.dx)
    assert fit_order(dxs, errs) == pytest.approx(2.0, abs=0.1)
