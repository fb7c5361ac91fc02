import numpy as np
import pytest
from hypothesis import given, strategies as st

from vpflows.numerics import (QuadratureError, QuadratureSpec, flow_rk4, grid_sup, jacobian_fd, quad1d,
                              tensor_quad, wrap_angle)


def test_quad1d_polynomial_and_trig():
    assert quad1d(lambda t: t ** 3, 0.0, 2.0) == pytest.approx(4.0, abs=1e-12)
    assert quad1d(lambda t: np.sin(2 * np.pi * t) ** 2, 0.0, 1.0) == pytest.approx(0.5, abs=1e-10)
    assert quad1d(lambda t: t, 1.0, 0.0) == pytest.approx(-0.5, abs=1e-14)


def test_quad1d_reports_worst_interval_on_exhaustion():
    with pytest.raises(QuadratureError) as info:
        quad1d(lambda t: np.abs(t - 0.3) ** -0.9, 0.0, 1.0, QuadratureSpec(tol=1e-14, max_depth=6))
    lo, hi = info.value.worst_interval
    assert lo <= 0.3 <= hi


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_depth=0)


def test_tensor_quad_product():
    val = tensor_quad(lambda x, y, z: np.cos(np.pi * x) ** 2 * y * (1 + z), [(0, 1), (0, 2), (-1, 1)], n=16)
    assert val == pytest.approx(0.5 * 2.0 * 2.0, abs=1e-12)


def test_rk4_fourth_order_on_circle():
    field = lambda t, p: np.array([-p[1], p[0]])  # noqa: E731
    T = 2 * np.pi
    errs = [np.linalg.norm(flow_rk4(field, [1.0, 0.0], T, n).endpoint - [1.0, 0.0]) for n in (50, 100)]
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.05)


def test_jacobian_fd_matches_analytic():
    f = lambda p: np.array([np.sin(p[0]) * p[1], p[0] ** 2])  # noqa: E731
    J = jacobian_fd(f, [0.3, 2.0], h=1e-5)
    exact = np.array([[np.cos(0.3) * 2.0, np.sin(0.3)], [0.6, 0.0]])
    assert np.max(np.abs(J - exact)) < 1e-9
    with pytest.raises(ValueError):
        jacobian_fd(f, [0.0, 0.0], h=1e-2)


def test_grid_sup_and_minimum_resolution():
    s = grid_sup(lambda x, y: x * y, [(-1, 1), (0, 2)], resolution=65)
    assert s.value == pytest.approx(2.0)
    assert s.spacing == pytest.approx((2 / 64, 2 / 64))
    with pytest.raises(ValueError):
        grid_sup(lambda x: x, [(0, 1)], resolution=32)


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_wrap_angle_range(d):
    w = float(wrap_angle(d))
    assert -np.pi <= w <= np.pi
    assert np.cos(w) == pytest.approx(np.cos(d), abs=1e-6)
