import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vpflows.entropy import (BracketError, CountCapError, OriginBump, entropy_derivative_check,
                             entropy_from_sums, entropy_suspension, fixed_point_count, periodic_points,
                             pressure, variance_estimate)
from vpflows.model import Trig2D

CAT = ((2, 1), (1, 1))
# |det(M^n - I)| = L_{2n} - 2 with Lucas numbers L_k
FROZEN_COUNTS = (1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125, 39601, 103680)
EN = float(np.log((3 + np.sqrt(5)) / 2))


def test_fixed_point_counts_frozen():
    for n, expected in enumerate(FROZEN_COUNTS, start=1):
        pts = periodic_points(CAT, n)
        assert pts.count == fixed_point_count(CAT, n) == expected
        assert pts.max_residual() == 0.0
        assert len({tuple(r) for r in pts.numerators}) == pts.count


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_periodic_points_against_brute_force(n):
    pts = periodic_points(CAT, n)
    D = pts.denominator
    P = np.linalg.matrix_power(np.array(CAT, dtype=np.int64), n)
    brute = {(a, b) for a, b in itertools.product(range(D), repeat=2)
             if ((P[0, 0] * a + P[0, 1] * b - a) % D, (P[1, 0] * a + P[1, 1] * b - b) % D) == (0, 0)}
    assert brute == {tuple(int(v) for v in r) for r in pts.numerators}


@given(st.integers(1, 3), st.integers(-3, 3))
def test_counts_for_other_hyperbolic_matrices(k, sign):
    M = ((k + 1, k), (1, 1)) if sign >= 0 else ((1, 1), (k, k + 1))
    for n in (1, 2, 3):
        assert periodic_points(M, n).count == fixed_point_count(M, n)


def test_count_cap():
    with pytest.raises(CountCapError):
        periodic_points(CAT, 20)


def test_pressure_of_zero_is_entropy():
    assert pressure(CAT, 0.0, 12) == pytest.approx(np.log(103680) / 12, abs=1e-12)


def test_entropy_constant_roofs():
    h1 = entropy_suspension(CAT, 1.0)
    h2 = entropy_suspension(CAT, 2.0)
    assert abs(h1.value - EN) <= 0.02
    assert h1.value == pytest.approx(0.96242, abs=1e-5)
    assert abs(h2.value - h1.value / 2) <= h1.bracket_width + h2.bracket_width


def test_entropy_non_constant_roof_frozen():
    h = entropy_suspension(CAT, Trig2D(1.0, ((1, 0, 0.1, 0.0),)))
    assert h.value == pytest.approx(0.9647, abs=5e-4)


def test_entropy_bracket_error():
    with pytest.raises(BracketError):
        entropy_from_sums(np.full(5, 12.0), 12, hi=1e-3)


def test_derivative_constant_function():
    rep = entropy_derivative_check(CAT, 0.3)
    assert rep.fd_slope == pytest.approx(0.3 * rep.en, abs=0.05 * rep.en)
    assert rep.quad_residual <= 1e-3
    assert rep.series_csv().startswith("eps,h\n")


def test_derivative_mean_zero_function():
    rep = entropy_derivative_check(CAT, Trig2D(0.0, ((1, 0, 1.0, 0.0),)))
    assert abs(rep.fd_slope) <= 0.02
    assert rep.quad_residual <= 1e-3
    assert rep.mean_f == 0.0


def test_variance_estimates():
    v = variance_estimate(CAT, Trig2D(0.0, ((1, 0, 1.0, 0.0),)), sample_count=50_000, seed=3)
    assert v.value >= -2 * v.stderr
    b = variance_estimate(CAT, OriginBump(), sample_count=50_000, seed=3)
    assert b.value > 3 * b.stderr
    again = variance_estimate(CAT, OriginBump(), sample_count=50_000, seed=3)
    assert again == b


def test_origin_bump_normalization():
    f = OriginBump()
    assert f(0.0, 0.0) == pytest.approx(1.0)
    u = (np.arange(400) + 0.5) / 400
    U, V = np.meshgrid(u, u, indexing="ij")
    assert abs(float(np.mean(f(U, V)))) <= 1e-6
