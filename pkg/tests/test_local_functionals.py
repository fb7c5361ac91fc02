import numpy as np
import pytest
from hypothesis import given, strategies as st

from vpflows.local_functionals import (NonHyperbolicError, PartialResultError, cubic_roots, eigenvalues,
                                       find_zeros, min_period, s_functional)
from vpflows.model import CatSuspension, Trig2D, TrigField3T, abc_sine_field

CAT = ((2, 1), (1, 1))
S_ABC = 48 * np.pi ** 2


@pytest.fixture(scope="module")
def abc_zeros():
    return find_zeros(abc_sine_field())


def test_abc_zeros_are_the_half_lattice(abc_zeros):
    locs = {tuple(z.location) for z in abc_zeros}
    assert locs == {(a, b, c) for a in (0.0, 0.5) for b in (0.0, 0.5) for c in (0.0, 0.5)}
    assert all(z.hyperbolic for z in abc_zeros)


def test_abc_eigenvalues_are_scaled_cube_roots(abc_zeros):
    for z in abc_zeros:
        cubes = (z.eigenvalues / (2 * np.pi)) ** 3
        assert np.allclose(np.abs(cubes), 1.0, atol=1e-12)
        assert np.allclose(cubes.imag, 0.0, atol=1e-12)
        assert z.re2 == pytest.approx(6 * np.pi ** 2, abs=1e-10)


def test_s_functional_value(abc_zeros):
    s = s_functional(abc_zeros)
    assert abs(s.value - S_ABC) <= 1e-6 and not s.no_zeros and s.zero_count == 8


def test_scaled_field_same_zeros_quadratic_S(abc_zeros):
    X = abc_sine_field()
    z2 = find_zeros(X.scale(2.0))
    assert [z.location for z in z2] == [z.location for z in abc_zeros]
    tau = 0.37
    s = s_functional(find_zeros(X.scale(1 + tau))).value
    assert s == pytest.approx((1 + tau) ** 2 * S_ABC, abs=1e-10 * S_ABC)


@pytest.mark.parametrize("perm", [(1, 2, 0), (2, 0, 1), (0, 2, 1), (1, 0, 2)])
def test_s_invariant_under_permutation(perm, abc_zeros):
    assert s_functional(find_zeros(abc_sine_field().permute(perm))).value == s_functional(abc_zeros).value


def test_constant_field_has_no_zeros():
    zeros = find_zeros(TrigField3T(Trig2D(1.0), Trig2D(), Trig2D()))
    s = s_functional(zeros)
    assert zeros == [] and s.value == 0.0 and s.no_zeros


def test_non_hyperbolic_zero_raises():
    # third component 1 - cos(2 pi x) has a double root: the Jacobian at the zeros is nilpotent
    field = TrigField3T(Trig2D(0.0, ((1, 0, 0.0, 1.0),)), Trig2D(0.0, ((0, 1, 0.0, 1.0),)),
                        Trig2D(1.0, ((1, 0, -1.0, 0.0),)))
    zeros = find_zeros(field)
    assert len(zeros) == 4
    assert not any(z.hyperbolic for z in zeros)
    assert all(np.max(np.abs(z.eigenvalues)) == 0.0 for z in zeros)
    with pytest.raises(NonHyperbolicError):
        s_functional(zeros)


def test_seed_grid_minimum():
    with pytest.raises(ValueError):
        find_zeros(abc_sine_field(), seed_grid=8)


@given(st.integers(0, 10_000))
def test_eigenvalues_match_numpy(seed):
    J = np.random.default_rng(seed).normal(size=(3, 3)) * 3
    ours = eigenvalues(J)
    ref = np.linalg.eigvals(J)
    # match as multisets: every reference eigenvalue has a partner, and vice versa
    gap = max(np.max(np.min(np.abs(ours[:, None] - ref[None, :]), axis=1)),
              np.max(np.min(np.abs(ref[:, None] - ours[None, :]), axis=1)))
    assert gap <= 1e-8 * max(1.0, np.max(np.abs(ref)))


def test_cubic_roots_repeated():
    r = np.sort(cubic_roots(-3.0, 3.0, -1.0).real)  # (l - 1)^3
    assert np.allclose(r, 1.0, atol=1e-5)


@pytest.mark.parametrize("roof,expected", [(Trig2D(1.0), 1.0), (Trig2D(1.0, ((1, 0, 0.1, 0.0),)), 1.1),
                                           (Trig2D(2.0), 2.0)])
def test_min_period_oracles(roof, expected):
    mp = min_period(CatSuspension(CAT, roof))
    assert mp.value == pytest.approx(expected, abs=1e-12)
    assert mp.certified_at >= 1 and mp.order == 1 and mp.point == (0.0, 0.0)
    assert all(row["count_consistent"] for row in mp.table)


def test_min_period_scaling_and_composition():
    roof = Trig2D(1.0, ((1, 1, 0.2, 0.1), (0, 1, 0.0, 0.15)))
    base = min_period(CatSuspension(CAT, roof)).value
    assert min_period(CatSuspension(CAT, roof.scale(3.0))).value == pytest.approx(3.0 * base, abs=1e-10)
    assert min_period(CatSuspension(CAT, roof.compose_linear(CAT))).value == pytest.approx(base, abs=1e-12)


def test_min_period_partial_result():
    # roof 1.8 at the fixed point but 0.2 elsewhere: 2 * min(roof) < 1.8 leaves order 2 open
    roof = Trig2D(1.0, ((1, 0, 0.8, 0.0),))
    with pytest.raises(PartialResultError) as info:
        min_period(CatSuspension(CAT, roof), n_max=1)
    assert info.value.best.value == pytest.approx(1.8)
    assert min_period(CatSuspension(CAT, roof)).certified_at > 1
    with pytest.raises(ValueError):
        min_period(CatSuspension(CAT), n_max=11)
