import numpy as np
import pytest
from hypothesis import given, strategies as st

from vpflows.invariants.forms import COORDS, WedgeTerm, contract_volume, top_coefficient
from vpflows.invariants.ruelle import rotation, unwrap_angles
from vpflows.invariants import (class_dependence, cocycle_integrate,
                                cocycle_integrate_generator, helicity_class_consistency, helicity_tube_wedge,
                                permutation_sign, rotation_per_time, ruelle_numeric, ruelle_tube_closed,
                                UnwrapError, wedge)
from vpflows.model import ScalarProfile1D, TubeProfile
from vpflows.model.profiles import random_positive_profile, random_profile

const = ScalarProfile1D


def tube(F, G, start=(0.0, 0.0), offset=(1, 0)):
    return TubeProfile(F, G, start, offset)


# --- forms ---------------------------------------------------------------------------------

def test_permutation_sign():
    assert permutation_sign(("t", "x", "y")) == 1
    assert permutation_sign(("x", "t", "y")) == -1
    assert permutation_sign(("y", "t", "x")) == 1
    assert COORDS == ("t", "x", "y")


def test_wedge_antisymmetry_and_contraction():
    one = lambda t, x, y: 1.0 + 0 * t  # noqa: E731
    # dx ^ dy ^ dt = +dt ^ dx ^ dy
    terms = wedge({("x", "y"): one}, {("t",): one})
    assert terms[0].sign == 1 and top_coefficient(terms)(0.2, 0.3, 0.4) == 1.0
    # dx ^ dt ^ dy = -dt ^ dx ^ dy
    assert top_coefficient(wedge({("x",): one}, {("t", "y"): one}))(0.1, 0.1, 0.1) == -1.0
    # iota_X (dt^dx^dy) for X = d/dx is -dt^dy
    zero = lambda t, x, y: 0.0 * t  # noqa: E731
    form = contract_volume((zero, one, zero))
    assert form[("t", "y")](0.1, 0.2, 0.3) == -1.0 and form[("x", "y")](0.1, 0.2, 0.3) == 0.0


def test_wedge_term_repeated_coordinate_vanishes():
    assert WedgeTerm(("t", "t", "x"), 1.0).sign == 0


# --- helicity ------------------------------------------------------------------------------

@pytest.mark.parametrize("a,b,c1,c2", [(0, 0, 1, 1), (0.3, -0.2, 2.0, 0.5), (1, 1, -1.5, 2.0)])
def test_helicity_constant_profiles_closed_form(a, b, c1, c2):
    # A = a + c2 t, B = b - c1 t: int (BG + AF) = b c2 + a c1
    h = helicity_tube_wedge(tube(const(c1), const(c2), (a, b)))
    assert h.value == pytest.approx(b * c2 + a * c1, abs=1e-12)


def test_helicity_pinned_values():
    h = helicity_tube_wedge(tube(const(1.0), const(1.0)))
    assert h.value == pytest.approx(0.0, abs=1e-14)
    assert h.branch == "cd-ab+2intAF"
    assert helicity_tube_wedge(tube(const(0.0), const(1.0), (0.0, 1.0))).value == pytest.approx(1.0, abs=1e-14)


@given(st.integers(0, 10_000))
def test_parts_identity_random_tubes(seed):
    rng = np.random.default_rng(seed)
    tp = tube(random_profile(rng), random_positive_profile(rng), tuple(rng.normal(size=2)))
    h = helicity_tube_wedge(tp)
    assert h.parts_residual <= 1e-9


@given(st.integers(0, 10_000))
def test_F_zero_family_gives_cd_minus_ab(seed):
    rng = np.random.default_rng(seed)
    tp = tube(const(0.0), random_positive_profile(rng), tuple(rng.normal(size=2)))
    (a, b), (c, d) = tp.class_start, tp.class_end()
    assert helicity_tube_wedge(tp).value == pytest.approx(c * d - a * b, abs=1e-9)


def test_class_consistency(rng):
    tp = tube(random_profile(rng), random_positive_profile(rng), (0.2, 0.4))
    rep = helicity_class_consistency(tp, shift=(1.0, -2.0))
    assert rep.passed, rep.checks
    assert abs(rep.exact_change_delta) <= 1e-9
    assert rep.shifted_delta == pytest.approx(class_dependence(tp, (1.0, -2.0)), abs=1e-9)


def test_integer_shear_preserves_helicity_and_ruelle(rng):
    tp = tube(random_profile(rng), random_positive_profile(rng), (0.1, 0.2), (2, -1))
    for p in (1, -3):
        s = tp.integer_shear(p)
        assert helicity_tube_wedge(s).value == pytest.approx(helicity_tube_wedge(tp).value, abs=1e-10)
        assert ruelle_tube_closed(s) == pytest.approx(ruelle_tube_closed(tp), abs=1e-12)


# --- Ruelle ----------------------------------------------------------------------------------

def test_ruelle_closed_form_values():
    assert ruelle_tube_closed(tube(const(1.0, sin=(0.5,)), const(1.0))) == pytest.approx(1.0, abs=1e-15)
    assert ruelle_tube_closed(tube(const(0.0), const(1.0), offset=(0, 4))) == 4.0


def test_unwrap_detects_ambiguous_steps():
    th = np.linspace(0, 3 * np.pi, 30)
    v = np.stack([np.cos(th), np.sin(th)], -1)
    assert unwrap_angles(v)[-1] == pytest.approx(3 * np.pi)
    with pytest.raises(UnwrapError):
        unwrap_angles(v[::10])


def test_rotation_engine_shear_and_uniform_rotation():
    T = 50.0
    shear = cocycle_integrate_generator(lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]), T, 1000)
    assert abs(rotation_per_time(shear)) <= 1e-12
    rot = cocycle_integrate_generator(lambda t: 2 * np.pi * 0.3 * np.array([[0.0, -1.0], [1.0, 0.0]]), T, 6000)
    assert rotation_per_time(rot) == pytest.approx(0.3, abs=1e-9)
    assert rot.det_drift <= 1e-8
    assert np.allclose(rotation(np.array([np.pi / 2]))[0], [[0, -1], [1, 0]], atol=1e-15)


def test_tube_cocycle_is_unimodular():
    tp = tube(const(1.0, sin=(0.5,)), const(1.0, cos=(0.3,)))
    path = cocycle_integrate(tp, (0.3, 0.1, 0.7), 40.0)
    assert path.det_drift <= 1e-10


def test_ruelle_numeric_offset_tube_is_exact():
    est = ruelle_numeric(tube(const(0.0), const(1.0), (0.0, 1.0), (0, 3)), 25.0, (32, 4, 4))
    assert est.value == pytest.approx(3.0, abs=1e-12)


def test_ruelle_numeric_within_bounds():
    tp = tube(const(1.0, sin=(0.5,)), const(1.0))
    est = ruelle_numeric(tp, 25.0, (32, 4, 4))
    assert abs(est.error) <= est.apriori_bound
    assert est.samples.shape == (32 * 16, 4)
    assert est.samples_csv().startswith("t,x,y,ru_T\n")
    with pytest.raises(ValueError):
        ruelle_numeric(tp, 5.0)
