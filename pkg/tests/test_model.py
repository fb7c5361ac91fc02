import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vpflows.model import (BasisOverflowError, BumpProfile1D, CatSuspension, ModelParseError, PlateauBump1D,
                           ScalarProfile1D, Trig2D, TubeError, TubeProfile, abc_sine_field, load_model,
                           model_from_dict, tube_boundary_class_set)
from vpflows.model.io import tube_to_dict
from vpflows.model.profiles import random_positive_profile, random_profile

coef = st.floats(-3, 3, allow_nan=False)


@given(coef, st.lists(coef, max_size=4), st.lists(coef, max_size=4), st.lists(coef, max_size=4))
def test_antiderivative_inverts_derivative(c, poly, cos, sin):
    p = ScalarProfile1D(c, tuple(poly), tuple(cos), tuple(sin))
    P = p.antiderivative(start_value=0.7, origin=0.2)
    assert P(0.2) == pytest.approx(0.7, abs=1e-12)
    t = np.linspace(0, 1, 17)
    assert np.allclose(P.derivative()(t), p(t), atol=1e-10)
    assert p.integral(0.0, 1.0) == pytest.approx(P(1.0) - P(0.0), abs=1e-10)


def test_basis_caps():
    with pytest.raises(BasisOverflowError):
        ScalarProfile1D(0.0, poly=(1.0,) * 9)
    with pytest.raises(BasisOverflowError):
        ScalarProfile1D(0.0, cos=(1.0,) * 33)


def test_bump_profiles():
    b = BumpProfile1D(0.5, 0.2, 3.0)
    assert b(0.29) == 0.0 and b(0.71) == 0.0
    assert b.support == pytest.approx((0.3, 0.7))
    t = np.linspace(0.31, 0.69, 7)
    h = 1e-6
    assert np.allclose(b.d1(t), (b(t + h) - b(t - h)) / (2 * h), atol=1e-5)
    assert b.integral() == pytest.approx(b.cumulative(1.0), abs=1e-12)
    p = PlateauBump1D(0.0, 0.7, 0.9)
    assert p(0.5) == 1.0 and p(0.95) == 0.0


def test_tube_requires_positive_G():
    with pytest.raises(TubeError):
        TubeProfile(ScalarProfile1D(1.0), ScalarProfile1D(0.2, sin=(0.5,)))


def test_tube_class_end_and_restrict(rng):
    tp = TubeProfile(random_profile(rng), random_positive_profile(rng), (0.3, -0.2), (2, 1))
    c, d = tp.class_end()
    assert (c, d) == pytest.approx((0.3 + tp.integral_G(), -0.2 - tp.integral_F()))
    assert tube_boundary_class_set(tp) == pytest.approx((tp.integral_G(), -tp.integral_F()))
    left, right = tp.restrict(0.0, 0.4), tp.restrict(0.4, 1.0)
    assert right.class_start == pytest.approx(left.class_end())
    assert right.class_end() == pytest.approx((c, d))


def test_trig2d_compose_and_bounds():
    r = Trig2D(1.0, ((1, 0, 0.1, 0.0),))
    M = ((2, 1), (1, 1))
    rc = r.compose_linear(M)
    u, v = np.random.default_rng(1).random((2, 50))
    Mu = (2 * u + v) % 1.0, (u + v) % 1.0
    assert np.allclose(rc(u, v), r(*Mu), atol=1e-12)
    assert r.min_lower_bound() <= 0.9 + 1e-12
    assert r.mean == 1.0


def test_abc_field_divergence_free():
    X = abc_sine_field()
    p = np.random.default_rng(2).random((100, 3))
    assert np.max(np.abs(X.divergence(p))) == 0.0


def test_permute_is_pushforward():
    X = abc_sine_field()
    perm = (2, 0, 1)
    Y = X.permute(perm)
    p = np.random.default_rng(3).random((20, 3))
    q = np.empty_like(p)
    q[:, list(perm)] = p  # q = P p: old coord i lands in slot perm[i]
    Xp, Yq = X(p), Y(q)
    assert np.allclose(Yq[:, list(perm)], Xp, atol=1e-14)


def test_cat_suspension_validation():
    with pytest.raises(ValueError):
        CatSuspension(((1, 1), (0, 1)))
    with pytest.raises(ValueError):
        CatSuspension(((2, 1), (1, 1)), Trig2D(0.05, ((1, 0, 0.1, 0.0),)))
    assert CatSuspension().dominant_eigenvalue == pytest.approx((3 + np.sqrt(5)) / 2)


def test_model_io_round_trip(tmp_path):
    tp = TubeProfile(ScalarProfile1D(1.0, sin=(0.5,)), ScalarProfile1D(1.0), (0.0, 1.0), (0, 2))
    path = tmp_path / "tube.json"
    path.write_text(json.dumps(tube_to_dict(tp)))
    back = load_model(path)
    assert back == tp
    assert isinstance(model_from_dict({"type": "cat_suspension", "M": [[2, 1], [1, 1]]}), CatSuspension)


def test_model_parse_errors_name_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "toric_tube",\n "F": }')
    with pytest.raises(ModelParseError) as info:
        load_model(bad)
    assert "line 2" in str(info.value)
    with pytest.raises(ModelParseError) as info:
        model_from_dict({"type": "toric_tube", "F": {"const": 1}}, "m.json")
    assert "G" in str(info.value)
    with pytest.raises(ModelParseError):
        model_from_dict({"type": "toric_tube", "F": {"const": 1}, "G": {"const": 1}, "frame_offset": [0.5, 0]})
    with pytest.raises(ModelParseError):
        model_from_dict({"type": "mystery"})
