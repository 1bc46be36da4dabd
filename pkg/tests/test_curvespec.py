import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from focalis.curvespec import (
    BUILTIN_NAMES,
    builtin,
    eval_jet,
    format_expr,
    load_curve,
    parse_curve,
    parse_expr,
    sample_grid,
)
from focalis.curvespec.parser import evaluate_float
from focalis.errors import DimensionError, DomainError, ParseError, PeriodicityError, UnknownBuiltin
from focalis.frenet import is_good

from conftest import GOOD_FIXTURES, fixture_curve

HELIX_SRC = "dim 3; x = cos(t); y = sin(t); z = t; domain [0, 6.2831853]"
R4_SRC = ("dim 4; x = cos(t); y = sin(t); z = cos(2*t); w = sin(2*t); "
          "domain [0, 6.2831853]; periodic")


# ---------------------------------------------------------------------------
# parsing

def test_parse_helix():
    c = parse_curve(HELIX_SRC)
    assert c.dimension == 3 and c.m == 2
    assert c.domain == (0.0, 6.2831853)
    assert not c.periodic
    np.testing.assert_allclose(c(1.0), [math.cos(1), math.sin(1), 1.0])


def test_unclosed_parenthesis():
    with pytest.raises(ParseError) as info:
        parse_curve("x = cos(t")
    err = info.value
    assert err.line == 1
    assert err.column == 10
    assert "')'" in err.expected


def test_parse_error_position_on_later_line():
    src = "x = t;\ny = 2 * * t;\ndomain [0, 1];"
    with pytest.raises(ParseError) as info:
        parse_curve(src)
    assert (info.value.line, info.value.column) == (2, 9)


def test_r4_spherical_curve():
    c = parse_curve(R4_SRC)
    assert c.dimension == 4 and c.periodic
    theta = np.linspace(*c.domain, 100)
    np.testing.assert_allclose(np.linalg.norm(c(theta), axis=1), math.sqrt(2), rtol=1e-12)


def test_comments_labels_and_numbered_names():
    src = """
    # a planar cubic
    x1 = t;   # abscissa
    x2 = t^3;
    domain [-1, 1];
    label "cubic";
    """
    c = parse_curve(src)
    assert c.label == "cubic"
    assert c.names == ("x1", "x2")
    np.testing.assert_allclose(c(0.5), [0.5, 0.125])


@pytest.mark.parametrize("src, error", [
    ("x = t; domain [0, 1];", DimensionError),
    ("dim 3; x = t; y = t^2; domain [0, 1];", DimensionError),
    ("x = t; z = t; domain [0, 1];", DimensionError),
    ("x = t; y = t^2;", ParseError),
    ("x = t; y = t^2; domain [1, 0];", ParseError),
    ("x = t; y = t^2; domain [0, t];", ParseError),
    ("x = t; x = t^2; domain [0, 1];", ParseError),
    ("x = t; y = foo(t); domain [0, 1];", ParseError),
    ("x = t; y = 2 t; domain [0, 1];", ParseError),
    ("x = cos(t); y = t; domain [0, 2*pi]; periodic;", PeriodicityError),
])
def test_rejects_bad_sources(src, error):
    with pytest.raises(error):
        parse_curve(src)


def test_precedence():
    assert evaluate_float(parse_expr("-t^2"), 3.0) == -9.0
    assert evaluate_float(parse_expr("2^3^2"), 0.0) == 512.0
    assert evaluate_float(parse_expr("1 - 2 - 3"), 0.0) == -4.0
    assert evaluate_float(parse_expr("8 / 4 / 2"), 0.0) == 1.0
    assert evaluate_float(parse_expr("2*pi - e"), 0.0) == pytest.approx(2 * math.pi - math.e)


def test_load_curve(tmp_path):
    p = tmp_path / "helix.curve"
    p.write_text(HELIX_SRC, encoding="utf-8")
    assert load_curve(p).dimension == 3


# ---------------------------------------------------------------------------
# jets

def test_helix_jet():
    v = eval_jet(parse_curve(HELIX_SRC), 0.0, 3)
    np.testing.assert_allclose(v.coeffs, [[1, 0, -0.5, 0], [0, 1, 0, -1 / 6], [0, 1, 0, 0]],
                               atol=1e-15)


def test_constant_component():
    c = parse_curve("x = 2; y = t; domain [0, 1];")
    np.testing.assert_allclose(c.eval_jet(0.3, 4).coeffs[0], [2, 0, 0, 0, 0])


def test_circle_jet_at_quarter_turn():
    v = fixture_curve("unit_circle").eval_jet(math.pi / 2, 2)
    np.testing.assert_allclose(v.coeffs, [[0, -1, 0], [1, 0, -0.5]], atol=1e-15)


def test_domain_error_propagates():
    c = parse_curve("x = t; y = log(t); domain [-1, 1];")
    with pytest.raises(DomainError):
        c.eval_jet(-0.5, 2)


def test_theta_outside_domain():
    with pytest.raises(ValueError):
        fixture_curve("twisted_cubic").eval_jet(2.0, 2)


@pytest.mark.parametrize("name", ["helix", "trefoil_like", "random_poly_r4(1)"])
def test_jets_agree_with_finite_differences(name):
    c = fixture_curve(name)
    lo, hi = c.domain
    for th in np.linspace(lo + 0.1, hi - 0.1, 7):
        v = c.eval_jet(th, 2)
        h = 1e-4
        fd1 = (c(th + h) - c(th - h)) / (2 * h)
        fd2 = (c(th + h) - 2 * c(th) + c(th - h)) / h ** 2
        np.testing.assert_allclose(v.derivative(1), fd1, rtol=1e-6, atol=1e-6)
        np.testing.assert_allclose(v.derivative(2), fd2, rtol=1e-4, atol=1e-4)


@given(st.floats(0.0, 2 * math.pi), st.integers(1, 12), st.integers(0, 11))
def test_truncation_is_exact(theta, big, small):
    c = fixture_curve("trefoil_like")
    small = min(small, big)
    np.testing.assert_array_equal(c.eval_jet(theta, big).coeffs[:, :small + 1],
                                  c.eval_jet(theta, small).coeffs)


# ---------------------------------------------------------------------------
# printing

ATOMS = st.sampled_from(["t", "pi", "e", "2", "0.5", "3.25"])
FUNCS = st.sampled_from(["sin", "cos", "exp", "atan"])


def _expr_text(depth=3):
    if depth == 0:
        return ATOMS
    sub = _expr_text(depth - 1)
    return st.one_of(
        ATOMS,
        st.tuples(sub, st.sampled_from("+-*"), sub).map(lambda p: f"({p[0]}) {p[1]} ({p[2]})"),
        st.tuples(FUNCS, sub).map(lambda p: f"{p[0]}({p[1]})"),
        sub.map(lambda s: f"-({s})"),
        sub.map(lambda s: f"({s})^2"),
    )


expressions = _expr_text()


@given(expressions, st.lists(st.floats(-2, 2), min_size=1, max_size=5))
def test_format_parse_round_trip(text, points):
    node = parse_expr(text)
    again = parse_expr(format_expr(node))
    for t in points:
        a, b = evaluate_float(node, t), evaluate_float(again, t)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("name", ["helix", "sphere_curve_r3", "random_poly_r4(0)", "random_closed_r3(2)"])
def test_curve_source_round_trip(name):
    c = fixture_curve(name)
    again = parse_curve(c.source())
    assert again.domain == c.domain and again.periodic == c.periodic
    theta = np.random.default_rng(0).uniform(*c.domain, 50)
    np.testing.assert_allclose(again(theta), c(theta), rtol=1e-12, atol=1e-12)


# ---------------------------------------------------------------------------
# built-in fixtures

def test_builtin_helix_and_ellipse():
    h = builtin("helix")
    assert h.domain == pytest.approx((0, 2 * math.pi)) and not h.periodic
    np.testing.assert_allclose(h(0.7), [math.cos(0.7), math.sin(0.7), 0.7])
    e = builtin("ellipse_2_1")
    assert e.periodic
    np.testing.assert_allclose(e(0.7), [2 * math.cos(0.7), math.sin(0.7)])


def test_builtin_closed_forms():
    t = 0.9
    u = 0.5 * math.sin(2 * t)
    np.testing.assert_allclose(builtin("sphere_curve_r3")(t),
                               [math.cos(u) * math.cos(t), math.cos(u) * math.sin(t), math.sin(u)])
    np.testing.assert_allclose(builtin("trefoil_like")(t),
                               [math.sin(t) + 2 * math.sin(2 * t),
                                math.cos(t) - 2 * math.cos(2 * t), -math.sin(3 * t)])


def test_unknown_builtin():
    with pytest.raises(UnknownBuiltin):
        builtin("unknown_name")
    with pytest.raises(UnknownBuiltin):
        builtin("helix(3)")


def test_seeded_fixtures_are_deterministic():
    a = builtin("random_poly_r4", seed=5)
    b = builtin("random_poly_r4(5)")
    assert a.source() == b.source()
    assert a.dimension == 4
    assert builtin("random_poly_r4(6)").source() != a.source()
    assert builtin("random_closed_r3(1)").periodic


def test_builtin_names_complete():
    for name in BUILTIN_NAMES:
        assert builtin(name).dimension >= 2


@pytest.mark.parametrize("name", [n for n in GOOD_FIXTURES])
def test_fixtures_are_good(name):
    c = fixture_curve(name)
    for th in sample_grid(c, 200):
        assert is_good(c.eval_jet(th, c.m + 1), c.m).is_good


def test_periodic_grid_drops_endpoint():
    c = fixture_curve("unit_circle")
    g = sample_grid(c, 8)
    assert g.size == 8 and g[-1] < 2 * math.pi
    g = sample_grid(fixture_curve("helix"), 8)
    assert g[-1] == pytest.approx(2 * math.pi)


def test_derived_curves():
    c = fixture_curve("trefoil_like")
    r = c.reparametrized(2.0)
    assert r.domain == pytest.approx((0, math.pi))
    np.testing.assert_allclose(r(0.4), c(0.8))
    R = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1.0]])
    moved = c.transformed(R, [1, 2, 3])
    np.testing.assert_allclose(moved(0.4), R @ c(0.4) + [1, 2, 3])
