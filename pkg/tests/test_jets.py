import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from focalis import jets
from focalis.errors import (
    CompositionOffsetError,
    DivisionByZeroJet,
    DomainError,
    NotInvertibleJet,
    OrderMismatch,
)
from focalis.jets import Jet, VecJet, jet_compose, jet_div, jet_elem, jet_mul, jet_revert

ORDER = 6
COEF = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
jet_arrays = st.lists(COEF, min_size=ORDER + 1, max_size=ORDER + 1).map(np.array)


def j(*coeffs):
    return Jet(np.array(coeffs, dtype=float))


# ---------------------------------------------------------------------------
# worked examples

def test_difference_of_squares():
    h = Jet.variable(0.0, 2)
    np.testing.assert_allclose(((1 + h) * (1 - h)).coeffs, [1, 0, -1])


def test_geometric_series():
    h = Jet.variable(0.0, 3)
    np.testing.assert_allclose((1 / (1 - h)).coeffs, [1, 1, 1, 1])


def test_sin_times_cos():
    h = Jet.variable(0.0, 3)
    got = jet_mul(jet_elem("sin", h), jet_elem("cos", h))
    np.testing.assert_allclose(got.coeffs, [0, 1, 0, -2 / 3], atol=1e-15)


def test_elementary_examples():
    np.testing.assert_allclose(jet_elem("exp", Jet.constant(0.0, 4)).coeffs, [1, 0, 0, 0, 0])
    np.testing.assert_allclose(jet_elem("sqrt", j(4, 4, 1)).coeffs, [2, 1, 0])
    np.testing.assert_allclose(jet_elem("sin", j(0, 2, 0, 0)).coeffs, [0, 2, 0, -4 / 3], atol=1e-15)


def test_composition_examples():
    ident = j(0, 1, 0, 0)
    f = j(0.3, -1.2, 2.5, 0.7)
    np.testing.assert_allclose(jet_compose(f, ident).coeffs, f.coeffs)
    np.testing.assert_allclose(jet_compose(ident, j(0, 2, 0, 0)).coeffs, [0, 2, 0, 0])
    e = jet_elem("exp", Jet.variable(0.0, 3))
    np.testing.assert_allclose(jet_compose(e, j(0, 0, 1, 0)).coeffs, [1, 0, 1, 0])


def test_reversion_examples():
    np.testing.assert_allclose(jet_revert(j(0, 2, 0, 0)).coeffs, [0, 0.5, 0, 0])
    np.testing.assert_allclose(jet_revert(j(0, 1, 0, 0)).coeffs, [0, 1, 0, 0])
    np.testing.assert_allclose(jet_revert(j(0, 1, 1, 0)).coeffs, [0, 1, -1, 2])


# Taylor coefficients from sympy series expansions about h = 0.
SYMPY_SERIES = {
    "atan(1/2 + h)": (lambda h: jet_elem("atan", h + 0.5),
                      [0.4636476090008061, 0.8, -0.32, -0.042666666666666665, 0.1536, -0.077824]),
    "(3/2 + h)^(5/2)": (lambda h: (h + 1.5) ** 2.5,
                        [2.7556759606310752, 4.592793267718459, 2.2963966338592297,
                         0.2551551815399144, -0.021262931794992865, 0.004252586358998573]),
    "log(2 + h + h^2)": (lambda h: jet_elem("log", 2 + h + h * h),
                         [0.6931471805599453, 0.5, 0.375, -0.20833333333333334, -0.015625, 0.06875]),
    "tan(3/10 + h)": (lambda h: jet_elem("tan", h + 0.3),
                      [0.30933624960962325, 1.095688915322547, 0.3389362998047128,
                       0.4700749222790018, 0.25838998009489245, 0.2609696707016498]),
    "exp(sin h)": (lambda h: jet_elem("exp", jet_elem("sin", h)),
                   [1.0, 1.0, 0.5, 0.0, -0.125, -0.06666666666666667]),
    "sqrt(3 + 2h - h^3)": (lambda h: jet_elem("sqrt", 3 + 2 * h - h ** 3),
                           [1.7320508075688772, 0.5773502691896257, -0.09622504486493763,
                            -0.25660011963983365, 0.08286045530036296, -0.04187571396900063]),
    "(2 - h)^-3": (lambda h: (2 - h) ** -3,
                   [0.125, 0.1875, 0.1875, 0.15625, 0.1171875, 0.08203125]),
}


@pytest.mark.parametrize("name", sorted(SYMPY_SERIES))
def test_against_symbolic_series(name):
    fn, expected = SYMPY_SERIES[name]
    got = fn(Jet.variable(0.0, 5))
    np.testing.assert_allclose(got.coeffs, expected, rtol=1e-13, atol=1e-15)


def test_against_sympy_runtime():
    sp = pytest.importorskip("sympy")
    x = sp.symbols("x")
    expr = sp.exp(x) * sp.cos(x) / (2 + x)
    series = sp.series(expr, x, 0, 8).removeO()
    expected = [float(series.coeff(x, k)) for k in range(8)]
    h = Jet.variable(0.0, 7)
    got = jet_elem("exp", h) * jet_elem("cos", h) / (2 + h)
    np.testing.assert_allclose(got.coeffs, expected, rtol=1e-12, atol=1e-14)


# ---------------------------------------------------------------------------
# errors

def test_errors():
    with pytest.raises(OrderMismatch):
        jet_mul(j(1, 2), j(1, 2, 3))
    with pytest.raises(DivisionByZeroJet):
        jet_div(j(1, 2), j(0, 1))
    with pytest.raises(ZeroDivisionError):
        jet_div(j(1, 2), j(0, 1))
    with pytest.raises(DomainError):
        jet_elem("log", j(-1, 1))
    with pytest.raises(DomainError):
        jet_elem("sqrt", j(0, 1))
    with pytest.raises(CompositionOffsetError):
        jet_compose(j(1, 2, 3), j(1, 1, 0))
    with pytest.raises(NotInvertibleJet):
        jet_revert(j(0, 0, 1))
    with pytest.raises(ValueError):
        jet_elem("cosh", j(0, 1))


def test_jet_value_type():
    a = Jet.variable(2.0, 4)
    assert a.order == 4
    assert a.value == 2.0
    assert (a ** 3).derivative(1) == pytest.approx(12.0)
    assert (a ** 3).derivative(3) == pytest.approx(6.0)
    assert (2 ** a).value == pytest.approx(4.0)
    assert (2 ** a).derivative(1) == pytest.approx(4 * math.log(2))
    # numpy scalars must defer to the jet operators
    b = np.float64(3.0) * a
    assert isinstance(b, Jet)
    assert (a.diff().integrate(2.0)).allclose(a)
    assert a.truncate(2).order == 2
    assert a(0.5) == pytest.approx(2.5)


def test_vecjet():
    v = VecJet([[1, 2, 3], [0, 1, 0]])
    assert v.dim == 2 and v.order == 2
    np.testing.assert_allclose(v.value, [1, 0])
    np.testing.assert_allclose(v.derivative(2), [6, 0])
    np.testing.assert_allclose(v.norm_sq().coeffs, [1, 4, 11])
    w = v.compose(Jet(np.array([0.0, 2.0, 0.0])))
    np.testing.assert_allclose(w.coeffs, [[1, 4, 12], [0, 2, 0]])


# ---------------------------------------------------------------------------
# properties

@given(jet_arrays, jet_arrays, jet_arrays)
def test_ring_axioms(a, b, c):
    np.testing.assert_allclose(jets.mul(a, b), jets.mul(b, a), atol=1e-10)
    np.testing.assert_allclose(jets.mul(jets.mul(a, b), c), jets.mul(a, jets.mul(b, c)),
                               rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(jets.mul(a, b + c), jets.mul(a, b) + jets.mul(a, c),
                               rtol=1e-9, atol=1e-9)


@given(jet_arrays, jet_arrays)
def test_division_inverts_multiplication(a, b):
    assume(abs(b[0]) > 0.3)
    np.testing.assert_allclose(jets.mul(jets.div(a, b), b), a, rtol=1e-8, atol=1e-8)


@given(jet_arrays)
def test_exp_log_inverse(a):
    a = a * 0.3
    np.testing.assert_allclose(jets.log(jets.exp(a)), a, atol=1e-10)


@given(jet_arrays)
def test_sqrt_squares_back(a):
    a = a.copy()
    a[0] = abs(a[0]) + 0.5
    s = jets.sqrt(a)
    np.testing.assert_allclose(jets.mul(s, s), a, rtol=1e-9, atol=1e-9)


@given(jet_arrays)
def test_pythagoras(a):
    s, c = jets.sincos(a)
    one = np.zeros_like(a)
    one[0] = 1.0
    np.testing.assert_allclose(jets.mul(s, s) + jets.mul(c, c), one, atol=1e-8)


@given(jet_arrays)
def test_revert_composes_to_identity(a):
    a = a.copy()
    a[0] = 0.0
    assume(abs(a[1]) > 0.3)
    r = jets.revert(a)
    ident = np.zeros_like(a)
    ident[1] = 1.0
    np.testing.assert_allclose(jets.compose(a, r), ident, atol=1e-7)
    np.testing.assert_allclose(jets.compose(r, a), ident, atol=1e-7)


@given(jet_arrays, jet_arrays)
def test_composition_chain_rule(f, g):
    g = g.copy()
    g[0] = 0.0
    fg = jets.compose(f, g)
    # d/dh f(g(h)) = f'(g(h)) g'(h), compared at the lower order
    lhs = jets.diff(fg)
    rhs = jets.mul(jets.compose(jets.diff(f), g[:-1]), jets.diff(g))
    np.testing.assert_allclose(lhs, rhs, rtol=1e-8, atol=1e-8)


@given(st.floats(-1.0, 1.0), st.floats(0.5, 2.5))
def test_derivatives_match_finite_differences(x0, p):
    h = Jet.variable(x0, 3)
    f = jet_elem("atan", jet_elem("exp", h)) * (h * h + 1) ** p

    def g(x):
        return math.atan(math.exp(x)) * (x * x + 1) ** p

    eps = 1e-4
    fd1 = (g(x0 + eps) - g(x0 - eps)) / (2 * eps)
    fd2 = (g(x0 + eps) - 2 * g(x0) + g(x0 - eps)) / eps ** 2
    assert f.derivative(1) == pytest.approx(fd1, rel=1e-6, abs=1e-7)
    assert f.derivative(2) == pytest.approx(fd2, rel=1e-4, abs=1e-5)


@given(jet_arrays.filter(lambda a: abs(a[0]) > 0.2), st.integers(-4, 5))
def test_integer_power_matches_repeated_product(a, p):
    expected = np.zeros_like(a)
    expected[0] = 1.0
    for _ in range(abs(p)):
        expected = jets.mul(expected, a)
    if p < 0:
        expected = jets.recip(expected)
    np.testing.assert_allclose(jets.power(a, p), expected, rtol=1e-8, atol=1e-8)


@given(st.integers(1, 4), st.integers(0, 10_000))
def test_series_solve(n, seed):
    rng = np.random.default_rng(seed)
    # diagonally dominant constant term keeps the system well conditioned
    A = rng.standard_normal((n, n, ORDER + 1))
    A[..., 0] += 3 * n * np.eye(n)
    b = rng.standard_normal((n, ORDER + 1))
    q = jets.solve(A, b)
    back = np.array([sum(jets.mul(A[i, k], q[k]) for k in range(n)) for i in range(n)])
    np.testing.assert_allclose(back, b, rtol=1e-9, atol=1e-9)
