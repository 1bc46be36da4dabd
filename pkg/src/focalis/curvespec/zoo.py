"""Built-in closed-form fixtures.

Every fixture is stored as curve-file text, so it can be printed, edited and
re-parsed like any user curve. Seeded fixtures are written as
``name(seed)``, e.g. ``random_poly_r4(3)``.
"""

import re

import numpy as np

from ..errors import UnknownBuiltin
from .model import parse_curve

_SOURCES = {
    "unit_circle": """
        label "unit circle";
        x = cos(t); y = sin(t);
        domain [0, 2*pi]; periodic;
    """,
    "ellipse_2_1": """
        label "ellipse with semi-axes 2 and 1";
        x = 2*cos(t); y = sin(t);
        domain [0, 2*pi]; periodic;
    """,
    "helix": """
        label "circular helix";
        x = cos(t); y = sin(t); z = t;
        domain [0, 2*pi];
    """,
    "twisted_cubic": """
        label "twisted cubic";
        x = t; y = t^2; z = t^3;
        domain [-1, 1];
    """,
    "sphere_curve_r3": """
        label "curve on the unit sphere";
        x = cos(0.5*sin(2*t))*cos(t);
        y = cos(0.5*sin(2*t))*sin(t);
        z = sin(0.5*sin(2*t));
        domain [0, 2*pi]; periodic;
    """,
    "sphere_curve_r4": """
        label "constant-curvature curve on the sphere of radius sqrt(2) in R^4";
        x = cos(t); y = sin(t); z = cos(2*t); w = sin(2*t);
        domain [0, 2*pi]; periodic;
    """,
    "trefoil_like": """
        label "trefoil knot";
        x = sin(t) + 2*sin(2*t);
        y = cos(t) - 2*cos(2*t);
        z = -sin(3*t);
        domain [0, 2*pi]; periodic;
    """,
}

_SEEDED = ("random_poly_r4", "random_closed_r3")

BUILTIN_NAMES = tuple(_SOURCES) + _SEEDED

PROBE_POINTS = 400
POLY_DEGREE = 6
TRIG_DEGREE = 3


def _probe_good(curve):
    from ..frenet import is_good

    m = curve.dimension - 1
    lo, hi = curve.domain
    for th in np.linspace(lo, hi, PROBE_POINTS):
        if not is_good(curve.eval_jet(th, m + 1), m).is_good:
            return False
    return True


def _poly_text(coeffs):
    terms = [repr(float(coeffs[0]))]
    for k, a in enumerate(coeffs[1:], start=1):
        terms.append(f"{float(a)!r}*t^{k}" if k > 1 else f"{float(a)!r}*t")
    return " + ".join(terms)


def _random_poly_r4(seed):
    rng = np.random.default_rng(seed)
    while True:
        coeffs = rng.standard_normal((4, POLY_DEGREE + 1))
        body = "\n".join(f"{n} = {_poly_text(c)};" for n, c in zip("xyzw", coeffs))
        curve = parse_curve(f'label "random polynomial curve, seed {seed}";\n{body}\ndomain [-1, 1];')
        if _probe_good(curve):
            return curve


def _random_closed_r3(seed):
    rng = np.random.default_rng(seed)
    k = np.arange(1, TRIG_DEGREE + 1)
    while True:
        a = rng.standard_normal((3, TRIG_DEGREE)) / k
        b = rng.standard_normal((3, TRIG_DEGREE)) / k
        rows = []
        for n, ai, bi in zip("xyz", a, b):
            terms = [f"{float(ai[j])!r}*cos({j + 1}*t) + {float(bi[j])!r}*sin({j + 1}*t)"
                     for j in range(TRIG_DEGREE)]
            rows.append(f"{n} = " + " + ".join(terms) + ";")
        curve = parse_curve(f'label "random closed curve, seed {seed}";\n' + "\n".join(rows)
                            + "\ndomain [0, 2*pi]; periodic;")
        if _probe_good(curve):
            return curve


def builtin(name, seed=None):
    """Return a built-in :class:`CurveModel` by name.

    ``random_poly_r4`` and ``random_closed_r3`` take a seed, either as the
    ``seed`` argument or inline: ``builtin("random_poly_r4(2)")``.
    """
    m = re.fullmatch(r"\s*(\w+)\s*(?:\(\s*(\d+)\s*\))?\s*", name)
    if m is None:
        raise UnknownBuiltin(name)
    base, inline = m.group(1), m.group(2)
    if inline is not None:
        seed = int(inline)
    if base in _SOURCES:
        if inline is not None:
            raise UnknownBuiltin(f"{base} takes no seed")
        return parse_curve(_SOURCES[base])
    if base == "random_poly_r4":
        return _random_poly_r4(0 if seed is None else seed)
    if base == "random_closed_r3":
        return _random_closed_r3(0 if seed is None else seed)
    raise UnknownBuiltin(f"unknown builtin curve {name!r}; known: {', '.join(BUILTIN_NAMES)}")
