"""The CurveModel value type and its evaluation to jets."""

from dataclasses import dataclass, field
import math

import numpy as np

from .. import jets
from ..errors import PeriodicityError
from ..jets import Jet, VecJet
from . import parser
from .parser import BinOp, Num, Param, evaluate, format_expr

# Periodic endpoint agreement, relative to the jet coefficient size.
PERIODIC_TOL = 1e-6
PERIODIC_CHECK_ORDER = 3


class _JetOps:
    @staticmethod
    def sin(a):
        return Jet(jets.sin(a.coeffs))

    @staticmethod
    def cos(a):
        return Jet(jets.cos(a.coeffs))

    @staticmethod
    def tan(a):
        return Jet(jets.tan(a.coeffs))

    @staticmethod
    def exp(a):
        return Jet(jets.exp(a.coeffs))

    @staticmethod
    def log(a):
        return Jet(jets.log(a.coeffs))

    @staticmethod
    def sqrt(a):
        return Jet(jets.sqrt(a.coeffs))

    @staticmethod
    def atan(a):
        return Jet(jets.atan(a.coeffs))

    @staticmethod
    def pow(base, exponent):
        if not isinstance(base, Jet):
            return exponent.__rpow__(base)
        return base ** exponent


@dataclass(frozen=True)
class CurveModel:
    """A parametrised curve t -> (x1(t), ..., xk(t)) on a closed interval."""

    components: tuple
    domain: tuple
    periodic: bool = False
    label: str = ""
    names: tuple = field(default=None)

    def __post_init__(self):
        if self.names is None:
            k = len(self.components)
            names = tuple("xyzw"[:k]) if k <= 4 else tuple(f"x{i + 1}" for i in range(k))
            object.__setattr__(self, "names", names)
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))

    @property
    def dimension(self):
        return len(self.components)

    @property
    def m(self):
        """Number of normal vectors in the Frenet frame (dimension - 1)."""
        return len(self.components) - 1

    def eval_jet(self, theta0, order):
        """Taylor expansion of every component about ``theta0``."""
        lo, hi = self.domain
        slack = 1e-9 * (hi - lo)
        if not lo - slack <= theta0 <= hi + slack:
            raise ValueError(f"theta0={theta0} outside domain [{lo}, {hi}]")
        t = Jet.variable(theta0, order)
        rows = []
        for expr in self.components:
            v = evaluate(expr, t, _JetOps)
            if not isinstance(v, Jet):
                v = Jet.constant(v, order)
            rows.append(v.coeffs)
        return VecJet(np.array(rows))

    def __call__(self, theta):
        """Points on the curve, shape ``(len(theta), dim)`` (or ``(dim,)``)."""
        theta = np.asarray(theta, dtype=float)
        cols = [np.broadcast_to(parser.evaluate_float(e, theta), theta.shape) for e in self.components]
        return np.stack(cols, axis=-1)

    def source(self):
        lines = [f"dim {self.dimension};"]
        lines += [f"{n} = {format_expr(e)};" for n, e in zip(self.names, self.components)]
        lines.append(f"domain [{self.domain[0]!r}, {self.domain[1]!r}];")
        if self.periodic:
            lines.append("periodic;")
        if self.label:
            lines.append(f'label "{self.label}";')
        return "\n".join(lines) + "\n"

    def check_periodic(self):
        lo, hi = self.domain
        a = self.eval_jet(lo, PERIODIC_CHECK_ORDER).coeffs
        b = self.eval_jet(hi, PERIODIC_CHECK_ORDER).coeffs
        scale = max(1.0, float(np.max(np.abs(a))))
        gap = float(np.max(np.abs(a - b)))
        if gap > PERIODIC_TOL * scale:
            raise PeriodicityError(f"curve is declared periodic but endpoint jets differ by {gap:.3g}")

    # derived curves

    def reparametrized(self, scale, shift=0.0):
        """The curve u -> gamma(scale*u + shift) on the matching domain."""
        arg = BinOp("+", BinOp("*", Num(float(scale)), Param()), Num(float(shift)))
        comps = tuple(parser.substitute(e, arg) for e in self.components)
        ends = sorted(((self.domain[0] - shift) / scale, (self.domain[1] - shift) / scale))
        return CurveModel(comps, tuple(ends), self.periodic, self.label, self.names)

    def transformed(self, rotation, translation):
        """The image of the curve under x -> rotation @ x + translation."""
        R = np.asarray(rotation, dtype=float)
        b = np.asarray(translation, dtype=float)
        comps = []
        for i in range(self.dimension):
            node = Num(float(b[i]))
            for j, e in enumerate(self.components):
                if R[i, j] != 0.0:
                    node = BinOp("+", node, BinOp("*", Num(float(R[i, j])), e))
            comps.append(node)
        return CurveModel(tuple(comps), self.domain, self.periodic, self.label, self.names)


def parse_curve(source):
    """Build a :class:`CurveModel` from curve-file text."""
    names, exprs, domain, periodic, label = parser.parse_statements(source)
    model = CurveModel(exprs, domain, periodic, label, names)
    if periodic:
        model.check_periodic()
    return model


def load_curve(path):
    with open(path, encoding="utf-8") as fh:
        return parse_curve(fh.read())


def eval_jet(curve, theta0, order):
    return curve.eval_jet(theta0, order)


def sample_grid(curve, samples):
    """Uniform parameter grid; the right end is dropped for periodic curves."""
    lo, hi = curve.domain
    return np.linspace(lo, hi, samples, endpoint=not curve.periodic)


TAU = 2 * math.pi
