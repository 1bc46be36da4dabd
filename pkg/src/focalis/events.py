"""
Distinguished points along a curve
==================================

Vertices, pseudo-vertices, flattenings, zeros of intermediate focal
curvatures and critical points of the radii R_l of the osculating spheres
are located as zeros of smooth scalar channels. The raw quantities c_m and
c_m' + c_{m-1} k_m have poles at flattenings, so every channel is first
multiplied by a power of k_m that clears the pole:

* flattening: ``k_m``
* pseudo-vertex: ``P = k_m c_m = c_{m-1}' + c_{m-2} k_{m-1}``
* vertex: ``V = k_m^2 (c_m' + c_{m-1} k_m) = k_m P' - k_m' P + c_{m-1} k_m^3``
* zero of c_l (1 < l < m): ``c_l``
* critical R_l: ``c_l c_{l+1} k_{l+1}`` for l < m - 1, ``c_{m-1} P`` for
  l = m - 1 and ``P V`` for l = m. These equal R_l R_l' times a positive
  factor (l < m - 1) or a power of k_m (l >= m - 1), so they vanish exactly
  where R_l' does.

The focal curvatures c_1..c_{m-1} come from the curvature recursion, which
only divides by k_1..k_{m-1}. With the convention c_0 = 0, c_0' = 1 the
formulas cover m = 1, where P = 1 and V = -k_1'.

Zeros are bracketed by sign changes on a grid, refined by bisection and
deduplicated. A channel whose grid maximum is below ``ZERO_TOL`` times its
natural scale is flagged as identically zero instead of producing events.
"""

from dataclasses import dataclass, field, replace
import warnings

import numpy as np

from . import jets
from .curvespec.model import sample_grid
from .errors import FocalisError, GridTooCoarse
from .focal import focal_curvatures_recursive
from .frenet import curve_frenet

MIN_SAMPLES = 64
BISECT_TOL = 1e-10
DEDUP_TOL = 1e-8
ZERO_TOL = 1e-9
DOUBLE_ROOT_TOL = 1e-8
# half-width of the probes around factor zeros, in grid cells
PROBE_FRACTION = 1e-3

VERTEX = "vertex"
PSEUDO_VERTEX = "pseudo_vertex"
FLATTENING = "flattening"
FOCAL_ZERO = "focal_zero"
CRITICAL_RADIUS = "critical_radius"


@dataclass(frozen=True)
class Event:
    """A located zero. ``index`` is l for focal_zero and critical_radius events."""

    kind: str
    theta: float
    residual: float
    refined: bool
    index: int = None
    double: bool = False

    @property
    def channel(self):
        return _channel_name(self.kind, self.index)

    def to_dict(self):
        d = {"kind": self.kind, "theta": self.theta, "residual": self.residual,
             "refined": self.refined}
        if self.index is not None:
            d["l"] = self.index
        if self.double:
            d["double"] = True
        return d


@dataclass(frozen=True)
class Annotation:
    """Critical radii implied by a focal-curvature zero (or an identically zero channel)."""

    source: str
    theta: float
    implies: tuple
    confirmed: tuple = ()
    degenerate: bool = False

    def to_dict(self):
        return {"source": self.source, "theta": self.theta, "implies": list(self.implies),
                "confirmed": list(self.confirmed), "degenerate": self.degenerate}


@dataclass
class EventReport:
    events: list
    counts: dict
    identically_zero: dict
    m: int
    periodic: bool
    samples: int
    warnings: list = field(default_factory=list)
    failed_samples: list = field(default_factory=list)
    annotations: list = None

    def of_kind(self, kind, index=None):
        return [e for e in self.events if e.kind == kind and (index is None or e.index == index)]

    def thetas(self, kind, index=None):
        return np.array([e.theta for e in self.of_kind(kind, index)])

    def flagged(self, kind, index=None):
        return self.identically_zero.get(_channel_name(kind, index), False)

    def vertex_bounds(self):
        """The inequalities V + P >= 2 and V + P >= F for closed curves.

        None when they do not apply: open curves, or a count replaced by a flag.
        """
        V, P, F = self.counts["V"], self.counts["P"], self.counts["F"]
        if not self.periodic or V is None or P is None or F is None:
            return None
        return {"V+P>=2": V + P >= 2, "V+P>=F": V + P >= F}

    def to_dict(self):
        d = {
            "m": self.m,
            "periodic": self.periodic,
            "samples": self.samples,
            "counts": dict(self.counts),
            "identically_zero": {k: v for k, v in self.identically_zero.items() if v},
            "events": [e.to_dict() for e in self.events],
            "warnings": list(self.warnings),
            "vertex_bounds": self.vertex_bounds(),
        }
        if self.failed_samples:
            d["failed_samples"] = list(self.failed_samples)
        if self.annotations is not None:
            d["annotations"] = [a.to_dict() for a in self.annotations]
        return d


def _channel_name(kind, index=None):
    return kind if index is None else f"{kind}({index})"


def channel_list(m):
    """(kind, index, length power) of every channel for a curve in R^(m+1)."""
    out = [(FLATTENING, None, -1), (VERTEX, None, -2)]
    if m >= 2:
        out.append((PSEUDO_VERTEX, None, 0))
    out += [(FOCAL_ZERO, l, 1) for l in range(2, m)]
    out += [(CRITICAL_RADIUS, l, 1) for l in range(1, m)]
    out.append((CRITICAL_RADIUS, m, -2))
    return out


def channel_jets(curve, theta):
    """Value and arc-length derivative of every channel at ``theta``.

    Returns ``(channels, k1)`` where ``channels`` maps the channel name to a
    length-2 array.
    """
    m = curve.dimension - 1
    _, fr = curve_frenet(curve, theta, order=m + 1)
    kappa = fr.curvature_jets
    cs = focal_curvatures_recursive(fr, as_jets=True, upto=m - 1) if m >= 2 else []
    c = [None] + list(cs)
    zero = np.zeros(3)

    def cc(i):
        return zero if i == 0 else c[i]

    km = kappa[m - 1][:3]
    if m == 1:
        P = np.array([1.0, 0.0, 0.0])
    else:
        P = jets.diff(c[m - 1])[:3] + jets.mul(cc(m - 2)[:3], kappa[m - 2][:3])
    P2, km2 = P[:2], km[:2]
    V = (jets.mul(km2, jets.diff(P)[:2]) - jets.mul(jets.diff(km)[:2], P2)
         + jets.mul(cc(m - 1)[:2], jets.power(km2, 3)))
    out = {FLATTENING: km2, VERTEX: V}
    if m >= 2:
        out[PSEUDO_VERTEX] = P2
    for l in range(2, m):
        out[_channel_name(FOCAL_ZERO, l)] = c[l][:2]
    for l in range(1, m):
        if l + 1 < m:
            f = jets.mul(jets.mul(c[l][:2], c[l + 1][:2]), kappa[l][:2])
        else:
            f = jets.mul(c[l][:2], P2)
        out[_channel_name(CRITICAL_RADIUS, l)] = f
    out[_channel_name(CRITICAL_RADIUS, m)] = jets.mul(P2, V)
    return out, float(kappa[0, 0])


class _Sampler:
    """Channel evaluation with periodic wrap-around of the parameter."""

    def __init__(self, curve):
        self.curve = curve
        self.lo, self.hi = curve.domain
        self.period = self.hi - self.lo

    def wrap(self, theta):
        if self.curve.periodic:
            return self.lo + (theta - self.lo) % self.period
        return theta

    def __call__(self, theta):
        return channel_jets(self.curve, self.wrap(theta))[0]


def _bisect(sampler, name, a, b, fa, component=0):
    """Shrink [a, b] around a sign change of channel ``name`` to BISECT_TOL."""
    while b - a > BISECT_TOL:
        mid = 0.5 * (a + b)
        fm = sampler(mid)[name][component]
        if fm == 0.0:
            return mid
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def _brackets(theta, values, periodic, period):
    """Grid zeros and sign-change brackets of ``values`` (NaN samples skipped)."""
    n = theta.size
    exact, brackets = [], []
    pairs = n if periodic else n - 1
    for i in range(pairs):
        j = (i + 1) % n
        fa, fb = values[i], values[j]
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        a = theta[i]
        b = theta[j] + (period if j == 0 else 0.0)
        if fa == 0.0:
            exact.append(a)
        elif fa * fb < 0:
            brackets.append((a, b, fa))
    if not periodic and np.isfinite(values[-1]) and values[-1] == 0.0:
        exact.append(theta[-1])
    return exact, brackets


def factor_channels(kind, index, m):
    """Channels whose zeros are zeros of the product channel ``kind(index)``."""
    if kind != CRITICAL_RADIUS:
        return ()
    if index == m:
        return (PSEUDO_VERTEX, VERTEX) if m >= 2 else (VERTEX,)
    out = (_channel_name(FOCAL_ZERO, index),) if index >= 2 else ()
    return out + (PSEUDO_VERTEX if index + 1 == m else _channel_name(FOCAL_ZERO, index + 1),)


def _probe_brackets(sampler, name, seeds, h):
    """Sign-change brackets [t - h, t + h] around each seed.

    Two zeros of a product inside one grid cell cancel in the grid signs;
    probing next to the zeros of the factors recovers them.
    """
    lo, hi = sampler.lo, sampler.hi
    out = []
    for t in seeds:
        a, b = t - h, t + h
        if not sampler.curve.periodic:
            a, b = max(a, lo), min(b, hi)
        fa, fb = sampler(a)[name][0], sampler(b)[name][0]
        if fa * fb < 0:
            out.append((a, b, fa))
    return out


def _double_root_cells(theta, v, periodic, period, cell):
    """Brackets of f' zeros in cells where f keeps its sign but could reach zero."""
    _, brackets = _brackets(theta, v[:, 1], periodic, period)
    index = {float(t): i for i, t in enumerate(theta)}
    out = []
    for a, b, fa in brackets:
        i = index[float(a)]
        j = (i + 1) % theta.size
        f0, f1 = v[i, 0], v[j, 0]
        if f0 * f1 <= 0:
            continue
        if min(abs(f0), abs(f1)) <= 2.0 * cell * max(abs(v[i, 1]), abs(v[j, 1])):
            out.append((a, b, fa))
    return out


def _dedupe(thetas, periodic, period):
    thetas = sorted(thetas, key=lambda e: e[0])
    out = []
    for item in thetas:
        if out and item[0] - out[-1][0] < DEDUP_TOL:
            continue
        out.append(item)
    if periodic and len(out) > 1 and out[0][0] + period - out[-1][0] < DEDUP_TOL:
        out.pop()
    return out


def scan_events(curve, samples=512, double_roots=True):
    """Locate every event of ``curve`` over its domain.

    Parameters
    ----------
    curve : CurveModel
    samples : int
        Grid size (at least 64). Periodic curves use a grid without the
        duplicated endpoint and also check the wrap-around cell.
    double_roots : bool
        Also bracket zeros of each channel's derivative and keep those at
        which the channel itself is negligible (tangential zeros).

    Returns
    -------
    EventReport
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}")
    m = curve.dimension - 1
    theta = sample_grid(curve, samples)
    sampler = _Sampler(curve)
    chans = channel_list(m)
    names = [_channel_name(k, i) for k, i, _ in chans]
    vals = np.full((len(names), theta.size, 2), np.nan)
    k1 = np.full(theta.size, np.nan)
    failed = []
    for j, th in enumerate(theta):
        try:
            out, k1[j] = channel_jets(curve, th)
        except FocalisError:
            failed.append(float(th))
            continue
        for i, name in enumerate(names):
            vals[i, j] = out[name]
    if not np.any(np.isfinite(k1)):
        raise FocalisError("no grid sample could be evaluated")
    length = 1.0 / float(np.nanmean(np.abs(k1)))
    period = sampler.period
    cell = period / (theta.size if curve.periodic else theta.size - 1)

    events, flags, notes = [], {}, []
    for (kind, index, power), name, v in zip(chans, names, vals):
        scale = length ** power
        f = v[:, 0]
        if np.nanmax(np.abs(f)) < ZERO_TOL * scale:
            flags[name] = True
            continue
        flags[name] = False
        found = []
        exact, brackets = _brackets(theta, f, curve.periodic, period)
        for a in exact:
            found.append((a, False))
        for a, b, fa in brackets:
            found.append((_bisect(sampler, name, a, b, fa), False))
        if double_roots and np.nanmax(np.abs(v[:, 1])) >= ZERO_TOL * scale / length:
            for a, b, fa in _double_root_cells(theta, v, curve.periodic, period, cell):
                t = _bisect(sampler, name, a, b, fa, component=1)
                if abs(sampler(t)[name][0]) < DOUBLE_ROOT_TOL * scale:
                    found.append((t, True))
        seeds = sorted(e.theta for e in events if e.channel in factor_channels(kind, index, m))
        for a, b, fa in _probe_brackets(sampler, name, seeds, PROBE_FRACTION * cell):
            found.append((_bisect(sampler, name, a, b, fa), False))
        if np.any(np.diff(seeds) < cell):
            msg = f"{name}: factor zeros share a grid cell; increase samples"
            notes.append(msg)
            warnings.warn(msg, GridTooCoarse, stacklevel=2)
        found = [(sampler.wrap(t), dbl) for t, dbl in found]
        found = _dedupe(found, curve.periodic, period)
        thetas = [t for t, _ in found]
        gaps = np.diff(thetas)
        if curve.periodic and len(thetas) > 1:
            gaps = np.append(gaps, thetas[0] + period - thetas[-1])
        if np.any(gaps < 2 * cell):
            msg = f"{name}: events closer than two grid cells; increase samples"
            notes.append(msg)
            warnings.warn(msg, GridTooCoarse, stacklevel=2)
        for t, dbl in found:
            events.append(Event(kind, float(t), float(sampler(t)[name][0]), True, index, dbl))

    events.sort(key=lambda e: (e.theta, e.kind, e.index or 0))

    def count(kind):
        if flags.get(kind, False):
            return None
        return sum(1 for e in events if e.kind == kind)

    counts = {"V": count(VERTEX), "P": count(PSEUDO_VERTEX) if m >= 2 else 0,
              "F": count(FLATTENING)}
    return EventReport(events, counts, flags, m, curve.periodic, int(theta.size), notes, failed)


def _implied(kind, index, m):
    if kind == PSEUDO_VERTEX:
        return (m - 1, m) if m >= 2 else (m,)
    if kind == FOCAL_ZERO:
        return (index - 1, index)
    if kind == VERTEX:
        return (m,)
    return ()


def classify_critical_radii(report, tol=1e-6):
    """Annotate each focal-curvature zero with the critical radii it implies.

    A zero of c_l makes R_{l-1} and R_l critical, a pseudo-vertex (c_m = 0)
    makes R_{m-1} and R_m critical and a vertex makes R_m critical. Each
    implied radius is marked confirmed when the scan located a
    critical_radius(l) event within ``tol``. Identically vanishing channels
    produce degenerate annotations instead. Returns a new report.
    """
    m = report.m
    crit = {l: report.thetas(CRITICAL_RADIUS, l) for l in range(1, m + 1)}
    notes = []
    for e in report.events:
        implies = tuple(l for l in _implied(e.kind, e.index, m) if l >= 1)
        if not implies:
            continue
        confirmed = tuple(bool(crit[l].size and np.min(np.abs(crit[l] - e.theta)) < tol)
                          for l in implies)
        notes.append(Annotation(e.channel, e.theta, implies, confirmed))
    for name, flag in report.identically_zero.items():
        if not flag:
            continue
        if name == PSEUDO_VERTEX:
            implies = (m - 1, m)
        elif name.startswith(FOCAL_ZERO):
            l = int(name[len(FOCAL_ZERO) + 1:-1])
            implies = (l - 1, l)
        elif name.startswith(CRITICAL_RADIUS):
            implies = (int(name[len(CRITICAL_RADIUS) + 1:-1]),)
        else:
            continue
        notes.append(Annotation(name, float("nan"), tuple(l for l in implies if l >= 1),
                                degenerate=True))
    return replace(report, annotations=notes)
