"""
Residual suites
===============

Each ``check_*`` function evaluates one identity of the focal apparatus at
every sample of a grid and returns a :class:`ResidualReport`. Residuals are
stored raw together with a per-sample scale (the summed magnitude of the
terms entering the identity, floored by the natural unit of the quantity),
so ``max_rel`` is a dimensionless figure comparable across curves.

Samples where an identity is undefined (flattenings, vertices, vanishing
denominators) are skipped and listed with the reason.
"""

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .curvespec.model import sample_grid
from .errors import (
    FlatteningPoint,
    FocalisError,
    IllConditionedSystem,
    NotSelfCongruent,
    SingularParametrization,
    VertexPoint,
)
from .events import (
    CRITICAL_RADIUS,
    FLATTENING,
    FOCAL_ZERO,
    PROBE_FRACTION,
    PSEUDO_VERTEX,
    VERTEX,
    _bisect,
    _brackets,
    _dedupe,
    _probe_brackets,
    _Sampler,
    scan_events,
)
from .focal import focal_curvatures_recursive, focal_data, focal_planes, focal_point
from .frenet import arc_normalize, curve_frenet, frenet_jets
from .jets import VecJet

SKIP_TOL = 1e-6
VERTEX_TOL = 1e-9
SPHERICAL_TOL = 1e-7
CONSTANT_TOL = 1e-7


@dataclass
class ResidualReport:
    """Per-sample residuals of one identity.

    ``residuals`` and ``scales`` have shape ``(n_samples, n_rows)``;
    ``max_rel`` is the largest ``|residual| / scale``.
    """

    theorem_id: str
    theta: np.ndarray
    residuals: np.ndarray
    scales: np.ndarray
    skipped: list = field(default_factory=list)
    error: Exception = None
    extra: dict = field(default_factory=dict)

    @property
    def applicable(self):
        return self.error is None

    @property
    def max_abs(self):
        r = self.residuals
        return float(np.max(np.abs(r))) if r.size else 0.0

    @property
    def relative(self):
        return np.abs(self.residuals) / self.scales

    @property
    def max_rel(self):
        return float(np.max(self.relative)) if self.residuals.size else 0.0

    @property
    def scale(self):
        return float(np.median(self.scales)) if self.scales.size else 1.0

    def summary(self):
        if self.error is not None:
            return f"{self.theorem_id}: not applicable ({self.error})"
        return (f"{self.theorem_id}: {self.theta.size} samples, max_abs={self.max_abs:.3g}, "
                f"max_rel={self.max_rel:.3g}, skipped={len(self.skipped)}")

    def to_dict(self):
        d = {"theorem": self.theorem_id, "samples": int(self.theta.size),
             "max_abs": self.max_abs, "max_rel": self.max_rel, "scale": self.scale,
             "skipped": [[float(t), why] for t, why in self.skipped]}
        if self.error is not None:
            d["not_applicable"] = str(self.error)
        for k, v in self.extra.items():
            d[k] = v.tolist() if isinstance(v, np.ndarray) else v
        return d


def _grid(curve, grid):
    if np.ndim(grid) == 0:
        return sample_grid(curve, int(grid))
    return np.asarray(grid, dtype=float)


def _report(theorem_id, theta, rows, scales, skipped, **extra):
    k = len(rows[0]) if rows else 0
    res = np.array(rows, dtype=float).reshape(len(rows), k)
    sc = np.array(scales, dtype=float).reshape(len(rows), k)
    return ResidualReport(theorem_id, np.array(theta, float), res, sc, skipped, extra=extra)


def _focal_samples(curve, grid, order=1):
    """Yield (theta, arc, frenet, focal) at every grid point, skipping failures."""
    skipped = []
    out = []
    for th in _grid(curve, grid):
        try:
            out.append((float(th),) + focal_point(curve, th, order=order))
        except FlatteningPoint:
            skipped.append((float(th), "flattening"))
        except IllConditionedSystem:
            skipped.append((float(th), "ill-conditioned centre system"))
        except FocalisError as exc:
            skipped.append((float(th), type(exc).__name__))
    return out, skipped


# ---------------------------------------------------------------------------
# scalar Frenet equations and the curvature formula

def check_scalar_frenet(curve, grid=100, corrected=None):
    """Residuals of ``(1, c_1', ..., c_m') = K (0, c_1, ..., c_m)``.

    Row i reads ``c_i' = -k_i c_{i-1} + k_{i+1} c_{i+1}``. The last row only
    holds on spherical curves; with ``corrected`` its left side becomes
    ``c_m' - (R_m^2)' / (2 c_m)``, which holds on every curve away from
    c_m = 0. ``corrected=None`` applies the correction unless the curve
    passes :func:`check_spherical`.
    """
    m = curve.dimension - 1
    samples, skipped = _focal_samples(curve, grid)
    if corrected is None:
        corrected = not _spherical_on(samples)
    theta, rows, scales = [], [], []
    for th, arc, fr, fd in samples:
        c = np.concatenate([[0.0], fd.focal_curvatures, [0.0]])
        dc = fd.curvature_jets[:, 1]
        k = np.concatenate([[0.0], fr.curvatures, [0.0]])
        lhs = np.concatenate([[1.0], dc])
        if corrected:
            if abs(c[m]) < SKIP_TOL * fd.radii[-1]:
                skipped.append((th, "c_m = 0"))
                continue
            lhs[m] -= fd.radius_sq_jet[1] / (2.0 * c[m])
        rhs = np.empty(m + 1)
        rhs[0] = k[1] * c[1]
        terms = np.empty(m + 1)
        terms[0] = abs(rhs[0])
        for i in range(1, m + 1):
            a, b = -k[i] * c[i - 1], k[i + 1] * c[i + 1]
            rhs[i] = a + b
            terms[i] = abs(a) + abs(b)
        theta.append(th)
        rows.append(lhs - rhs)
        scales.append(np.maximum(1.0, np.abs(lhs) + terms))
    name = "scalar_frenet_corrected" if corrected else "scalar_frenet"
    return _report(name, theta, rows, scales, skipped, corrected=bool(corrected))


def curvature_formula(c, dc, i):
    """k_i from focal curvatures: sum_{j<i} c_j c_j' / (c_{i-1} c_i), 1-based i >= 2."""
    return float(np.dot(c[:i - 1], dc[:i - 1]) / (c[i - 2] * c[i - 1]))


def check_curvature_formula(curve, grid=100, recursive=False):
    """Relative residual of every k_i (i = 2..m) against the focal-curvature formula.

    The focal curvatures come from the centre system, or from the curvature
    recursion when ``recursive`` is set (a closure check). Samples with
    ``|c_{i-1} c_i| < SKIP_TOL R_m^2`` are skipped for that i; the row is
    then reported as zero with unit scale.
    """
    m = curve.dimension - 1
    samples, skipped = _focal_samples(curve, grid, order=max(1, m - 1))
    theta, rows, scales = [], [], []
    skipped_rows = 0
    for th, arc, fr, fd in samples:
        if recursive:
            cj = focal_curvatures_recursive(fr, as_jets=True)
            c = np.array([x[0] for x in cj])
            dc = np.array([x[1] if x.size > 1 else np.nan for x in cj])
        else:
            c, dc = fd.focal_curvatures, fd.curvature_jets[:, 1]
        row, sc = [], []
        for i in range(2, m + 1):
            if abs(c[i - 2] * c[i - 1]) < SKIP_TOL * fd.radii[-1] ** 2 or not np.isfinite(dc[i - 2]):
                skipped.append((th, f"c_{i - 1} c_{i} = 0"))
                skipped_rows += 1
                row.append(0.0)
                sc.append(1.0)
                continue
            k = fr.curvatures[i - 1]
            row.append(k - curvature_formula(c, dc, i))
            sc.append(abs(k))
        if m >= 2:
            theta.append(th)
            rows.append(row)
            scales.append(sc)
    return _report("curvature_formula", theta, rows, scales, skipped, skipped_rows=skipped_rows)


# ---------------------------------------------------------------------------
# vertices, sphericity, the radius derivative

def _spherical_on(samples):
    rel = [abs(fd.vertex_residual) / _residual_scale(fr, fd) for _, _, fr, fd in samples]
    return bool(rel) and max(rel) < SPHERICAL_TOL


def _residual_scale(fr, fd):
    m = fr.m
    prev = fd.focal_curvatures[m - 2] if m >= 2 else 0.0
    return max(1.0, abs(fd.curvature_jets[m - 1, 1]) + abs(prev * fr.curvatures[m - 1]))


def fit_sphere(points):
    """Least-squares sphere through ``points``: returns (center, radius, max |dist - r| / r)."""
    X = np.asarray(points, dtype=float)
    A = np.hstack([2.0 * X, np.ones((X.shape[0], 1))])
    b = np.sum(X * X, axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    q = sol[:-1]
    r = float(np.sqrt(max(sol[-1] + q @ q, 0.0)))
    dist = np.linalg.norm(X - q, axis=1)
    rel = float(np.max(np.abs(dist - r)) / r) if r > 0 else np.inf
    return q, r, rel


@dataclass
class SphericalReport:
    is_spherical: bool
    report: ResidualReport
    torsion_form: ResidualReport = None
    fit_center: np.ndarray = None
    fit_radius: float = None
    fit_residual: float = None
    radius_sq_derivative: np.ndarray = None
    radius: np.ndarray = None

    @property
    def constant_radius(self):
        """(R_m^2)' negligible (below 1e-9 R_m) at every sample."""
        d = self.radius_sq_derivative
        return bool(d.size) and bool(np.all(np.abs(d) < 1e-9 * self.radius))

    @property
    def min_rel(self):
        return float(np.min(self.report.relative)) if self.report.residuals.size else 0.0

    def to_dict(self):
        d = {"is_spherical": self.is_spherical, "residual": self.report.to_dict(),
             "min_rel": self.min_rel,
             "fit": {"center": self.fit_center.tolist(), "radius": self.fit_radius,
                     "max_rel_deviation": self.fit_residual},
             "max_abs_radius_sq_derivative": float(np.max(np.abs(self.radius_sq_derivative))),
             "constant_radius": self.constant_radius}
        if self.torsion_form is not None:
            d["torsion_form"] = self.torsion_form.to_dict()
        return d


def check_spherical(curve, grid=100):
    """Vertex-residual test for lying on a hypersphere.

    The residual ``c_m' + c_{m-1} k_m`` is dimensionless; it is normalized
    per sample by the magnitude of its two terms (floored at 1). For m = 2
    the residual is recomputed from the curvatures alone as
    ``(R_1'/tau)' + R_1 tau`` with ``R_1 = 1/k_1`` and ``tau = k_2``;
    ``torsion_form`` holds its difference from the general form. A least-squares
    sphere through the sample points gives an independent cross-check.
    """
    m = curve.dimension - 1
    samples, skipped = _focal_samples(curve, grid, order=2)
    theta, rows, scales, ex_rows, ex_scales, drsq, rad = [], [], [], [], [], [], []
    for th, arc, fr, fd in samples:
        r = fd.vertex_residual
        theta.append(th)
        rows.append([r])
        scales.append([_residual_scale(fr, fd)])
        drsq.append(fd.radius_sq_jet[1])
        rad.append(fd.radii[-1])
        if m == 2:
            k1, tau = fr.curvature_jets[0, :3], fr.curvature_jets[1, :3]
            R1 = jets.recip(k1)
            inner = jets.div(jets.diff(R1), tau[:2])
            ex = jets.diff(inner)[0] + R1[0] * tau[0]
            ex_rows.append([ex - r])
            ex_scales.append([max(1.0, abs(ex) + abs(r))])
    report = _report("spherical", theta, rows, scales, skipped)
    is_sph = bool(report.residuals.size) and report.max_rel < SPHERICAL_TOL
    torsion_form = None
    if m == 2:
        torsion_form = _report("spherical_torsion_form", theta, ex_rows, ex_scales, list(skipped))
    pts = curve(_grid(curve, grid))
    q, rad_fit, dev = fit_sphere(pts)
    return SphericalReport(is_sph, report, torsion_form, q, rad_fit, dev, np.array(drsq), np.array(rad))


def check_radius_derivative(curve, grid=100):
    """``(R_m^2)' = 2 c_m (c_m' + c_{m-1} k_m)``, with R_m^2 = |C - gamma|^2 taken directly."""
    samples, skipped = _focal_samples(curve, grid)
    theta, rows, scales = [], [], []
    for th, arc, fr, fd in samples:
        lhs = fd.radius_sq_jet[1]
        rhs = 2.0 * fd.focal_curvatures[-1] * fd.vertex_residual
        theta.append(th)
        rows.append([lhs - rhs])
        scales.append([max(abs(lhs) + abs(rhs), fd.radii[-1])])
    return _report("radius_derivative", theta, rows, scales, skipped)


def check_recursive(curve, grid=100):
    """Focal curvatures from the recursion against the centre-system projections.

    Row i is ``c_i(recursive) - c_i(projection)`` scaled by R_i.
    """
    samples, skipped = _focal_samples(curve, grid)
    theta, rows, scales = [], [], []
    for th, arc, fr, fd in samples:
        rec = focal_curvatures_recursive(fr)
        theta.append(th)
        rows.append(rec - fd.focal_curvatures)
        scales.append(fd.radii)
    return _report("recursive_focal_curvatures", theta, rows, scales, skipped)


# ---------------------------------------------------------------------------
# focal curve frame

@dataclass
class FocalFrameData:
    """Frenet apparatus of the focal curve at C(theta) next to that of the curve."""

    T: np.ndarray
    N: np.ndarray
    K: np.ndarray
    eps: int
    delta: np.ndarray
    t_sign: int
    residual: float
    curve_frame: np.ndarray
    curve_curvatures: np.ndarray
    center: np.ndarray

    @property
    def frame(self):
        return np.vstack([self.T, self.N])


def _sign(x):
    return 1 if x >= 0 else -1


def focal_frenet(curve, theta):
    """Frenet frame and curvatures of the focal curve at the image of ``theta``.

    The centre is carried as a jet of order m + 2 in the arc length of the
    curve (which needs curve jets of order 2m + 3); the focal curve is then
    arc-normalized and run through the Frenet pipeline.
    """
    m = curve.dimension - 1
    v = curve.eval_jet(theta, 2 * m + 3)
    arc = arc_normalize(v)
    fr = frenet_jets(arc, m, order=m + 2)
    fd = focal_data(arc, fr)
    r = fd.vertex_residual
    if abs(r) < VERTEX_TOL:
        raise VertexPoint(f"vertex at theta={theta}: the focal curve is singular")
    try:
        focal_arc = arc_normalize(VecJet(fd.center_jet))
    except SingularParametrization as exc:
        raise VertexPoint(str(exc)) from exc
    ff = frenet_jets(focal_arc, m, order=0)
    eps = _sign(r)
    km = fr.curvatures[-1]
    delta = np.array([_sign((-1) ** k * eps * km) for k in range(1, m + 1)])
    # the sign making (eps n_m, delta_1 n_{m-1}, ..., delta_{m-1} n_1, +-t) positive
    expected = [eps * fr.frame[m]] + [delta[k - 1] * fr.frame[m - k] for k in range(1, m)]
    t_sign = _sign(np.linalg.det(np.vstack(expected + [fr.frame[0]])))
    return FocalFrameData(
        T=ff.frame[0], N=ff.frame[1:], K=ff.curvatures, eps=eps, delta=delta,
        t_sign=t_sign, residual=r, curve_frame=fr.frame, curve_curvatures=fr.curvatures,
        center=fd.center,
    )


def _focal_frames(curve, grid):
    out, skipped = [], []
    for th in _grid(curve, grid):
        try:
            out.append((float(th), focal_frenet(curve, th)))
        except VertexPoint:
            skipped.append((float(th), "vertex"))
        except FlatteningPoint:
            skipped.append((float(th), "flattening"))
        except FocalisError as exc:
            skipped.append((float(th), type(exc).__name__))
    return out, skipped


def check_theorem5(curve, grid=50):
    """Focal-curve curvatures and frame against those of the curve.

    Rows ``0..m-1``: ``|r| K_1/|k_m| - 1``, ``|r| K_j/k_{m+1-j} - 1`` and
    ``|r| |K_m|/k_1 - 1`` with r the vertex residual. Row m: the sign
    rule ``sign K_m = delta_m * (sign of t in N_m)`` (0 or 2). Rows after
    that: ``|T - eps n_m|``, ``|N_k - delta_k n_{m-k}|`` and
    ``|N_m - (+-t)|``.
    """
    m = curve.dimension - 1
    frames, skipped = _focal_frames(curve, grid)
    theta, rows, scales = [], [], []
    for th, f in frames:
        kap, ar = f.curve_curvatures, abs(f.residual)
        ratios = [ar * f.K[0] / abs(kap[m - 1])]
        ratios += [ar * f.K[j - 1] / kap[m - j] for j in range(2, m)]
        if m >= 2:
            ratios.append(ar * abs(f.K[m - 1]) / kap[0])
        else:
            ratios = [ar * abs(f.K[0]) / kap[0]]
        row = [x - 1.0 for x in ratios]
        row.append(float(_sign(f.K[m - 1]) - f.delta[m - 1] * f.t_sign) if f.K[m - 1] else 0.0)
        n = f.curve_frame
        row.append(np.linalg.norm(f.T - f.eps * n[m]))
        row += [np.linalg.norm(f.N[k - 1] - f.delta[k - 1] * n[m - k]) for k in range(1, m)]
        row.append(np.linalg.norm(f.N[m - 1] - f.t_sign * n[0]))
        theta.append(th)
        rows.append(row)
        scales.append(np.ones(len(row)))
    report = _report("focal_frame", theta, rows, scales, skipped)
    report.extra["ratio_rows"] = m
    return report


def check_focal_flag(curve, grid=50):
    """Focal flag nesting and its coincidence with the osculating flag of the focal curve.

    Rows, per sample: for k = 1..m+1 the distance of C from A^k and the
    contact residual of a sphere centred at a point of A^k (F_q' ..
    F_q^(k) must vanish, each relative to the size of its terms); then for k = 1..m the distance
    between the projectors onto span(T, N_1, .., N_{k-1}) and onto
    span(n_{m+1-k}, .., n_m).
    """
    m = curve.dimension - 1
    rng = np.random.default_rng(0)
    theta, rows, scales = [], [], []
    frames, skipped = _focal_frames(curve, grid)
    for th, f in frames:
        arc, fr = curve_frenet(curve, th, order=1)
        fd = focal_data(arc, fr)
        R = fd.radii[-1]
        row, sc = [], []
        for plane in focal_planes(arc, fr, fd):
            d = fd.center - plane.basepoint
            if plane.directions.size:
                d = d - plane.directions.T @ (plane.directions @ d)
            row.append(np.linalg.norm(d))
            sc.append(R)
            q = plane.basepoint.copy()
            if plane.directions.size:
                q += R * (rng.uniform(-1, 1, plane.directions.shape[0]) @ plane.directions)
            g = arc.coeffs.copy()
            g[:, 0] -= q
            F = jets.dot(g, g)
            # each coefficient relative to the magnitude of its own product terms
            Fmag = jets.dot(np.abs(g), np.abs(g))
            row.append(max(abs(F[j]) / Fmag[j] if Fmag[j] else 0.0 for j in range(1, plane.codim + 1)))
            sc.append(1.0)
        focal = f.frame
        for k in range(1, m + 1):
            A = focal[:k]
            B = f.curve_frame[m + 1 - k:]
            row.append(np.linalg.norm(A.T @ A - B.T @ B))
            sc.append(1.0)
        theta.append(th)
        rows.append(row)
        scales.append(sc)
    return _report("focal_flag", theta, rows, scales, skipped)


# ---------------------------------------------------------------------------
# constant-curvature curves

def check_self_congruent(curve, grid=100):
    """Focal curvatures of a constant-curvature curve.

    Rows: ``c_{2l}`` for 2l <= m, and ``c_{2l+1} - prod_{j=0..l} k_{2j}/k_{2j+1}``
    for 2l+1 <= m (k_0 = 1), scaled by R_m. When the curvatures are not
    constant along the grid the report carries a :class:`NotSelfCongruent`
    error and no residuals.
    """
    m = curve.dimension - 1
    samples, skipped = _focal_samples(curve, grid)
    kap = np.array([fr.curvatures for _, _, fr, _ in samples])
    spread = np.max(np.abs(kap - kap.mean(axis=0)), axis=0) / np.abs(kap.mean(axis=0))
    if np.any(spread > CONSTANT_TOL):
        i = int(np.argmax(spread))
        err = NotSelfCongruent(f"k_{i + 1} varies by {spread[i]:.3g} (relative)")
        return ResidualReport("self_congruent", np.array([]), np.zeros((0, m)), np.ones((0, m)),
                              skipped, error=err)
    theta, rows, scales = [], [], []
    for th, arc, fr, fd in samples:
        k = np.concatenate([[1.0], fr.curvatures])
        c = np.concatenate([[0.0], fd.focal_curvatures])
        row = []
        for i in range(1, m + 1):
            if i % 2 == 0:
                row.append(c[i])
            else:
                l = (i - 1) // 2
                row.append(c[i] - np.prod([k[2 * j] / k[2 * j + 1] for j in range(l + 1)]))
        theta.append(th)
        rows.append(row)
        scales.append(np.full(m, fd.radii[-1]))
    return _report("self_congruent", theta, rows, scales, skipped)


# ---------------------------------------------------------------------------
# critical radii, located independently of the event channels

@dataclass
class CriticalRadiiCheck:
    """Zeros of R_l' against the focal-curvature zeros that should produce them.

    ``roots[l]`` are refined sign changes of (R_l^2)' computed from the
    projections of C - gamma; ``expected[l]`` are the parameters of the
    scanned events that imply a critical R_l (zeros of c_l or c_{l+1} for
    l < m, vertices and pseudo-vertices for l = m). ``mismatch`` is the
    largest distance from any point of either set to the nearest point of
    the other.
    """

    roots: dict
    expected: dict
    mismatch: float

    def ok(self, tol=1e-6):
        return self.mismatch < tol


class _RadiusSlopes:
    """(R_l^2)' for l = 1..m from the projections of C - gamma, keyed by l."""

    def __init__(self, curve, sampler):
        self.curve, self.sampler = curve, sampler
        self.lo, self.hi = sampler.lo, sampler.hi
        self.m = curve.dimension - 1

    def __call__(self, theta):
        try:
            _, _, fd = focal_point(self.curve, self.sampler.wrap(theta))
        except FocalisError:
            return dict.fromkeys(range(1, self.m + 1), np.nan)
        c = fd.curvature_jets[:, :2]
        slopes = 2.0 * np.cumsum(c[:, 0] * c[:, 1])
        return {l: [slopes[l - 1]] for l in range(1, self.m + 1)}


def _nearest(a, b, period):
    if a.size == 0:
        return 0.0
    if b.size == 0:
        return np.inf
    d = np.abs(a[:, None] - b[None, :])
    if period is not None:
        d = np.minimum(d, period - d)
    return float(np.max(np.min(d, axis=1)))


def check_critical_radii(curve, samples=512, report=None):
    """Match sign changes of R_l' with the zeros predicted from c_l, c_{l+1}.

    (R_l^2)' is sampled on the grid and additionally probed just either side
    of every predicted zero, so that two zeros in one grid cell are not lost.
    Brackets of (R_m^2)' that straddle a flattening are discarded: there R_m
    passes through infinity rather than through a critical point.
    """
    m = curve.dimension - 1
    if report is None:
        report = scan_events(curve, samples)
    theta = sample_grid(curve, samples)
    sampler = _Sampler(curve)
    slopes = _RadiusSlopes(curve, sampler)
    period = sampler.period if curve.periodic else None
    cell = sampler.period / (theta.size if curve.periodic else theta.size - 1)
    grid_vals = [slopes(t) for t in theta]
    flats = report.thetas(FLATTENING)

    def zeros_of(l):
        if l == 1:
            return np.array([])
        if l == m:
            return report.thetas(PSEUDO_VERTEX)
        return report.thetas(FOCAL_ZERO, l)

    roots, expected = {}, {}
    worst = 0.0
    for l in range(1, m + 1):
        if l < m:
            expected[l] = np.sort(np.concatenate([zeros_of(l), zeros_of(l + 1)]))
        else:
            expected[l] = np.sort(np.concatenate([report.thetas(VERTEX),
                                                  report.thetas(PSEUDO_VERTEX)]))
        f = np.array([v[l][0] for v in grid_vals])
        exact, brackets = _brackets(theta, f, curve.periodic, sampler.period)
        brackets += _probe_brackets(slopes, l, expected[l], PROBE_FRACTION * cell)
        found = [(t, False) for t in exact]
        for a, b, fa in brackets:
            if l == m and flats.size and np.any(_in_bracket(flats, a, b, sampler.period)):
                continue
            found.append((sampler.wrap(_bisect(slopes, l, a, b, fa)), False))
        roots[l] = np.array([t for t, _ in _dedupe(found, curve.periodic, sampler.period)])
        crit = report.thetas(CRITICAL_RADIUS, l)
        worst = max(worst, _nearest(roots[l], expected[l], period),
                    _nearest(expected[l], roots[l], period),
                    _nearest(crit, roots[l], period))
    return CriticalRadiiCheck(roots, expected, worst)


def _in_bracket(points, a, b, period):
    if b <= a + period:
        pts = np.concatenate([points, points + period])
        return (pts >= a) & (pts <= b)
    return (points >= a) & (points <= b)
