"""
Focal curve and focal curvatures
================================

The centre of the osculating hypersphere solves the linear system

    gamma^(k) . q = g^(k),   k = 1..m+1,   g = |gamma|^2 / 2,

which is solved here directly (and, in jet arithmetic, as a power series in
the arc length). The focal curvatures c_i are the coordinates of
``C - gamma`` in the normal frame; a second, independent route obtains them
from the recursion ``c_{i+1} k_{i+1} = c_i' + c_{i-1} k_i``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .curvespec.model import sample_grid
from .errors import (
    CurvatureZero,
    FlatteningPoint,
    IllConditionedSystem,
    InsufficientOrder,
)
from .frenet import FLATTENING_TOL, curve_frenet, is_flat
from .jets import VecJet

MAX_CONDITION = 1e12


@dataclass
class FocalData:
    """Focal apparatus at one point.

    ``curvature_jets`` (shape ``(m, K)``) and ``center_jet`` (``(d, K)``)
    are series in the arc length of the curve.
    """

    point: np.ndarray
    center: np.ndarray
    focal_curvatures: np.ndarray
    radii: np.ndarray
    partial_centers: np.ndarray
    vertex_residual: float
    center_jet: np.ndarray = field(default=None, repr=False)
    curvature_jets: np.ndarray = field(default=None, repr=False)
    radius_sq_jet: np.ndarray = field(default=None, repr=False)

    @property
    def m(self):
        return self.focal_curvatures.size

    @property
    def correcting_term(self):
        """c_m' - (R_m^2)' / (2 c_m); None where c_m = 0."""
        cm = self.curvature_jets[-1]
        if cm[0] == 0.0:
            return None
        return float(cm[1] - self.radius_sq_jet[1] / (2.0 * cm[0]))


@dataclass
class FocalPlane:
    """The affine subspace of centres of hyperspheres with >= (codim+1)-point contact."""

    codim: int
    basepoint: np.ndarray
    directions: np.ndarray

    def contains(self, point, tol=1e-8):
        d = np.asarray(point) - self.basepoint
        if self.directions.size:
            d = d - self.directions.T @ (self.directions @ d)
        return float(np.linalg.norm(d)) <= tol * max(1.0, float(np.linalg.norm(point)))


def _check_flattening(frenet, tol=FLATTENING_TOL):
    if is_flat(frenet.curvatures, tol):
        raise FlatteningPoint("flattening: the osculating hypersphere centre is at infinity")


def _system(v, m):
    """Row-equilibrated series matrix and right-hand side of the centre system."""
    if v.order < m + 1:
        raise InsufficientOrder(f"need jet order >= {m + 1}, got {v.order}")
    n = v.order - m
    shifted = v.coeffs.copy()
    shifted[:, 0] = 0.0
    g = 0.5 * jets.dot(shifted, shifted)
    A = np.array([jets.diff(shifted, k)[:, :n] for k in range(1, m + 2)])
    b = np.array([jets.diff(g, k)[:n] for k in range(1, m + 2)])
    scale = np.linalg.norm(A[..., 0], axis=1)
    scale[scale == 0.0] = 1.0
    return A / scale[:, None, None], b / scale[:, None]


def focal_center_jet(v, frenet, flattening_tol=FLATTENING_TOL):
    """Centre of the osculating hypersphere as a vector jet (order N - m - 1)."""
    m = frenet.m
    _check_flattening(frenet, flattening_tol)
    A, b = _system(v, m)
    cond = np.linalg.cond(A[..., 0])
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditionedSystem(f"centre system condition number {cond:.3g}", cond)
    q = jets.solve(A, b)
    q[:, 0] += v.coeffs[:, 0]
    return VecJet(q)


def focal_center(v, frenet, flattening_tol=FLATTENING_TOL):
    """Centre C of the osculating hypersphere at the expansion point of ``v``."""
    return focal_center_jet(v.truncate(frenet.m + 1), frenet, flattening_tol).value


def focal_data(v, frenet, flattening_tol=FLATTENING_TOL):
    """Focal curvatures, radii, partial centres and the vertex residual.

    ``v`` is an arc-normalized jet of order >= m + 2 and ``frenet`` its
    :func:`~focalis.frenet.frenet_jets` output.
    """
    m = frenet.m
    if v.order < m + 2:
        raise InsufficientOrder(f"need jet order >= {m + 2}, got {v.order}")
    C = focal_center_jet(v, frenet, flattening_tol).coeffs
    n = C.shape[1]
    diffv = C - v.coeffs[:, :n]
    normals = frenet.frame_jets[1:, :, :n]
    c = np.array([jets.dot(diffv, e) for e in normals])
    rsq = jets.dot(diffv, diffv)
    cv = c[:, 0]
    radii = np.sqrt(np.cumsum(cv * cv))
    gamma = v.value
    partial = gamma + np.cumsum(cv[:, None] * frenet.normals, axis=0)
    c_prev = cv[m - 2] if m >= 2 else 0.0
    residual = float(c[m - 1, 1] + c_prev * frenet.curvatures[m - 1])
    return FocalData(
        point=gamma,
        center=C[:, 0].copy(),
        focal_curvatures=cv.copy(),
        radii=radii,
        partial_centers=partial,
        vertex_residual=residual,
        center_jet=C,
        curvature_jets=c,
        radius_sq_jet=rsq,
    )


def focal_curvatures_recursive(frenet, as_jets=False, flattening_tol=FLATTENING_TOL, upto=None):
    """Focal curvatures from the curvature jets alone.

    c1 = 1/k1 and c_{i+1} = (c_i' + c_{i-1} k_i) / k_{i+1}, with c0 = 0.
    Each step consumes one order of the curvature jets, so ``frenet`` needs
    curvature jets of order >= upto - 1 (``upto`` defaults to m). With
    ``as_jets`` the (ragged) list of coefficient arrays is returned instead
    of the values.
    """
    kappa = frenet.curvature_jets
    m = frenet.m
    upto = m if upto is None else upto
    if kappa.shape[1] < upto:
        raise InsufficientOrder(f"need curvature jets of order >= {upto - 1}")
    if kappa[0, 0] == 0.0:
        raise CurvatureZero("k1 vanishes")
    cs = [jets.recip(kappa[0])]
    prev = np.zeros_like(cs[0])
    for i in range(1, upto):
        k_next = kappa[i]
        if abs(k_next[0]) == 0.0 or (i == m - 1 and is_flat(frenet.curvatures, flattening_tol)):
            raise CurvatureZero(f"k{i + 1} vanishes; recursion undefined")
        ci = cs[-1]
        n = ci.size - 1
        num = jets.diff(ci) + jets.mul(prev[:n], kappa[i - 1][:n])
        prev = ci[:n]
        cs.append(jets.div(num, k_next[:n]))
    if as_jets:
        return cs
    return np.array([c[0] for c in cs])


def focal_point(curve, theta, order=1, flattening_tol=FLATTENING_TOL):
    """Arc jet, Frenet data and focal data of ``curve`` at ``theta``.

    ``order`` is the number of arc-length derivatives kept on the focal
    curvatures (at least 1, for the vertex residual).
    """
    order = max(order, 1)
    m = curve.dimension - 1
    arc, fr = curve_frenet(curve, theta, order=max(order, m - 1))
    return arc, fr, focal_data(arc, fr, flattening_tol)


@dataclass
class FocalCurve:
    theta: np.ndarray
    centers: np.ndarray
    at_infinity: np.ndarray
    data: list

    def polyline(self):
        return self.centers[~self.at_infinity]


def focal_curve(curve, grid=256, flattening_tol=FLATTENING_TOL):
    """Sample the focal curve over ``grid`` (a sample count or parameter values).

    Flattening samples are marked ``at_infinity`` with NaN centres.
    """
    theta = sample_grid(curve, grid) if np.ndim(grid) == 0 else np.sort(np.asarray(grid, float))
    d = curve.dimension
    centers = np.full((theta.size, d), np.nan)
    flat = np.zeros(theta.size, dtype=bool)
    data = []
    for i, th in enumerate(theta):
        try:
            _, _, fd = focal_point(curve, th, flattening_tol=flattening_tol)
        except (FlatteningPoint, IllConditionedSystem):
            flat[i] = True
            data.append(None)
            continue
        centers[i] = fd.center
        data.append(fd)
    return FocalCurve(theta, centers, flat, data)


def focal_planes(v, frenet, focal):
    """The focal flag A^1 > A^2 > ... > A^(m+1) at the point.

    A^k passes through gamma + c1 n1 + ... + c_{k-1} n_{k-1} with directions
    n_k, ..., n_m; A^(m+1) is the single point C.
    """
    m = frenet.m
    gamma = v.value
    planes = []
    for k in range(1, m + 2):
        base = gamma if k == 1 else focal.partial_centers[k - 2]
        dirs = frenet.frame[k:m + 1] if k <= m else np.zeros((0, m + 1))
        planes.append(FocalPlane(k, base.copy(), dirs.copy()))
    return planes
