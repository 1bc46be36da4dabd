"""
Frenet apparatus
================

Arc-length normalization of vector jets, the positively oriented Frenet
frame (t, n1, ..., nm) and the Euclidean curvatures k1, ..., km of a curve
in R^(m+1). Everything is carried out in jet arithmetic, so the frame and
the curvatures come out as series in the arc length s.
"""

from dataclasses import dataclass

import numpy as np

from . import jets
from .errors import InsufficientOrder, NotGoodCurve, SingularParametrization
from .jets import VecJet

# Product of squared sines between each derivative and the span of the
# previous ones (= Gram determinant of the normalized derivatives).
GOOD_TOL = 1e-10
# |k_m| below FLATTENING_TOL * k_1 counts as a flattening.
FLATTENING_TOL = 1e-9
SINGULAR_TOL = 1e-13


@dataclass
class FrenetData:
    """Frenet frame and curvatures at one point.

    ``frame`` rows are t, n1, ..., nm. ``frame_jets`` has shape
    ``(m+1, m+1, K+1)`` and ``curvature_jets`` shape ``(m, K)``: series in
    the arc length s about the point.
    """

    frame: np.ndarray
    curvatures: np.ndarray
    speed: float = 1.0
    frame_jets: np.ndarray = None
    curvature_jets: np.ndarray = None

    @property
    def m(self):
        return self.curvatures.size

    @property
    def tangent(self):
        return self.frame[0]

    @property
    def normals(self):
        return self.frame[1:]

    def frenet_matrix(self):
        return frenet_matrix(self.curvatures)


@dataclass
class GoodnessReport:
    is_good: bool
    min_gram_det: float
    is_flattening: bool


def frenet_matrix(kappa):
    """The antisymmetric tridiagonal matrix with superdiagonal k1..km."""
    kappa = np.asarray(kappa, dtype=float)
    n = kappa.size + 1
    K = np.zeros((n, n))
    i = np.arange(n - 1)
    K[i, i + 1] = kappa
    K[i + 1, i] = -kappa
    return K


def arc_length_jet(v):
    """Series of s(theta) - s(theta0) = integral of the speed."""
    d1 = jets.diff(v.coeffs)
    sq = jets.dot(d1, d1)
    scale = max(float(np.max(np.abs(d1))), 1e-300)
    if sq[0] <= (SINGULAR_TOL * scale) ** 2:
        raise SingularParametrization("velocity vanishes at the expansion point")
    return jets.integrate(jets.sqrt(sq))


def arc_normalize(v):
    """Re-expand a vector jet in the arc length about the same point."""
    s = arc_length_jet(v)
    theta_of_s = jets.revert(s)
    return VecJet(jets.compose(v.coeffs, theta_of_s))


def _project_out(u, basis):
    # two sweeps of modified Gram-Schmidt
    for _ in range(2):
        for e in basis:
            u = u - jets.mul(jets.dot(u, e), e)
    return u


def _gram_schmidt(vectors):
    """Orthonormalize vector jets; returns (frame, product of squared sines)."""
    frame = []
    gram = 1.0
    for v in vectors:
        u = _project_out(v, frame)
        n0 = float(np.linalg.norm(v[:, 0]))
        r0 = float(np.linalg.norm(u[:, 0]))
        ratio = r0 / n0 if n0 > 0 else 0.0
        gram *= ratio * ratio
        if gram <= GOOD_TOL:
            raise NotGoodCurve(f"derivatives are (nearly) dependent: Gram determinant {gram:.3g}")
        frame.append(jets.div(u, jets.sqrt(jets.dot(u, u))))
    return frame, gram


def _complete(frame):
    """Unit vector jet orthogonal to ``frame`` making a positive basis."""
    d = frame[0].shape[0]
    n = frame[0].shape[1]
    E0 = np.array([e[:, 0] for e in frame])
    residual = 1.0 - np.sum(E0 * E0, axis=0)
    j = int(np.argmax(residual))
    w = np.zeros((d, n))
    w[j, 0] = 1.0
    u = _project_out(w, frame)
    u = jets.div(u, jets.sqrt(jets.dot(u, u)))
    sign = np.sign(np.linalg.det(np.vstack([E0, u[:, 0]])))
    return sign * u


def frenet_jets(v, m=None, order=1, speed=1.0):
    """Frenet frame and curvatures as series in arc length.

    ``v`` must already be arc-normalized and carry order >= m + 1 + order.
    """
    if m is None:
        m = v.dim - 1
    if v.dim != m + 1:
        raise ValueError(f"dimension {v.dim} does not match m={m}")
    if v.order < m + 1 + order:
        raise InsufficientOrder(f"need jet order >= {m + 1 + order}, got {v.order}")
    K = v.order - m
    derivs = [jets.diff(v.coeffs, k)[:, :K + 1] for k in range(1, m + 1)]
    frame, _ = _gram_schmidt(derivs)
    frame.append(_complete(frame))
    frame = np.array(frame)
    kappa = np.array([
        jets.dot(jets.diff(frame[i - 1]), frame[i][:, :K]) for i in range(1, m + 1)
    ])
    return FrenetData(
        frame=frame[..., 0].copy(),
        curvatures=kappa[:, 0].copy(),
        speed=speed,
        frame_jets=frame,
        curvature_jets=kappa,
    )


def frenet_at(v, m=None, speed=1.0):
    """Frenet frame and curvatures at the expansion point of ``v``."""
    return frenet_jets(v, m, order=0, speed=speed)


def is_flat(curvatures, tol=FLATTENING_TOL):
    kappa = np.asarray(curvatures)
    if kappa.size == 1:
        return bool(abs(kappa[0]) == 0.0)
    return bool(abs(kappa[-1]) < tol * kappa[0])


def is_good(v, m=None):
    """Goodness report for the derivatives gamma', ..., gamma^(m) of ``v``.

    Never raises for geometric reasons.
    """
    if m is None:
        m = v.dim - 1
    gram = 1.0
    basis = []
    for k in range(1, m + 1):
        d = v.derivative(k)
        nrm = float(np.linalg.norm(d))
        if nrm == 0.0:
            return GoodnessReport(False, 0.0, False)
        u = d / nrm
        for _ in range(2):
            for e in basis:
                u = u - np.dot(u, e) * e
        r = float(np.linalg.norm(u))
        gram *= r * r
        if r == 0.0:
            return GoodnessReport(False, 0.0, False)
        basis.append(u / r)
    good = gram > GOOD_TOL
    flat = False
    if good and v.order >= m + 1:
        if m == 1:
            d1, d2 = v.derivative(1), v.derivative(2)
            n2 = np.linalg.norm(d2)
            flat = bool(n2 == 0.0 or abs(d1[0] * d2[1] - d1[1] * d2[0])
                        < FLATTENING_TOL * np.linalg.norm(d1) * n2)
        else:
            try:
                fd = frenet_at(arc_normalize(v.truncate(m + 1)), m)
                flat = is_flat(fd.curvatures)
            except (NotGoodCurve, SingularParametrization):
                good = False
    return GoodnessReport(bool(good), float(gram), flat)


def curve_frenet(curve, theta, order=1):
    """Frenet data of a :class:`CurveModel` at ``theta``.

    Returns ``(arc_vecjet, frenet)`` where the arc jet carries order
    ``m + 1 + order``.
    """
    m = curve.dimension - 1
    v = curve.eval_jet(theta, m + 1 + order)
    speed = float(np.linalg.norm(v.derivative(1)))
    arc = arc_normalize(v)
    return arc, frenet_jets(arc, m, order, speed=speed)
