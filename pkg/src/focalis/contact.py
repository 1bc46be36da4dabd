"""
Order of contact
================

A curve has k-point contact with a sphere or affine subspace M at a point
when the defining functions of M, restricted to the curve, vanish there to
multiplicity k (the minimum over the generators). For a sphere with centre q
and radius r the defining function is ``(|q - gamma|^2 - r^2) / 2``; for an
affine subspace, the affine functionals ``<x - p, nu>`` over an orthonormal
basis ``nu`` of the orthogonal complement of its directions.

Multiplicities are read off the arc-length jet of the restricted function.
Coefficient k counts as zero when ``|a_k| < CONTACT_TOL * L**(p - k)``
where L is the natural length of the query (the radius for spheres, the
radius of curvature for affine subspaces) and p = 2 (spheres) or 1 (affine),
which makes the test invariant under uniform scaling.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import jets
from .errors import InsufficientOrder
from .frenet import arc_normalize

CONTACT_TOL = 1e-8


@dataclass(frozen=True)
class ContactQuery:
    kind: str
    center: np.ndarray = None
    radius: float = None
    basepoint: np.ndarray = None
    directions: np.ndarray = None
    theta0: float = None

    @classmethod
    def sphere(cls, center, radius, theta0=None):
        if not radius > 0:
            raise ValueError("sphere radius must be positive")
        return cls("sphere", center=np.asarray(center, float), radius=float(radius), theta0=theta0)

    @classmethod
    def affine(cls, basepoint, directions, theta0=None):
        p = np.asarray(basepoint, float)
        dirs = np.asarray(directions, float).reshape(-1, p.size)
        return cls("affine", basepoint=p, directions=dirs, radius=np.inf, theta0=theta0)


@dataclass(frozen=True)
class ContactResult:
    """``order`` is exact when ``exact`` is True, otherwise a lower bound."""

    order: int
    exact: bool
    leading_coefficient: float = None

    def __str__(self):
        return str(self.order) if self.exact else f">= {self.order}"

    def at_least(self, k):
        return self.order >= k


def _annihilator(directions, dim):
    if directions.size == 0:
        return np.eye(dim)
    return scipy.linalg.null_space(directions).T


def _multiplicity(coeffs, length, power, n_max):
    for k in range(n_max + 1):
        if abs(coeffs[k]) >= CONTACT_TOL * length ** (power - k):
            return ContactResult(k, True, float(coeffs[k]))
    return ContactResult(n_max, False, None)


def contact_order(v, query, n_max=None):
    """Order of contact of the curve jet ``v`` with ``query`` at its expansion point.

    ``v`` may be in any regular parametrization; it is re-expanded in arc
    length first. When every coefficient up to ``n_max`` vanishes the result
    is the lower bound ``>= n_max``.
    """
    if n_max is None:
        n_max = v.order
    if v.order < n_max:
        raise InsufficientOrder(f"jet order {v.order} below n_max={n_max}")
    arc = arc_normalize(v.truncate(n_max)) if n_max >= 1 else v.truncate(n_max)
    g = arc.coeffs
    if query.kind == "sphere":
        d = g.copy()
        d[:, 0] -= query.center
        f = 0.5 * jets.dot(d, d)
        f[0] -= 0.5 * query.radius ** 2
        return _multiplicity(f, query.radius, 2, n_max)
    if query.kind != "affine":
        raise ValueError(f"unknown query kind {query.kind!r}")
    length = 1.0
    if n_max >= 2:
        k1 = float(np.linalg.norm(2.0 * g[:, 2]))
        if k1 > 0:
            length = 1.0 / k1
    d = g.copy()
    d[:, 0] -= query.basepoint
    results = [_multiplicity(nu @ d, length, 1, n_max)
               for nu in _annihilator(query.directions, g.shape[0])]
    return _weakest(results)


def _weakest(results):
    # an exact order k is weaker than the bound ">= k"
    return min(results, key=lambda r: (r.order, r.exact is False))


def osculating_sphere_contact(v, frenet, focal, l, n_max=None):
    """Contact order with the osculating l-sphere.

    For l < m this is the intersection of the osculating hypersphere with the
    osculating (l+1)-plane; its generating ideal is spanned by the sphere of
    centre gamma_l and radius R_l together with the functionals along
    n_{l+1}, ..., n_m.
    """
    m = frenet.m
    if not 1 <= l <= m:
        raise ValueError(f"l must lie in 1..{m}")
    if n_max is None:
        n_max = v.order
    sphere = ContactQuery.sphere(focal.partial_centers[l - 1], focal.radii[l - 1])
    result = contact_order(v, sphere, n_max)
    if l == m:
        return result
    plane = ContactQuery.affine(v.value, frenet.frame[:l + 1])
    return _weakest([result, contact_order(v, plane, n_max)])
