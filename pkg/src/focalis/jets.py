"""
Truncated Taylor series ("jets")
================================

A jet of order N at a point x0 stores the normalized Taylor coefficients
``a[k] = f^(k)(x0) / k!`` for k = 0..N. Arithmetic on jets propagates exact
derivatives through every downstream computation.

Two layers live here:

* array functions (``mul``, ``div``, ``sqrt``, ``compose`` ...) that act on the
  trailing axis of numpy arrays, so a vector or matrix of jets is just an
  array of shape ``(..., N+1)``;
* the :class:`Jet` and :class:`VecJet` value types with operator overloading,
  plus the named ``jet_*`` entry points.
"""

from functools import lru_cache
import math

import numpy as np
import scipy.linalg

from .errors import (
    CompositionOffsetError,
    DivisionByZeroJet,
    DomainError,
    NotInvertibleJet,
    OrderMismatch,
)

MAX_ORDER = 24


# ---------------------------------------------------------------------------
# array layer

@lru_cache(maxsize=None)
def _toeplitz_index(n):
    i, k = np.indices((n, n))
    idx = k - i
    return np.where(idx >= 0, idx, 0), idx >= 0


def mul(a, b):
    """Truncated Cauchy product along the last axis."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[-1]
    if b.shape[-1] != n:
        raise OrderMismatch(f"orders differ: {n - 1} vs {b.shape[-1] - 1}")
    if a.ndim == 1 and b.ndim == 1:
        return np.convolve(a, b)[:n]
    idx, mask = _toeplitz_index(n)
    tb = b[..., idx] * mask
    return np.einsum("...i,...ik->...k", a, tb)


def dot(a, b):
    """Inner product of two vector jets of shape (d, N+1)."""
    return mul(a, b).sum(axis=-2)


def div(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise OrderMismatch("orders differ")
    if np.any(b[..., 0] == 0.0):
        raise DivisionByZeroJet("divisor has zero constant term")
    a, b = np.broadcast_arrays(a, b)
    c = np.zeros(a.shape)
    b0 = b[..., 0]
    for k in range(a.shape[-1]):
        acc = a[..., k] - np.sum(b[..., 1:k + 1] * c[..., :k][..., ::-1], axis=-1)
        c[..., k] = acc / b0
    return c


def recip(a):
    one = np.zeros_like(np.asarray(a, dtype=float))
    one[..., 0] = 1.0
    return div(one, a)


def exp(a):
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    j = np.arange(n)
    b = np.zeros(a.shape)
    b[..., 0] = np.exp(a[..., 0])
    for k in range(1, n):
        b[..., k] = np.sum(j[1:k + 1] * a[..., 1:k + 1] * b[..., :k][..., ::-1], axis=-1) / k
    return b


def log(a):
    a = np.asarray(a, dtype=float)
    if np.any(a[..., 0] <= 0.0):
        raise DomainError("log of a jet with non-positive constant term")
    n = a.shape[-1]
    j = np.arange(n)
    b = np.zeros(a.shape)
    a0 = a[..., 0]
    b[..., 0] = np.log(a0)
    for k in range(1, n):
        s = np.sum(j[1:k] * b[..., 1:k] * a[..., 1:k][..., ::-1], axis=-1) / k
        b[..., k] = (a[..., k] - s) / a0
    return b


def sqrt(a):
    a = np.asarray(a, dtype=float)
    a0 = a[..., 0]
    if np.any(a0 < 0.0):
        raise DomainError("sqrt of a jet with negative constant term")
    if np.any(a0 == 0.0):
        if a.ndim == 1 and not np.any(a):
            return np.zeros_like(a)
        raise DomainError("sqrt is not differentiable at zero")
    n = a.shape[-1]
    b = np.zeros(a.shape)
    b0 = np.sqrt(a0)
    b[..., 0] = b0
    for k in range(1, n):
        s = np.sum(b[..., 1:k] * b[..., 1:k][..., ::-1], axis=-1)
        b[..., k] = (a[..., k] - s) / (2.0 * b0)
    return b


def sincos(a):
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    j = np.arange(n)
    s = np.zeros(a.shape)
    c = np.zeros(a.shape)
    s[..., 0] = np.sin(a[..., 0])
    c[..., 0] = np.cos(a[..., 0])
    for k in range(1, n):
        ja = j[1:k + 1] * a[..., 1:k + 1]
        s[..., k] = np.sum(ja * c[..., :k][..., ::-1], axis=-1) / k
        c[..., k] = -np.sum(ja * s[..., :k][..., ::-1], axis=-1) / k
    return s, c


def sin(a):
    return sincos(a)[0]


def cos(a):
    return sincos(a)[1]


def tan(a):
    s, c = sincos(a)
    if np.any(np.abs(c[..., 0]) < 1e-300):
        raise DomainError("tan at a pole")
    return div(s, c)


def atan(a):
    a = np.asarray(a, dtype=float)
    da = diff(a)
    lead = np.ones_like(da)
    lead[..., 1:] = 0.0
    trunc = a[..., :-1]
    q = div(da, lead + mul(trunc, trunc))
    return integrate(q, np.arctan(a[..., 0]))


def power(a, p):
    """``a ** p`` for a real exponent ``p``."""
    a = np.asarray(a, dtype=float)
    p = float(p)
    if p.is_integer():
        ip = int(p)
        if ip >= 0:
            return _int_power(a, ip)
        return recip(_int_power(a, -ip))
    a0 = a[..., 0]
    if np.any(a0 < 0.0):
        raise DomainError("non-integer power of a jet with negative constant term")
    if np.any(a0 == 0.0):
        if p > 0 and a.ndim == 1 and not np.any(a):
            return np.zeros_like(a)
        raise DomainError("non-integer power is not differentiable at zero")
    n = a.shape[-1]
    j = np.arange(n)
    b = np.zeros(a.shape)
    b[..., 0] = a0 ** p
    for k in range(1, n):
        w = p * j[1:k + 1] - (k - j[1:k + 1])
        b[..., k] = np.sum(w * a[..., 1:k + 1] * b[..., :k][..., ::-1], axis=-1) / (k * a0)
    return b


def _int_power(a, p):
    result = np.zeros_like(a)
    result[..., 0] = 1.0
    base = a
    while p:
        if p & 1:
            result = mul(result, base)
        p >>= 1
        if p:
            base = mul(base, base)
    return result


def diff(a, k=1):
    """Series of the k-th derivative; the order drops by k."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    if k >= n:
        raise ValueError(f"cannot differentiate an order-{n - 1} jet {k} times")
    j = np.arange(n - k)
    factor = np.ones(n - k)
    for i in range(1, k + 1):
        factor *= j + i
    return a[..., k:] * factor


def integrate(a, c0=0.0):
    """Antiderivative series with constant term ``c0``; the order grows by one."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    out = np.zeros(a.shape[:-1] + (n + 1,))
    out[..., 0] = c0
    out[..., 1:] = a / np.arange(1, n + 1)
    return out


def derivatives(a):
    """Raw derivatives f^(k)(x0) from normalized coefficients."""
    a = np.asarray(a, dtype=float)
    fact = np.array([math.factorial(k) for k in range(a.shape[-1])], dtype=float)
    return a * fact


def compose(outer, inner):
    """Coefficients of ``outer(inner(h))``; ``inner`` must vanish at h = 0.

    ``outer`` may carry leading axes (a vector of jets), ``inner`` is 1-D.
    """
    outer = np.asarray(outer, dtype=float)
    inner = np.asarray(inner, dtype=float)
    n = outer.shape[-1]
    if inner.shape[-1] != n:
        raise OrderMismatch("orders differ")
    if inner[0] != 0.0:
        raise CompositionOffsetError("inner series must have zero constant term")
    res = np.zeros(outer.shape)
    res[..., 0] = outer[..., n - 1]
    for k in range(n - 2, -1, -1):
        res = mul(res, inner)
        res[..., 0] += outer[..., k]
    return res


def revert(a):
    """Compositional inverse: ``compose(a, revert(a))`` is the identity series."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1]
    if n < 2:
        raise NotInvertibleJet("order-0 jets cannot be reverted")
    if a[0] != 0.0:
        raise CompositionOffsetError("series to revert must have zero constant term")
    if a[1] == 0.0:
        raise NotInvertibleJet("linear coefficient vanishes")
    b = np.zeros(n)
    b[1] = 1.0 / a[1]
    for k in range(2, n):
        b[k] = -compose(a[:k + 1], b[:k + 1])[k] / a[1]
    return b


def solve(A, b):
    """Series solution q(h) of A(h) q(h) = b(h).

    ``A`` has shape (n, n, N+1) and ``b`` shape (n, N+1). The constant
    matrix is factored once (LU with partial pivoting) and higher
    coefficients follow by back-substitution of the Cauchy product.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    order = b.shape[-1]
    lu = scipy.linalg.lu_factor(A[..., 0])
    q = np.zeros(b.shape)
    for j in range(order):
        rhs = b[..., j].copy()
        for i in range(1, j + 1):
            rhs -= A[..., i] @ q[..., j - i]
        q[..., j] = scipy.linalg.lu_solve(lu, rhs)
    return q


# ---------------------------------------------------------------------------
# value types

def _check_order(order):
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"jet order must lie in [0, {MAX_ORDER}], got {order}")


class Jet:
    """Scalar truncated Taylor series ``a0 + a1 h + ... + aN h^N``."""

    __slots__ = ("coeffs",)
    __array_ufunc__ = None

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float).reshape(-1)
        _check_order(c.size - 1)
        self.coeffs = c

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value, order):
        """The jet of the identity map about ``value``."""
        c = np.zeros(order + 1)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self):
        return self.coeffs.size - 1

    @property
    def value(self):
        return float(self.coeffs[0])

    def derivative(self, k=1):
        """The k-th derivative at the expansion point."""
        return float(self.coeffs[k] * math.factorial(k))

    def derivatives(self):
        return derivatives(self.coeffs)

    def diff(self, k=1):
        return Jet(diff(self.coeffs, k))

    def integrate(self, c0=0.0):
        return Jet(integrate(self.coeffs, c0))

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        return Jet(self.coeffs[:order + 1])

    def __call__(self, h):
        return np.polynomial.polynomial.polyval(h, self.coeffs)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")
            return other.coeffs
        if np.ndim(other) == 0:
            c = np.zeros_like(self.coeffs)
            c[0] = float(other)
            return c
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.coeffs + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.coeffs - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(o - self.coeffs)

    def __mul__(self, other):
        if np.ndim(other) == 0 and not isinstance(other, Jet):
            return Jet(self.coeffs * float(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(mul(self.coeffs, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.ndim(other) == 0 and not isinstance(other, Jet):
            if float(other) == 0.0:
                raise DivisionByZeroJet("division by zero scalar")
            return Jet(self.coeffs / float(other))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(div(self.coeffs, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(div(o, self.coeffs))

    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __pow__(self, other):
        if isinstance(other, Jet):
            if not np.any(other.coeffs[1:]):
                return Jet(power(self.coeffs, other.coeffs[0]))
            return Jet(exp(mul(log(self.coeffs), other.coeffs)))
        return Jet(power(self.coeffs, other))

    def __rpow__(self, other):
        base = Jet.constant(other, self.order)
        return base ** self

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def allclose(self, other, rtol=1e-12, atol=1e-12):
        other = other.coeffs if isinstance(other, Jet) else np.asarray(other, float)
        return other.shape == self.coeffs.shape and np.allclose(self.coeffs, other, rtol=rtol, atol=atol)

    def __repr__(self):
        return f"Jet({self.coeffs.tolist()!r})"


class VecJet:
    """A point of R^d whose coordinates are jets of a common order.

    ``coeffs`` has shape ``(d, N+1)``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, components):
        if isinstance(components, np.ndarray):
            c = np.array(components, dtype=float)
        else:
            rows = [x.coeffs if isinstance(x, Jet) else np.asarray(x, float) for x in components]
            if len({r.size for r in rows}) > 1:
                raise OrderMismatch("vector jet components must share one order")
            c = np.array(rows, dtype=float)
        if c.ndim != 2:
            raise ValueError("VecJet needs a (d, N+1) coefficient array")
        _check_order(c.shape[1] - 1)
        self.coeffs = c

    @property
    def dim(self):
        return self.coeffs.shape[0]

    @property
    def order(self):
        return self.coeffs.shape[1] - 1

    @property
    def components(self):
        return [Jet(row) for row in self.coeffs]

    def __getitem__(self, i):
        return Jet(self.coeffs[i])

    def __len__(self):
        return self.dim

    @property
    def value(self):
        return self.coeffs[:, 0].copy()

    def derivative(self, k=1):
        """The vector ``gamma^(k)`` at the expansion point."""
        return self.coeffs[:, k] * math.factorial(k)

    def diff(self, k=1):
        return VecJet(diff(self.coeffs, k))

    def truncate(self, order):
        return VecJet(self.coeffs[:, :order + 1])

    def dot(self, other):
        return Jet(dot(self.coeffs, other.coeffs))

    def norm_sq(self):
        return self.dot(self)

    def compose(self, inner):
        inner = inner.coeffs if isinstance(inner, Jet) else inner
        return VecJet(compose(self.coeffs, inner))

    def __add__(self, other):
        return VecJet(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return VecJet(self.coeffs - other.coeffs)

    def __repr__(self):
        return f"VecJet(dim={self.dim}, order={self.order})"


# ---------------------------------------------------------------------------
# named entry points

def _pair(a, b):
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")


def jet_add(a, b):
    _pair(a, b)
    return Jet(a.coeffs + b.coeffs)


def jet_sub(a, b):
    _pair(a, b)
    return Jet(a.coeffs - b.coeffs)


def jet_mul(a, b):
    _pair(a, b)
    return Jet(mul(a.coeffs, b.coeffs))


def jet_div(a, b):
    _pair(a, b)
    return Jet(div(a.coeffs, b.coeffs))


_ELEMENTARY = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "atan": atan,
}


def jet_elem(fn, a, exponent=None):
    """Apply an elementary function by its Taylor recurrence.

    ``fn`` is one of sin, cos, tan, exp, log, sqrt, atan, pow; ``pow`` needs
    ``exponent``.
    """
    if fn == "pow":
        if exponent is None:
            raise ValueError("pow requires an exponent")
        return a ** exponent
    try:
        f = _ELEMENTARY[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return Jet(f(a.coeffs))


def jet_compose(outer, inner):
    _pair(outer, inner)
    return Jet(compose(outer.coeffs, inner.coeffs))


def jet_revert(a):
    return Jet(revert(a.coeffs))
