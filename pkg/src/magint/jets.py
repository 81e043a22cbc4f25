"""Truncated Taylor jets: bivariate ``Jet2`` and univariate ``Series``.

Both store Taylor coefficients (derivative divided by the factorials) and
truncate every product at the smaller of the operand orders. ``Jet2`` keeps
monomials x^a y^b in graded-lexicographic layout; the user-facing
``partials`` array holds the actual derivatives in the same layout.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ._kernels import horner1, horner2, mul1, mul2

MAX_ORDER = 6


def ncoef(order):
    return (order + 1) * (order + 2) // 2


def gidx(a, b):
    d = a + b
    return d * (d + 1) // 2 + b


@lru_cache(maxsize=None)
def monomials(order):
    return tuple((d - b, b) for d in range(order + 1) for b in range(d + 1))


@lru_cache(maxsize=None)
def _factorial_weights(order):
    return np.array([math.factorial(a) * math.factorial(b) for a, b in monomials(order)], dtype=float)


# concrete scalar types; isinstance against numbers.Number goes through the ABC machinery
_SCALARS = (float, int, complex, np.floating, np.integer, np.complexfloating)


def _common(p, q):
    if p.dtype != q.dtype:
        return p.astype(np.complex128), q.astype(np.complex128)
    return p, q


# -- univariate Taylor coefficients of elementary functions at a point ----------

def _exp_coeffs(t0, n):
    e = np.exp(t0)
    return np.array([e / math.factorial(k) for k in range(n + 1)])


def _sin_coeffs(t0, n):
    return np.array([np.sin(t0 + k * np.pi / 2) / math.factorial(k) for k in range(n + 1)])


def _cos_coeffs(t0, n):
    return np.array([np.cos(t0 + k * np.pi / 2) / math.factorial(k) for k in range(n + 1)])


def _log_coeffs(t0, n):
    out = [np.log(t0)]
    out += [(-1) ** (k + 1) / (k * t0**k) for k in range(1, n + 1)]
    return np.array(out)


def _recip_coeffs(t0, n):
    return np.array([(-1) ** k / t0 ** (k + 1) for k in range(n + 1)])


def _pow_coeffs(t0, p, n):
    out = np.empty(n + 1, dtype=np.result_type(t0, float))
    binom = 1.0
    for k in range(n + 1):
        out[k] = binom * t0 ** (p - k)
        binom *= (p - k) / (k + 1)
    return out


def _atan_coeffs_at_zero(n):
    return np.array([0.0 if k % 2 == 0 else (-1) ** (k // 2) / k for k in range(n + 1)])


class _Taylor:
    """Arithmetic shared by bivariate and univariate jets."""

    __slots__ = ("order", "c")

    def __init__(self, c, order):
        self.c = c
        self.order = order

    # subclasses supply these
    def _new(self, c, order):
        raise NotImplementedError

    def _size(self, order):
        raise NotImplementedError

    def _mul(self, p, q, order):
        raise NotImplementedError

    def _horner(self, g, d, order):
        raise NotImplementedError

    def truncate(self, order):
        if order == self.order:
            return self
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return self._new(self.c[: self._size(order)].copy(), order)

    @property
    def value(self):
        return self.c[0]

    def _lift(self, other):
        if isinstance(other, _Taylor):
            return other
        c = np.zeros(self._size(self.order), dtype=np.result_type(self.c, other))
        c[0] = other
        return self._new(c, self.order)

    def __add__(self, other):
        if isinstance(other, _Taylor):
            if self.order == other.order:
                return self._new(self.c + other.c, self.order)
            n = min(self.order, other.order)
            k = self._size(n)
            return self._new(self.c[:k] + other.c[:k], n)
        if isinstance(other, _SCALARS):
            c = self.c.astype(np.result_type(self.c, other), copy=True)
            c[0] += other
            return self._new(c, self.order)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.c, self.order)

    def __sub__(self, other):
        if isinstance(other, (_Taylor,) + _SCALARS):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _Taylor):
            p, q, n = self.c, other.c, self.order
            if n != other.order:
                n = min(n, other.order)
                k = self._size(n)
                p, q = p[:k], q[:k]
            if p.dtype != q.dtype:
                p, q = _common(p, q)
            return self._new(self._mul(p, q, n), n)
        if isinstance(other, _SCALARS):
            return self._new(self.c * other, self.order)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return self._new(self.c / other, self.order)
        if not isinstance(other, _Taylor):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, _Taylor):
            return exp(p * log(self))
        if float(p).is_integer():
            p = int(p)
            if p < 0:
                return (self ** (-p)).reciprocal()
            result = self._lift(1.0)
            base = self
            while p:
                if p & 1:
                    result = result * base
                p >>= 1
                if p:
                    base = base * base
            return result
        return self.compose(_pow_coeffs(self.value, p, self.order))

    def compose(self, g):
        """Return sum_k g[k] (self - self.value)^k, i.e. g composed with self."""
        d = self.c.copy()
        d[0] = 0
        g = np.asarray(g)
        if g.dtype != d.dtype:
            dt = np.result_type(g, d)
            g, d = g.astype(dt), d.astype(dt)
        return self._new(self._horner(np.ascontiguousarray(g), d, self.order), self.order)

    def reciprocal(self):
        if self.value == 0:
            raise ZeroDivisionError("reciprocal of a jet with zero value")
        return self.compose(_recip_coeffs(self.value, self.order))

    @property
    def real(self):
        return self._new(self.c.real.copy(), self.order)

    @property
    def imag(self):
        return self._new(self.c.imag.copy(), self.order)


class Jet2(_Taylor):
    """Value and partial derivatives of a scalar field of (x, y) at one point.

    ``c`` holds Taylor coefficients; ``partials`` holds d^a_x d^b_y f in the
    same graded-lexicographic layout, length (order+1)(order+2)/2.
    """

    __slots__ = ()

    def __init__(self, c, order):
        if order > MAX_ORDER:
            raise ValueError(f"jet order {order} exceeds MAX_ORDER={MAX_ORDER}")
        super().__init__(c, order)

    def _new(self, c, order):
        j = _new_jet2(Jet2)
        j.c = c
        j.order = order
        return j

    def _size(self, order):
        return ncoef(order)

    def _mul(self, p, q, order):
        return mul2(p, q, order)

    def _horner(self, g, d, order):
        return horner2(g, d, order)

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(ncoef(order), dtype=np.result_type(value, float))
        c[0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, value, which, order):
        c = np.zeros(ncoef(order))
        c[0] = value
        if order >= 1:
            c[1 if which == "x" else 2] = 1.0
        return cls(c, order)

    @classmethod
    def from_partials(cls, partials, order):
        partials = np.asarray(partials)
        return cls(partials / _factorial_weights(order), order)

    @property
    def partials(self):
        return self.c * _factorial_weights(self.order)

    def partial(self, a, b):
        """d^a_x d^b_y of the field at the expansion point."""
        if a + b > self.order:
            raise ValueError(f"partial ({a},{b}) beyond jet order {self.order}")
        return self.c[gidx(a, b)] * math.factorial(a) * math.factorial(b)

    def dx(self):
        return self._deriv(1, 0)

    def dy(self):
        return self._deriv(0, 1)

    def _deriv(self, da, db):
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        n = self.order - 1
        out = np.empty(ncoef(n), dtype=self.c.dtype)
        for k, (a, b) in enumerate(monomials(n)):
            out[k] = self.c[gidx(a + da, b + db)] * (a + da if da else b + db)
        return Jet2(out, n)

    def along_x(self):
        """Univariate series of t -> f(x0 + t, y0)."""
        return Series(np.array([self.c[gidx(k, 0)] for k in range(self.order + 1)]), self.order)

    def __repr__(self):
        return f"Jet2(order={self.order}, partials={np.array2string(self.partials, precision=6)})"


class Series(_Taylor):
    """Univariate truncated Taylor series t0 + dt -> sum c[k] dt^k."""

    __slots__ = ()

    def _new(self, c, order):
        j = _new_series(Series)
        j.c = c
        j.order = order
        return j

    def _size(self, order):
        return order + 1

    def _mul(self, p, q, order):
        return mul1(p, q, order)

    def _horner(self, g, d, order):
        return horner1(g, d, order)

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1, dtype=np.result_type(value, float))
        c[0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c, order)

    def derivative(self, k=1):
        """k-th derivative value at the expansion point."""
        return self.c[k] * math.factorial(k)

    def diff(self):
        n = self.order - 1
        if n < 0:
            raise ValueError("cannot differentiate an order-0 series")
        return Series(self.c[1:] * np.arange(1, self.order + 1), n)

    def integral(self, constant=0.0):
        c = np.empty(self.order + 2, dtype=self.c.dtype)
        c[0] = constant
        c[1:] = self.c / np.arange(1, self.order + 2)
        return Series(c, self.order + 1)

    def __call__(self, jet):
        """Compose this series (expanded at t0) with a jet whose value is t0."""
        n = jet.order
        g = self.c[: n + 1]
        if len(g) < n + 1:
            raise ValueError(f"series order {self.order} too low to compose at order {n}")
        return jet.compose(g)

    def __repr__(self):
        return f"Series(order={self.order}, c={np.array2string(self.c, precision=6)})"


_new_jet2 = object.__new__
_new_series = object.__new__


# -- elementary functions -----------------------------------------------------

def _dispatch(fn, coeffs):
    def wrapped(u):
        if isinstance(u, _Taylor):
            return u.compose(coeffs(u.value, u.order))
        return fn(u)

    wrapped.__name__ = fn.__name__
    return wrapped


exp = _dispatch(np.exp, _exp_coeffs)
sin = _dispatch(np.sin, _sin_coeffs)
cos = _dispatch(np.cos, _cos_coeffs)
log = _dispatch(np.log, _log_coeffs)


def sqrt(u):
    if isinstance(u, _Taylor):
        return u ** 0.5
    return np.sqrt(u)


def hypot(x, y):
    return sqrt(x * x + y * y)


def atan2(y, x):
    """Polar angle of a point given as two jets (branch of numpy.arctan2)."""
    if not isinstance(x, _Taylor) and not isinstance(y, _Taylor):
        return np.arctan2(y, x)
    x0, y0 = float(np.real(_value(x))), float(np.real(_value(y)))
    if x0 == 0 and y0 == 0:
        raise ZeroDivisionError("atan2 jet undefined at the origin")
    # phi = phi0 + atan(u) with u(0) = 0
    u = (y * x0 - x * y0) / (x * x0 + y * y0)
    order = u.order
    return u.compose(_atan_coeffs_at_zero(order)) + float(np.arctan2(y0, x0))


def _value(u):
    return u.value if isinstance(u, _Taylor) else u


def value(u):
    """Plain value of a jet, series, or number."""
    return _value(u)
