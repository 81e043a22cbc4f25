"""Scalar fields on the plane and one-dimensional profiles, evaluated as jets.

A field answers ``field.jet(x, y, order) -> Jet2``. Analytic fields run jet
arithmetic on seeded coordinate jets; finite-difference fields sample a plain
callable; composite fields combine other fields.

Fields can also be read from a small JSON expression grammar::

    3.0, "x", "y", "r", "phi", "<param name>"
    ["+", e1, e2, ...]   ["-", e1, e2]   ["-", e]   ["*", e1, e2, ...]
    ["/", e1, e2]        ["^", e, p]     ["sin", e] ["cos", e] ["exp", e]
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from numbers import Number

import numpy as np
from scipy import integrate

from . import jets
from .errors import ContractError, DomainError, QuadratureError
from .jets import Jet2, Series, gidx, monomials, ncoef

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "finite-difference"
COMPOSITE = "composite"


# -- domains ------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """Rectangle, annulus, or annular sector where fields may be evaluated.

    ``margin`` only affects sampling (see ``verify.sample_points``), not
    evaluation.
    """

    kind: str = "plane"  # plane | rect | annulus
    xlim: tuple = (-math.inf, math.inf)
    ylim: tuple = (-math.inf, math.inf)
    rmin: float = 0.0
    rmax: float = math.inf
    philim: tuple | None = None  # sector in radians, only for annulus

    def contains(self, x, y):
        if not (np.isfinite(x) and np.isfinite(y)):
            return False
        if self.kind == "plane":
            return True
        if self.kind == "rect":
            return self.xlim[0] <= x <= self.xlim[1] and self.ylim[0] <= y <= self.ylim[1]
        r = math.hypot(x, y)
        if not (self.rmin <= r <= self.rmax) or r == 0.0:
            return False
        if self.philim is None:
            return True
        phi = math.atan2(y, x)
        lo, hi = self.philim
        # bring phi into [lo, lo + 2 pi)
        phi = lo + (phi - lo) % (2 * math.pi)
        return phi <= hi

    def check(self, x, y):
        if not self.contains(x, y):
            raise DomainError(f"point ({x:.6g}, {y:.6g}) outside {self.describe()}")

    def describe(self):
        if self.kind == "plane":
            return "the plane"
        if self.kind == "rect":
            return f"rectangle x in {list(self.xlim)}, y in {list(self.ylim)}"
        s = f"annulus r in [{self.rmin}, {self.rmax}]"
        if self.philim is not None:
            s += f", phi in {list(self.philim)}"
        return s

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "rect":
            d.update(xlim=list(self.xlim), ylim=list(self.ylim))
        elif self.kind == "annulus":
            d.update(rmin=self.rmin, rmax=self.rmax)
            if self.philim is not None:
                d["philim"] = list(self.philim)
        return d

    @classmethod
    def from_dict(cls, d):
        kind = d.get("kind", "plane")
        if kind == "rect":
            return cls("rect", xlim=tuple(d["xlim"]), ylim=tuple(d["ylim"]))
        if kind == "annulus":
            ph = d.get("philim")
            return cls("annulus", rmin=d["rmin"], rmax=d["rmax"], philim=tuple(ph) if ph else None)
        return cls()


PLANE = Domain()


def rect(half_x, half_y=None):
    half_y = half_x if half_y is None else half_y
    return Domain("rect", xlim=(-half_x, half_x), ylim=(-half_y, half_y))


def annulus(rmin, rmax, philim=None):
    if rmin <= 0:
        raise DomainError(f"annulus needs rmin > 0, got {rmin}")
    return Domain("annulus", rmin=rmin, rmax=rmax, philim=philim)


# -- fields -------------------------------------------------------------------

class ScalarField2D:
    """Base class. Subclasses implement ``_jet``."""

    provenance = ANALYTIC
    domain = PLANE

    def jet(self, x, y, order=0):
        self.domain.check(x, y)
        return self._jet(float(x), float(y), order)

    def _jet(self, x, y, order):
        raise NotImplementedError

    def __call__(self, x, y):
        return self.jet(x, y, 0).value

    # composite construction
    def __add__(self, other):
        return Combined("add", self, as_field(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Combined("sub", self, as_field(other))

    def __rsub__(self, other):
        return Combined("sub", as_field(other), self)

    def __mul__(self, other):
        return Combined("mul", self, as_field(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Combined("mul", ConstantField(-1.0), self)

    def d(self, a, b):
        return DerivativeField(self, a, b)


class ConstantField(ScalarField2D):
    def __init__(self, value, domain=PLANE):
        self.value = value
        self.domain = domain

    def _jet(self, x, y, order):
        return Jet2.constant(self.value, order)

    def __repr__(self):
        return f"ConstantField({self.value})"


ZERO = ConstantField(0.0)


def as_field(obj):
    if isinstance(obj, ScalarField2D):
        return obj
    if isinstance(obj, Number):
        return ConstantField(obj)
    raise TypeError(f"cannot use {type(obj).__name__} as a field")


def coordinate_jets(x, y, order):
    """Seeded jets for x and y, plus lazily needed r and phi."""
    return Jet2.variable(x, "x", order), Jet2.variable(y, "y", order)


class FuncField(ScalarField2D):
    """Analytic field given by a function of coordinate jets ``fn(X, Y)``."""

    def __init__(self, fn, domain=PLANE, name=None):
        self.fn = fn
        self.domain = domain
        self.name = name or getattr(fn, "__name__", "field")

    def _jet(self, x, y, order):
        X, Y = coordinate_jets(x, y, order)
        out = self.fn(X, Y)
        if isinstance(out, Number):
            return Jet2.constant(out, order)
        return out

    def __repr__(self):
        return f"FuncField({self.name})"


class Combined(ScalarField2D):
    provenance = COMPOSITE

    def __init__(self, op, left, right):
        self.op, self.left, self.right = op, left, right
        self.domain = left.domain if left.domain is not PLANE else right.domain

    def _jet(self, x, y, order):
        a = self.left.jet(x, y, order)
        b = self.right.jet(x, y, order)
        if self.op == "add":
            return a + b
        if self.op == "sub":
            return a - b
        return a * b


class DerivativeField(ScalarField2D):
    """d^a_x d^b_y of another field; evaluates the parent at a higher order."""

    provenance = COMPOSITE

    def __init__(self, parent, a, b):
        self.parent, self.a, self.b = parent, a, b
        self.domain = parent.domain

    def _jet(self, x, y, order):
        j = self.parent.jet(x, y, order + self.a + self.b)
        for _ in range(self.a):
            j = j.dx()
        for _ in range(self.b):
            j = j.dy()
        return j


class FDField(ScalarField2D):
    """Field from a plain callable f(x, y); derivatives by central differences.

    Step rule: h = max(1, |x|, |y|) * eps**(1/(order+2)). Mixed partials use
    tensor products of 1D fourth-order-accurate stencils, so first partials
    carry O(h^4) truncation error plus O(eps/h) rounding.
    """

    provenance = FINITE_DIFFERENCE

    def __init__(self, f, domain=PLANE, max_order=2):
        self.f = f
        self.domain = domain
        self.max_order = max_order

    def step(self, x, y, order):
        return max(1.0, abs(x), abs(y)) * np.finfo(float).eps ** (1.0 / (order + 2))

    def _jet(self, x, y, order):
        if order > self.max_order:
            raise ContractError(f"FDField supports order <= {self.max_order}, requested {order}")
        h = self.step(x, y, order)
        partials = np.empty(ncoef(order))
        for k, (a, b) in enumerate(monomials(order)):
            wa, oa = _fd_weights(a)
            wb, ob = _fd_weights(b)
            acc = 0.0
            for ca, ia in zip(wa, oa):
                for cb, ib in zip(wb, ob):
                    acc += ca * cb * self.f(x + ia * h, y + ib * h)
            partials[k] = acc / h ** (a + b)
        return Jet2.from_partials(partials, order)


@lru_cache(maxsize=None)
def _fd_weights(k):
    # central stencils with fourth-order accuracy for derivative k
    table = {
        0: ([1.0], [0]),
        1: ([1 / 12, -2 / 3, 2 / 3, -1 / 12], [-2, -1, 1, 2]),
        2: ([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12], [-2, -1, 0, 1, 2]),
        3: ([1 / 8, -1, 13 / 8, -13 / 8, 1, -1 / 8], [-3, -2, -1, 1, 2, 3]),
        4: ([-1 / 6, 2, -13 / 2, 28 / 3, -13 / 2, 2, -1 / 6], [-3, -2, -1, 0, 1, 2, 3]),
    }
    if k not in table:
        raise ContractError(f"no finite-difference stencil for derivative order {k}")
    return table[k]


def fd_jet(field_, x, y, order, h):
    """Finite-difference jet of any field with an explicit step (test oracle)."""
    partials = np.empty(ncoef(order))
    for k, (a, b) in enumerate(monomials(order)):
        wa, oa = _fd_weights(a)
        wb, ob = _fd_weights(b)
        acc = 0.0
        for ca, ia in zip(wa, oa):
            for cb, ib in zip(wb, ob):
                acc += ca * cb * field_(x + ia * h, y + ib * h)
        partials[k] = acc / h ** (a + b)
    return Jet2.from_partials(partials, order)


# -- one-dimensional profiles -------------------------------------------------

class Profile1D:
    """A function of one variable supplying Taylor series: ``series(t, n)``."""

    window = (-math.inf, math.inf)

    def series(self, t, n):
        if not (self.window[0] <= t <= self.window[1]):
            raise DomainError(f"t = {t:.6g} outside profile window {list(self.window)}")
        return self._series(float(t), n)

    def _series(self, t, n):
        raise NotImplementedError

    def __call__(self, t):
        return self.series(t, 0).value

    def compose(self, jet):
        """Profile evaluated on a jet (bivariate or univariate)."""
        return self.series(float(np.real(jet.value)), jet.order)(jet)

    def derivative(self, k=1):
        return DerivativeProfile(self, k)


class DerivativeProfile(Profile1D):
    def __init__(self, parent, k):
        self.parent, self.k = parent, k
        self.window = parent.window

    def _series(self, t, n):
        s = self.parent.series(t, n + self.k)
        for _ in range(self.k):
            s = s.diff()
        return s


class FuncProfile(Profile1D):
    """Profile given by a function of a ``Series`` variable."""

    def __init__(self, fn, window=(-math.inf, math.inf), name=None):
        self.fn = fn
        self.window = window
        self.name = name or getattr(fn, "__name__", "profile")

    def _series(self, t, n):
        out = self.fn(Series.variable(t, n))
        if isinstance(out, Number):
            return Series.constant(out, n)
        return out


class ConstantProfile(Profile1D):
    def __init__(self, value):
        self.value = value

    def _series(self, t, n):
        return Series.constant(self.value, n)


class Antiderivative(Profile1D):
    """t -> scale * integral_{base}^{t} integrand(s) ds, by adaptive quadrature.

    Higher Taylor coefficients come from the integrand's series, so only the
    value needs quadrature. Values are cached per abscissa.
    """

    def __init__(self, integrand, base=0.0, scale=1.0, epsabs=1e-12):
        self.integrand = integrand
        self.base = base
        self.scale = scale
        self.epsabs = epsabs
        self.window = integrand.window
        self._value = lru_cache(maxsize=4096)(self._quad)

    def _quad(self, t):
        val, err = integrate.quad(self.integrand, self.base, t, epsabs=self.epsabs, epsrel=1e-13, limit=200)
        if not np.isfinite(val) or err > 1e3 * self.epsabs + 1e-10 * abs(val):
            raise QuadratureError(f"quadrature from {self.base} to {t} failed (estimate {val}, error {err})")
        return val

    def _series(self, t, n):
        if n == 0:
            return Series.constant(self.scale * self._value(t), 0)
        s = self.integrand.series(t, n - 1).integral(self._value(t))
        return s * self.scale


def radial_field(profile, domain=PLANE):
    """Field (x, y) -> profile(sqrt(x^2 + y^2))."""

    def fn(X, Y):
        return profile.compose(jets.hypot(X, Y))

    return FuncField(fn, domain, name="radial")


def x_field(profile, domain=PLANE):
    return FuncField(lambda X, Y: profile.compose(X), domain, name="x-profile")


def y_field(profile, domain=PLANE):
    return FuncField(lambda X, Y: profile.compose(Y), domain, name="y-profile")


# -- expression grammar -------------------------------------------------------

_UNARY = {"sin": jets.sin, "cos": jets.cos, "exp": jets.exp}
_OPS = {"+", "-", "*", "/", "^", "sin", "cos", "exp"}
_VARIABLES = {"x", "y", "r", "phi"}


class ExpressionError(ValueError):
    def __init__(self, message, path=()):
        super().__init__(f"{'/'.join(map(str, path)) or '<root>'}: {message}")
        self.path = tuple(path)


def validate_expr(expr, params=None, variables=_VARIABLES, path=()):
    """Raise ExpressionError with the failing path if ``expr`` is malformed."""
    params = params or {}
    if isinstance(expr, bool):
        raise ExpressionError("booleans are not expressions", path)
    if isinstance(expr, Number):
        return
    if isinstance(expr, str):
        if expr not in variables and expr not in params:
            raise ExpressionError(f"unknown symbol {expr!r}", path)
        return
    if not isinstance(expr, list) or not expr:
        raise ExpressionError("expected number, symbol, or [op, args...]", path)
    op, args = expr[0], expr[1:]
    if op not in _OPS:
        raise ExpressionError(f"unknown operator {op!r}", path)
    arity = {"/": (2, 2), "^": (2, 2), "-": (1, 2), "sin": (1, 1), "cos": (1, 1), "exp": (1, 1)}
    lo, hi = arity.get(op, (1, None))
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise ExpressionError(f"operator {op!r} got {len(args)} arguments", path)
    if op == "^" and not isinstance(args[1], Number):
        raise ExpressionError("exponent must be a number", path + (2,))
    for i, a in enumerate(args, start=1):
        validate_expr(a, params, variables, path + (i,))


def evaluate_expr(expr, env, params=None):
    """Evaluate an expression with symbols bound by ``env`` (lazy callables ok)."""
    params = params or {}
    if isinstance(expr, Number):
        return expr
    if isinstance(expr, str):
        if expr in params:
            return params[expr]
        v = env[expr]
        # jets and series are callable too; only bare thunks are deferred
        return v() if callable(v) and not isinstance(v, (Jet2, Series)) else v
    op, args = expr[0], [evaluate_expr(a, env, params) for a in expr[1:]]
    if op == "+":
        out = args[0]
        for a in args[1:]:
            out = out + a
        return out
    if op == "*":
        out = args[0]
        for a in args[1:]:
            out = out * a
        return out
    if op == "-":
        return -args[0] if len(args) == 1 else args[0] - args[1]
    if op == "/":
        return args[0] / args[1]
    if op == "^":
        return args[0] ** args[1]
    return _UNARY[op](args[0])


class ExprField(ScalarField2D):
    """Analytic field compiled from the JSON expression grammar."""

    def __init__(self, expr, params=None, domain=PLANE):
        validate_expr(expr, params)
        self.expr = expr
        self.params = dict(params or {})
        self.domain = domain

    def _jet(self, x, y, order):
        X, Y = coordinate_jets(x, y, order)
        cache = {}

        def lazy(name, make):
            def get():
                if name not in cache:
                    cache[name] = make()
                return cache[name]

            return get

        env = {
            "x": X,
            "y": Y,
            "r": lazy("r", lambda: jets.hypot(X, Y)),
            "phi": lazy("phi", lambda: jets.atan2(Y, X)),
        }
        out = evaluate_expr(self.expr, env, self.params)
        if isinstance(out, Number):
            return Jet2.constant(out, order)
        return out

    def to_json(self):
        return self.expr

    def __repr__(self):
        return f"ExprField({self.expr!r})"


class ExprProfile(Profile1D):
    """One-variable profile from the expression grammar (variable ``var``)."""

    def __init__(self, expr, var="r", params=None, window=(-math.inf, math.inf)):
        validate_expr(expr, params, variables={var})
        self.expr = expr
        self.var = var
        self.params = dict(params or {})
        self.window = window

    def _series(self, t, n):
        out = evaluate_expr(self.expr, {self.var: Series.variable(t, n)}, self.params)
        if isinstance(out, Number):
            return Series.constant(out, n)
        return out


__all__ = [
    "ANALYTIC",
    "COMPOSITE",
    "FINITE_DIFFERENCE",
    "Antiderivative",
    "Combined",
    "ConstantField",
    "ConstantProfile",
    "DerivativeField",
    "Domain",
    "ExprField",
    "ExprProfile",
    "ExpressionError",
    "FDField",
    "FuncField",
    "FuncProfile",
    "PLANE",
    "Profile1D",
    "ScalarField2D",
    "ZERO",
    "annulus",
    "as_field",
    "evaluate_expr",
    "fd_jet",
    "radial_field",
    "rect",
    "validate_expr",
    "x_field",
    "y_field",
    "gidx",
]
