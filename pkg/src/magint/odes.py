"""One-dimensional ODEs behind the cartesian and polar families.

* ``f'' = a f^2 + b f + c`` (and its ``g`` twin), first integral
  ``E = f'^2 - (2a/3) f^3 - b f^2 - 2 c f``;
* ``y'' = -2 y'^2 / y - 3 y + 4A / y + (B^2 - A^2) / y^3``, first integral
  ``K = y^4 y'^2 + y^6 - 2A y^4 - (B^2 - A^2) y^2``;
* closed-form solutions for the multiple-root patterns of
  ``T(y) = -y^6 + 2A y^4 + (B^2 - A^2) y^2 + K``.

Solutions are ``Profile1D`` objects: besides value and slope they return
Taylor series of any order, generated from the ODE itself so that every
identity depending on the ODE holds to rounding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import jets
from .errors import BlowUpError, BracketError, ComplexBError, ContractError, PatternError, SingularityError
from .fields import Profile1D
from .jets import Series

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-10
BLOWUP = 1e8
STEPS_PER_WINDOW = 50

DISTINCT = "distinct"
QUADRUPLE_ZERO = "quadruple-zero"
ZERO_SIMPLE = "zero-simple"
DOUBLE_TOP = "double-top"


class ConsistencyWarning(UserWarning):
    pass


def taylor_second_order(G, v0, v1, n):
    """Taylor series of the solution of v'' = G(v, v') through (v0, v1)."""
    c = np.zeros(n + 1)
    c[0] = v0
    if n >= 1:
        c[1] = v1
    for k in range(n - 1):
        V = Series(c[: k + 2].copy(), k + 1)
        g = G(V.truncate(k), V.diff())
        c[k + 2] = np.real(g.c[k]) / ((k + 1) * (k + 2))
    return Series(c, n)


class OdeSolution1D(Profile1D):
    """Dense solution of a second-order autonomous ODE on a window.

    ``sol(t)`` returns (value, slope); ``series(t, n)`` the Taylor series at t.
    ``first_integral(v, vp)`` is the conserved quantity, ``reference`` its value
    at the initial point.
    """

    def __init__(self, name, rhs, first_integral, integral_terms, t0, v0, v0p, window, pieces):
        self.name = name
        self.rhs = rhs
        self.first_integral = first_integral
        self.integral_terms = integral_terms
        self.t0, self.v0, self.v0p = t0, v0, v0p
        self.window = tuple(window)
        self.pieces = pieces
        self.reference = first_integral(v0, v0p)

    def __call__(self, t):
        return self.state(t)[0]

    def state(self, t):
        lo, hi = self.window
        if not (lo <= t <= hi):
            from .errors import DomainError

            raise DomainError(f"t = {t} outside solution window {list(self.window)}")
        for piece in self.pieces:
            a, b = sorted((piece.t_min, piece.t_max))
            if a <= t <= b:
                return tuple(piece(t))
        return tuple(self.pieces[0](t))

    def _series(self, t, n):
        v, vp = self.state(t)
        return taylor_second_order(self.rhs, v, vp, n)

    def drift(self, num=2001):
        """Max |I(t) - I(t0)| over a uniform grid.

        Relative to the largest of |I(t0)| and the magnitudes of the summands
        of I along the grid, so cancelling terms do not inflate the ratio.
        """
        ts = np.linspace(*self.window, num)
        states = [self.state(t) for t in ts]
        vals = np.array([self.first_integral(*s) for s in states])
        terms = max(max(abs(x) for x in self.integral_terms(*s)) for s in states)
        scale = max(abs(self.reference), terms, 1e-14)
        return float(np.max(np.abs(vals - self.reference)) / scale)

    def grid(self, num=201):
        ts = np.linspace(*self.window, num)
        vv = np.array([self.state(t) for t in ts])
        return ts, vv[:, 0], vv[:, 1]


def _integrate(fun, t0, y0, t_end, rtol, atol, events, name, max_step):
    if t_end == t0:
        return None
    sol = integrate.solve_ivp(
        fun, (t0, t_end), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=True, events=events,
        max_step=max_step,
    )
    if sol.status == 1 or sol.status == -1:
        where = sol.t[-1]
        raise_for = getattr(events[0], "error", BlowUpError) if events else BlowUpError
        raise raise_for(f"{name}: solution left the admissible region at t = {where:.10g}", where)
    return sol.sol


def _solve(name, vec_rhs, rhs, first_integral, terms, t0, v0, v0p, window, rtol, atol, events):
    lo, hi = window
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ContractError(f"window must be finite and increasing, got {window}")
    # the order-7 interpolant is the weak link, so steps are capped
    max_step = (hi - lo) / STEPS_PER_WINDOW
    pieces = []
    start = min(max(t0, lo), hi)
    if start != t0:
        p = _integrate(vec_rhs, t0, [v0, v0p], start, rtol, atol, events, name, max_step)
        v0, v0p = p(start)
        t0 = start
    for end in (hi, lo):
        p = _integrate(vec_rhs, t0, [v0, v0p], end, rtol, atol, events, name, max_step)
        if p is not None:
            pieces.append(p)
    return OdeSolution1D(name, rhs, first_integral, terms, t0, v0, v0p, window, pieces)


def _blowup_event(t, s):
    return BLOWUP - abs(s[0])


_blowup_event.terminal = True
_blowup_event.error = BlowUpError


def solve_fg_ode(a, b, c, v0, v0p, window, t0=0.0, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Solve v'' = a v^2 + b v + c with v(t0) = v0, v'(t0) = v0p over ``window``."""

    def vec_rhs(t, s):
        return [s[1], a * s[0] ** 2 + b * s[0] + c]

    def rhs(v, vp):
        return v * v * a + v * b + c

    def first_integral(v, vp):
        return vp**2 - (2 * a / 3) * v**3 - b * v**2 - 2 * c * v

    def terms(v, vp):
        return (vp**2, 2 * a / 3 * v**3, b * v**2, 2 * c * v)

    return _solve("f''=af^2+bf+c", vec_rhs, rhs, first_integral, terms, t0, v0, v0p, window, rtol, atol, [_blowup_event])


def y_rhs(A, B2):
    """Right side of the y(phi) equation as a function on series."""

    def rhs(y, yp):
        inv = 1.0 / y
        return -2.0 * yp * yp * inv - 3.0 * y + 4.0 * A * inv + (B2 - A * A) * inv * inv * inv

    return rhs


def y_first_integral(A, B2):
    def K(y, yp):
        return y**4 * yp**2 + y**6 - 2 * A * y**4 - (B2 - A * A) * y**2

    def terms(y, yp):
        return (y**4 * yp**2, y**6, 2 * A * y**4, (B2 - A * A) * y**2)

    return K, terms


def solve_y_ode(A, B, K, y0, y0p, window, t0=0.0, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, B2=None):
    """Integrate the second-order y(phi) equation (smooth through turning points).

    Pass ``B2`` instead of ``B`` when B^2 < 0. Initial data inconsistent with
    ``K`` (beyond 1e-8 relative) triggers a ``ConsistencyWarning``.
    """
    if y0 == 0:
        raise SingularityError("y(phi0) = 0 is a singular point of the y equation", t0)
    B2 = B * B if B2 is None else B2
    Kfun, terms = y_first_integral(A, B2)
    measured = Kfun(y0, y0p)
    if K is not None:
        scale = max(1.0, abs(K), max(abs(x) for x in terms(y0, y0p)))
        if abs(measured - K) > 1e-8 * scale:
            warnings.warn(
                f"initial data give K = {measured:.12g}, expected {K:.12g}", ConsistencyWarning, stacklevel=2
            )
    floor = 1e-3 * abs(y0)

    def vec_rhs(t, s):
        y, yp = s
        return [yp, -2 * yp * yp / y - 3 * y + 4 * A / y + (B2 - A * A) / y**3]

    def near_zero(t, s):
        return abs(s[0]) - floor

    near_zero.terminal = True
    near_zero.error = SingularityError
    return _solve("y''(phi)", vec_rhs, y_rhs(A, B2), Kfun, terms, t0, y0, y0p, window, rtol, atol, [near_zero])


# -- roots of T(y) ---------------------------------------------------------------

@dataclass(frozen=True)
class RootTriple:
    y1: float
    y2: float
    y3: float

    def __post_init__(self):
        if not (self.y1 >= self.y2 >= self.y3 >= 0):
            raise ContractError(f"roots must satisfy y1 >= y2 >= y3 >= 0, got {self.astuple()}")

    def astuple(self):
        return (self.y1, self.y2, self.y3)

    def pattern(self, tol=1e-12):
        scale = max(self.y1, 1.0)
        z3 = self.y3 <= tol * scale
        z2 = self.y2 <= tol * scale
        if z2 and z3:
            return QUADRUPLE_ZERO
        if z3:
            return ZERO_SIMPLE
        if abs(self.y1 - self.y2) <= tol * scale:
            return DOUBLE_TOP
        return DISTINCT

    def factored_T(self, y):
        return -(y * y - self.y1**2) * (y * y - self.y2**2) * (y * y - self.y3**2)


def _constants(r: RootTriple):
    s1, s2, s3 = r.y1**2, r.y2**2, r.y3**2
    A = (s1 + s2 + s3) / 2
    K = s1 * s2 * s3
    B2 = A * A - (s1 * s2 + s2 * s3 + s3 * s1)
    return A, B2, K


def roots_to_constants(r: RootTriple):
    """(A, B^2, K) for a root triple. Raises ComplexBError if B^2 < 0."""
    A, B2, K = _constants(r)
    if B2 < -1e-14 * max(1.0, A * A):
        raise ComplexBError(f"roots {r.astuple()} give B^2 = {B2:.6g} < 0", A, B2, K)
    return A, max(B2, 0.0), K


def constants_to_roots(A, B2, K):
    """Invert (A, B^2, K) -> RootTriple; double roots are resolved exactly."""
    # T = -p(z) with p(z) = z^3 - 2A z^2 - (B^2 - A^2) z - K, z = y^2
    c2, c1, c0 = -2 * A, -(B2 - A * A), -K
    p = lambda z: ((z + c2) * z + c1) * z + c0  # noqa: E731
    scale = max(1.0, abs(A), abs(B2), abs(K)) ** 1.5
    zs = None
    disc = c2 * c2 - 3 * c1
    if disc >= 0:
        for zc in ((-c2 + math.sqrt(disc)) / 3, (-c2 - math.sqrt(disc)) / 3):
            if abs(p(zc)) <= 1e-13 * scale:
                zs = [zc, zc, -c2 - 2 * zc]
                break
    if zs is None:
        raw = np.roots([1.0, c2, c1, c0])
        if np.max(np.abs(raw.imag)) > 1e-9 * max(1.0, np.max(np.abs(raw))):
            raise ContractError(f"T(y) has complex root pairs for A={A}, B^2={B2}, K={K}")
        zs = []
        for z in raw.real:
            for _ in range(3):  # Newton polish
                dp = (3 * z + 2 * c2) * z + c1
                if dp == 0:
                    break
                z -= p(z) / dp
            zs.append(z)
    if min(zs) < -1e-12 * scale:
        raise ContractError(f"T(y) has a negative root in y^2 for A={A}, B^2={B2}, K={K}")
    ys = sorted((math.sqrt(max(z, 0.0)) for z in zs), reverse=True)
    return RootTriple(*ys)


def eval_T(y, A, B=None, K=0.0, B2=None):
    """-y^6 + 2A y^4 + (B^2 - A^2) y^2 + K."""
    B2 = B * B if B2 is None else B2
    y2 = y * y
    return ((-y2 + 2 * A) * y2 + (B2 - A * A)) * y2 + K


# -- closed-form solutions ---------------------------------------------------------

class ClosedFormY(Profile1D):
    """Analytic y(phi) for a multiple-root pattern, with exact Taylor series."""

    def __init__(self, pattern, roots: RootTriple, phi0=0.0, branch=1):
        if branch not in (1, -1):
            raise ContractError("branch must be +1 or -1")
        got = roots.pattern()
        if got != pattern:
            raise PatternError(f"roots {roots.astuple()} have pattern {got!r}, not {pattern!r}")
        self.pattern = pattern
        self.roots = roots
        self.phi0 = phi0
        self.branch = branch
        self.A, self.B2, self.K = _constants(roots)
        if pattern == ZERO_SIMPLE:
            self.B = (roots.y1**2 - roots.y2**2) / 2
        elif pattern == QUADRUPLE_ZERO:
            self.B = self.A
        else:
            self.B = None
        if pattern == DOUBLE_TOP:
            self._implicit = _DoubleTopInverse(roots.y1, roots.y3)
        elif pattern not in (QUADRUPLE_ZERO, ZERO_SIMPLE):
            raise PatternError(f"no closed form for pattern {pattern!r}")

    def _series(self, t, n):
        if self.pattern == QUADRUPLE_ZERO:
            s = jets.sin(Series.variable(t - self.phi0, n))
            return s * (self.branch * self.roots.y1)
        if self.pattern == ZERO_SIMPLE:
            s = jets.sin(Series.variable(t - self.phi0, n) * 2.0)
            return jets.sqrt(s * self.B + self.A) * self.branch
        y, yp = self.state(t)
        return taylor_second_order(y_rhs(self.A, self.B2), y, yp, n)

    def state(self, t):
        if self.pattern == DOUBLE_TOP:
            return self._implicit.state(self.branch * (t - self.phi0))
        s = self.series(t, 1)
        return float(s.c[0]), float(s.c[1])

    def implicit_residual(self, t):
        """|LHS(y(phi)) - (+/-) 2 sqrt(y1^2 - y3^2)(phi - phi0)| folded into one period."""
        if self.pattern != DOUBLE_TOP:
            raise PatternError("implicit relation only exists for the double-top pattern")
        return self._implicit.residual(self.branch * (t - self.phi0))

    def period(self):
        if self.pattern == QUADRUPLE_ZERO:
            return 2 * math.pi
        if self.pattern == ZERO_SIMPLE:
            return math.pi
        return self._implicit.period


def double_top_lhs(y, y1, y3):
    """Left side of the implicit double-top relation (sign-corrected second arcsin)."""
    s = math.sqrt(y1 * y1 - y3 * y3)
    u = (y3 * y3 + y * y1) / (y3 * (y + y1))
    v = (y3 * y3 - y * y1) / (y3 * (y1 - y))
    clip = lambda z: min(1.0, max(-1.0, z))  # noqa: E731
    return -2 * s * math.asin(clip(y / y3)) + y1 * (math.asin(clip(u)) - math.asin(clip(v)))


class _DoubleTopInverse:
    """Solve LHS(y) = 2 s tau for y in [-y3, y3], extended periodically by reflection."""

    def __init__(self, y1, y3, num=4001):
        if not (0 < y3 < y1):
            raise PatternError(f"double-top needs 0 < y3 < y1, got y1={y1}, y3={y3}")
        self.y1, self.y3 = y1, y3
        self.s = math.sqrt(y1 * y1 - y3 * y3)
        self.grid = np.linspace(-y3, y3, num)
        self.table = np.array([double_top_lhs(y, y1, y3) for y in self.grid])
        if np.any(np.diff(self.table) < -1e-12):
            raise BracketError("double-top left side is not monotone on its grid")
        self.Lmax = self.table[-1]
        self.period = 2 * self.Lmax / self.s

    def _fold(self, tau):
        # target L in [-Lmax, Lmax] and direction of travel
        L = 2 * self.s * tau
        span = 4 * self.Lmax
        u = (L + self.Lmax) % span
        if u <= 2 * self.Lmax:
            return u - self.Lmax, 1.0
        return 3 * self.Lmax - u, -1.0

    def state(self, tau):
        L, direction = self._fold(tau)
        k = int(np.clip(np.searchsorted(self.table, L), 1, len(self.grid) - 1))
        a, b = self.grid[k - 1], self.grid[k]
        fa = self.table[k - 1] - L
        fb = self.table[k] - L
        if fa == 0:
            y = a
        elif fb == 0:
            y = b
        elif fa * fb > 0:
            raise BracketError(f"no sign change on [{a}, {b}] for L = {L} (f = {fa}, {fb})")
        else:
            y = optimize.brentq(lambda z: double_top_lhs(z, self.y1, self.y3) - L, a, b, xtol=1e-15, rtol=1e-15)
        if y == 0:
            return 0.0, math.inf
        yp = direction * (self.y1**2 - y * y) * math.sqrt(max(self.y3**2 - y * y, 0.0)) / (y * y)
        return y, yp

    def residual(self, tau):
        L, _ = self._fold(tau)
        y, _ = self.state(tau)
        return abs(double_top_lhs(y, self.y1, self.y3) - L)


def special_solution(pattern, roots, phi0=0.0, branch=1):
    """Closed-form y(phi) for the quadruple-zero, zero-simple, or double-top pattern."""
    if not isinstance(roots, RootTriple):
        roots = RootTriple(*roots)
    return ClosedFormY(pattern, roots, phi0, branch)


__all__ = [
    "ClosedFormY",
    "ConsistencyWarning",
    "OdeSolution1D",
    "RootTriple",
    "constants_to_roots",
    "double_top_lhs",
    "eval_T",
    "roots_to_constants",
    "solve_fg_ode",
    "solve_y_ode",
    "special_solution",
    "taylor_second_order",
    "y_first_integral",
    "y_rhs",
]
