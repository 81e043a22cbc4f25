"""Verification routes for integrals of motion.

* Poisson brackets ``{H, C}`` with exact phase-space gradients;
* pointwise residuals of the determining equations (first order, second
  order with the hbar^2 term, polar form, parabolic form);
* quantum commutators ``[H, X] psi`` from explicit second-order operators
  applied to jets of analytic test functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from . import jets
from .errors import ContractError, DomainError
from .fields import Domain, FuncField, ScalarField2D, as_field
from .gauge import GaugeData, PhysicalData
from .jets import Jet2

# -- sample points -----------------------------------------------------------------


def sample_points(domain: Domain, n, seed=0, margin=0.05, box=1.0):
    """``n`` scrambled-Halton points inside ``domain``.

    Each coordinate range is shrunk by ``margin`` times its width at both
    ends (x and y for rectangles, r and phi for annuli). The plane is
    sampled on ``[-box, box]^2``.
    """
    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    u = sampler.random(n)
    if domain.kind == "annulus":
        r0, r1 = domain.rmin, domain.rmax
        w = r1 - r0
        r0, r1 = r0 + margin * w, r1 - margin * w
        lo, hi = domain.philim if domain.philim is not None else (-math.pi, math.pi)
        pw = hi - lo
        if domain.philim is not None:
            lo, hi = lo + margin * pw, hi - margin * pw
        r = np.sqrt(r0**2 + u[:, 0] * (r1**2 - r0**2))
        phi = lo + u[:, 1] * (hi - lo)
        pts = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    else:
        if domain.kind == "rect":
            (x0, x1), (y0, y1) = domain.xlim, domain.ylim
        else:
            x0, x1, y0, y1 = -box, box, -box, box
        wx, wy = x1 - x0, y1 - y0
        x0, x1 = x0 + margin * wx, x1 - margin * wx
        y0, y1 = y0 + margin * wy, y1 - margin * wy
        pts = np.column_stack([x0 + u[:, 0] * (x1 - x0), y0 + u[:, 1] * (y1 - y0)])
    keep = np.array([domain.contains(x, y) for x, y in pts], dtype=bool)
    return pts[keep]


def grid_points(domain: Domain, nx, ny, margin=0.05):
    """Tensor grid over a rectangle (or the (r, phi) box of an annulus)."""
    if domain.kind == "annulus":
        w = domain.rmax - domain.rmin
        rs = np.linspace(domain.rmin + margin * w, domain.rmax - margin * w, nx)
        lo, hi = domain.philim if domain.philim is not None else (-math.pi, math.pi * (1 - 2 / ny))
        pw = hi - lo
        ps = np.linspace(lo + margin * pw, hi - margin * pw, ny)
        return np.array([(r * math.cos(p), r * math.sin(p)) for r in rs for p in ps])
    (x0, x1), (y0, y1) = domain.xlim, domain.ylim
    wx, wy = x1 - x0, y1 - y0
    xs = np.linspace(x0 + margin * wx, x1 - margin * wx, nx)
    ys = np.linspace(y0 + margin * wy, y1 - margin * wy, ny)
    return np.array([(x, y) for x in xs for y in ys])


def random_phase_states(domain: Domain, n, seed=0, pscale=1.0, margin=0.05):
    """Positions from ``sample_points`` and normally distributed momenta."""
    pts = sample_points(domain, n, seed=seed, margin=margin)
    rng = np.random.default_rng(seed)
    p = rng.normal(scale=pscale, size=(len(pts), 2))
    return np.column_stack([pts, p])


# -- residual reports ------------------------------------------------------------


@dataclass
class ResidualReport:
    system: str
    labels: tuple
    points: np.ndarray
    values: np.ndarray  # (npoints, nlabels)
    hbar: float | None = None
    skipped: list = field(default_factory=list)
    notes: str = ""

    @property
    def max_abs(self):
        if len(self.values) == 0:
            return {k: float("nan") for k in self.labels}
        return {k: float(np.max(np.abs(self.values[:, i]))) for i, k in enumerate(self.labels)}

    @property
    def rms(self):
        if len(self.values) == 0:
            return {k: float("nan") for k in self.labels}
        return {k: float(np.sqrt(np.mean(np.abs(self.values[:, i]) ** 2))) for i, k in enumerate(self.labels)}

    @property
    def worst(self):
        return max(self.max_abs.values()) if self.labels else 0.0

    def column(self, label):
        return self.values[:, self.labels.index(label)]

    def passed(self, tol):
        return bool(len(self.values)) and not self.skipped and self.worst < tol

    def to_dict(self):
        return {
            "system": self.system,
            "labels": list(self.labels),
            "hbar": self.hbar,
            "npoints": int(len(self.points)),
            "skipped": [list(map(float, p)) for p in self.skipped],
            "max_abs": self.max_abs,
            "rms": self.rms,
            "notes": self.notes,
        }


def _collect(system, labels, pts, fn, hbar=None, notes=""):
    good, rows, skipped = [], [], []
    for x, y in np.asarray(pts, dtype=float):
        try:
            rows.append(fn(float(x), float(y)))
            good.append((x, y))
        except DomainError:
            skipped.append((x, y))
    vals = np.array(rows, dtype=float) if rows else np.zeros((0, len(labels)))
    pts_arr = np.array(good) if good else np.zeros((0, 2))
    return ResidualReport(system, tuple(labels), pts_arr, vals, hbar, skipped, notes)


FIRST_ORDER_LABELS = ("m_x", "m_y", "W")
SECOND_ORDER_LABELS = ("k1_x", "k2_y", "k_mixed", "m_x", "m_y", "hbar_potential")
POLAR_LABELS = ("P_r", "P+Q_phi", "Omega", "m_phi", "m_r", "hbar_potential")
PARABOLIC_LABELS = ("k1_x", "k2_y", "k_mixed", "m_x", "m_y", "hbar_potential")


def residual_first_order(p: PhysicalData, I, pts) -> ResidualReport:
    """(alpha x - gamma) Omega + m_x, (alpha y + beta) Omega + m_y, f1 W_x + f2 W_y."""
    if I.order != 1:
        raise ContractError("residual_first_order needs a LinearIntegral")
    a, b, c = I.alpha, I.beta, I.gamma

    def at(x, y):
        Om = p.Omega.jet(x, y, 0).value
        W = p.W.jet(x, y, 1)
        m = I.m.jet(x, y, 1)
        f1, f2 = a * y + b, -a * x + c
        return (
            (a * x - c) * Om + m.partial(1, 0),
            (a * y + b) * Om + m.partial(0, 1),
            f1 * W.partial(1, 0) + f2 * W.partial(0, 1),
        )

    return _collect("first-order", FIRST_ORDER_LABELS, pts, at)


def _second_order_at(Om, W, k1, k2, m, g1, g2, g3, hbar, alpha, beta, gamma, x, y):
    Wx, Wy = W.partial(1, 0), W.partial(0, 1)
    Omx, Omy = Om.partial(1, 0), Om.partial(0, 1)
    om = Om.value
    return (
        k1.partial(1, 0) - g3 * om,
        k2.partial(0, 1) + g3 * om,
        2 * om * (g1 - g2) + k1.partial(0, 1) + k2.partial(1, 0),
        2 * g1 * Wx + g3 * Wy + k2.value * om - m.partial(1, 0),
        2 * g2 * Wy + g3 * Wx - k1.value * om - m.partial(0, 1),
        k1.value * Wx + k2.value * Wy + hbar**2 / 4 * ((2 * alpha * x + gamma) * Omy - (2 * alpha * y - beta) * Omx),
    )


def residual_second_order(p: PhysicalData, I, hbar, pts) -> ResidualReport:
    """The five classical equations for (k1, k2, m) and the hbar-dependent scalar one."""
    if I.order != 2:
        raise ContractError("residual_second_order needs a QuadraticIntegral")

    def at(x, y):
        g1 = I.alpha * y * y - I.beta * y + I.delta
        g2 = I.alpha * x * x + I.gamma * x + I.zeta
        g3 = -2 * I.alpha * x * y + I.beta * x - I.gamma * y + I.xi
        return _second_order_at(
            p.Omega.jet(x, y, 1), p.W.jet(x, y, 1), I.k1.jet(x, y, 1), I.k2.jet(x, y, 1), I.m.jet(x, y, 1),
            g1, g2, g3, hbar, I.alpha, I.beta, I.gamma, x, y,
        )

    return _collect("second-order", SECOND_ORDER_LABELS, pts, at, hbar)


def _polar_derivs(j, x, y):
    """(f, f_r, f_phi) from a first-order cartesian jet."""
    r = math.hypot(x, y)
    fx, fy = j.partial(1, 0), j.partial(0, 1)
    return j.value, (x * fx + y * fy) / r, x * fy - y * fx


def residual_polar_form(p: PhysicalData, P, Q, m, hbar, pts) -> ResidualReport:
    """Polar-coordinate system for alpha-only integrals.

    P_r, P + Q_phi, 2 r^3 Omega - P_phi - r Q_r + Q, m_phi - 2 r^2 W_phi + r P Omega,
    m_r - Q Omega and hbar^2/2 Omega_phi + P W_r + Q W_phi / r. ``P``, ``Q``, ``m``
    are fields on the plane (functions of the point, read in polar form).
    """
    P, Q, m = as_field(P), as_field(Q), as_field(m)

    def at(x, y):
        r = math.hypot(x, y)
        if r == 0:
            raise DomainError("polar residuals need r > 0")
        Pv, Pr, Pphi = _polar_derivs(P.jet(x, y, 1), x, y)
        Qv, Qr, Qphi = _polar_derivs(Q.jet(x, y, 1), x, y)
        _, mr, mphi = _polar_derivs(m.jet(x, y, 1), x, y)
        _, Wr, Wphi = _polar_derivs(p.W.jet(x, y, 1), x, y)
        om, _, omphi = _polar_derivs(p.Omega.jet(x, y, 1), x, y)
        return (
            Pr,
            Pv + Qphi,
            2 * r**3 * om - Pphi - r * Qr + Qv,
            mphi - 2 * r * r * Wphi + r * Pv * om,
            mr - Qv * om,
            hbar**2 / 2 * omphi + Pv * Wr + Qv * Wphi / r,
        )

    return _collect("polar", POLAR_LABELS, pts, at, hbar)


def polar_cartesian_gap(cart: ResidualReport, polar: ResidualReport):
    """Largest mismatch between combinations that both systems determine pointwise.

    For alpha-only integrals: R1 + R2 = e1 + e2 / r, x R5 - y R4 = -e4,
    x R4 + y R5 = -r e5, R6 = e6 (R cartesian, e polar residuals).
    """
    if cart.points.shape != polar.points.shape or not np.allclose(cart.points, polar.points, atol=0, rtol=0):
        raise ContractError("reports must share their sample points")
    x, y = cart.points[:, 0], cart.points[:, 1]
    r = np.hypot(x, y)
    R, e = cart.values, polar.values
    gaps = [
        (R[:, 0] + R[:, 1]) - (e[:, 0] + e[:, 1] / r),
        (x * R[:, 4] - y * R[:, 3]) + e[:, 3],
        (x * R[:, 3] + y * R[:, 4]) + r * e[:, 4],
        R[:, 5] - e[:, 5],
    ]
    return float(max(np.max(np.abs(g)) for g in gaps))


def residual_parabolic(p: PhysicalData, xi, k1, k2, m, hbar, pts) -> ResidualReport:
    """Parabolic-type system (beta = 1, all other leading constants zero except xi)."""
    k1, k2, m = as_field(k1), as_field(k2), as_field(m)

    def at(x, y):
        Om = p.Omega.jet(x, y, 1)
        W = p.W.jet(x, y, 1)
        K1, K2, M = k1.jet(x, y, 1), k2.jet(x, y, 1), m.jet(x, y, 1)
        om, Wx, Wy = Om.value, W.partial(1, 0), W.partial(0, 1)
        return (
            K1.partial(1, 0) - (x + xi) * om,
            K2.partial(0, 1) + (x + xi) * om,
            -2 * om * y + K1.partial(0, 1) + K2.partial(1, 0),
            -2 * y * Wx + (x + xi) * Wy + K2.value * om - M.partial(1, 0),
            (x + xi) * Wx - K1.value * om - M.partial(0, 1),
            K1.value * Wx + K2.value * Wy + hbar**2 / 4 * Om.partial(1, 0),
        )

    return _collect("parabolic", PARABOLIC_LABELS, pts, at, hbar)


@dataclass
class AnsatzFit:
    degree: int
    xi: float
    coefficients: dict  # name -> {(i, j): coefficient}
    residual_rms: float
    residual_max: float
    k1: ScalarField2D
    k2: ScalarField2D
    m: ScalarField2D
    notes: str = "exploratory: least squares over a finite polynomial ansatz is evidence, not a proof"


def _poly_field(coeffs, name):
    items = list(coeffs.items())

    def fn(X, Y):
        out = Jet2.constant(0.0, X.order)
        for (i, j), c in items:
            if c != 0:
                out = out + (X**i) * (Y**j) * c
        return out

    return FuncField(fn, name=name)


def parabolic_ansatz_fit(p: PhysicalData, xi, hbar, pts, degree=6) -> AnsatzFit:
    """Best polynomial (k1, k2, m) of total degree <= ``degree`` for the parabolic system.

    All six residuals are affine in the unknown coefficients, so the fit is a
    linear least-squares problem over the sample points.
    """
    monos = [(i, d - i) for d in range(degree + 1) for i in range(d + 1)]
    nm = len(monos)
    rows, rhs = [], []
    for x, y in np.asarray(pts, dtype=float):
        Om = p.Omega.jet(x, y, 1)
        W = p.W.jet(x, y, 1)
        om, Wx, Wy, Omx = Om.value, W.partial(1, 0), W.partial(0, 1), Om.partial(1, 0)
        v = np.array([x**i * y**j for i, j in monos])
        vx = np.array([i * x ** max(i - 1, 0) * y**j if i else 0.0 for i, j in monos])
        vy = np.array([j * x**i * y ** max(j - 1, 0) if j else 0.0 for i, j in monos])
        z = np.zeros(nm)
        # unknown order: k1 | k2 | m
        eqs = [
            (np.concatenate([vx, z, z]), -(x + xi) * om),
            (np.concatenate([z, vy, z]), (x + xi) * om),
            (np.concatenate([vy, vx, z]), -2 * om * y),
            (np.concatenate([z, v * om, -vx]), -2 * y * Wx + (x + xi) * Wy),
            (np.concatenate([-v * om, z, -vy]), (x + xi) * Wx),
            (np.concatenate([v * Wx, v * Wy, z]), hbar**2 / 4 * Omx),
        ]
        for row, const in eqs:
            rows.append(row)
            rhs.append(-const)
    M = np.array(rows)
    b = np.array(rhs)
    norms = np.linalg.norm(M, axis=0)
    norms[norms == 0] = 1.0
    sol, *_ = np.linalg.lstsq(M / norms, b, rcond=None)
    sol = sol / norms
    res = M @ sol - b
    parts = {name: dict(zip(monos, sol[k * nm : (k + 1) * nm])) for k, name in enumerate(("k1", "k2", "m"))}
    return AnsatzFit(
        degree,
        xi,
        parts,
        float(np.sqrt(np.mean(res**2))),
        float(np.max(np.abs(res))),
        _poly_field(parts["k1"], "k1"),
        _poly_field(parts["k2"], "k2"),
        _poly_field(parts["m"], "m"),
    )


# -- Poisson brackets ---------------------------------------------------------------


class PhaseDual:
    """Value with gradient over (x, y, px, py)."""

    __slots__ = ("v", "g")

    def __init__(self, v, g):
        self.v = v
        self.g = g

    @classmethod
    def const(cls, v):
        return cls(v, np.zeros(4))

    @classmethod
    def coordinate(cls, v, k):
        g = np.zeros(4)
        g[k] = 1.0
        return cls(v, g)

    @classmethod
    def from_jet(cls, j):
        return cls(j.value, np.array([j.partial(1, 0), j.partial(0, 1), 0.0, 0.0]))

    def __add__(self, o):
        if isinstance(o, PhaseDual):
            return PhaseDual(self.v + o.v, self.g + o.g)
        return PhaseDual(self.v + o, self.g)

    __radd__ = __add__

    def __neg__(self):
        return PhaseDual(-self.v, -self.g)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, PhaseDual):
            return PhaseDual(self.v * o.v, self.g * o.v + o.g * self.v)
        return PhaseDual(self.v * o, self.g * o)

    __rmul__ = __mul__


def _field_dual(f, x, y):
    return PhaseDual.from_jet(f.jet(x, y, 1))


def hamiltonian_dual(g: GaugeData, s):
    x, y, px, py = s
    Px, Py = PhaseDual.coordinate(px, 2), PhaseDual.coordinate(py, 3)
    A, B, V = (_field_dual(f, x, y) for f in (g.A, g.B, g.V))
    return (Px * Px + Py * Py) * 0.5 + A * Px + B * Py + V


def integral_dual(g: GaugeData, I, s):
    """The integral as a function on phase space (velocities from the gauge)."""
    if I == "H":
        return hamiltonian_dual(g, s)
    x, y, px, py = s
    X, Y = PhaseDual.coordinate(x, 0), PhaseDual.coordinate(y, 1)
    xd = PhaseDual.coordinate(px, 2) + _field_dual(g.A, x, y)
    yd = PhaseDual.coordinate(py, 3) + _field_dual(g.B, x, y)
    m = _field_dual(I.m, x, y)
    if I.order == 1:
        f1 = Y * I.alpha + I.beta
        f2 = X * (-I.alpha) + I.gamma
        return f1 * xd + f2 * yd + m
    g1 = Y * Y * I.alpha - Y * I.beta + I.delta
    g2 = X * X * I.alpha + X * I.gamma + I.zeta
    g3 = X * Y * (-2 * I.alpha) + X * I.beta - Y * I.gamma + I.xi
    k1, k2 = _field_dual(I.k1, x, y), _field_dual(I.k2, x, y)
    return g1 * xd * xd + g2 * yd * yd + g3 * xd * yd + k1 * xd + k2 * yd + m


def poisson_bracket(g: GaugeData, I, s):
    """{H, C} = H_px C_x + H_py C_y - H_x C_px - H_y C_py (``I="H"`` brackets H with itself)."""
    H = hamiltonian_dual(g, s)
    C = integral_dual(g, I, s)
    # paired per coordinate so that {H, H} cancels exactly
    return float((H.g[2] * C.g[0] - H.g[0] * C.g[2]) + (H.g[3] * C.g[1] - H.g[1] * C.g[3]))


# -- quantum operators ------------------------------------------------------------------


@dataclass
class Operator2:
    """a11 d_xx + a22 d_yy + a12 d_xy + b1 d_x + b2 d_y + c, coefficients as jets."""

    a11: object
    a22: object
    a12: object
    b1: object
    b2: object
    c: object

    def apply(self, psi: Jet2) -> Jet2:
        if psi.order < 2:
            raise ContractError("applying a second-order operator needs a psi jet of order >= 2")
        px, py = psi.dx(), psi.dy()
        out = self.c * psi + self.b1 * px + self.b2 * py
        out = out + self.a11 * px.dx() + self.a22 * py.dy() + self.a12 * px.dy()
        return out


def _zero(order):
    return Jet2.constant(0.0, order)


def hamiltonian_operator(g: GaugeData, hbar, x, y, order):
    """H = -hbar^2/2 Laplacian - i hbar (A d_x + B d_y) - i hbar/2 (A_x + B_y) + V, coefficients to ``order``."""
    A = g.A.jet(x, y, order + 1)
    B = g.B.jet(x, y, order + 1)
    V = g.V.jet(x, y, order)
    ih = 1j * hbar
    half = Jet2.constant(-hbar**2 / 2, order)
    return Operator2(
        half, half, _zero(order),
        A.truncate(order) * (-ih), B.truncate(order) * (-ih),
        (A.dx() + B.dy()) * (-ih / 2) + V,
    )


def integral_operator(g: GaugeData, I, hbar, x, y, order):
    """Symmetrized quantum operator of a linear or quadratic integral, coefficients to ``order``."""
    if I == "H":
        return hamiltonian_operator(g, hbar, x, y, order)
    n = order
    X, Y = Jet2.variable(x, "x", n + 2), Jet2.variable(y, "y", n + 2)
    A = g.A.jet(x, y, n + 1)
    B = g.B.jet(x, y, n + 1)
    m = I.m.jet(x, y, n)
    ih = 1j * hbar
    An, Bn = A.truncate(n), B.truncate(n)
    if I.order == 1:
        f1 = (Y * I.alpha + I.beta).truncate(n + 1)
        f2 = (X * (-I.alpha) + I.gamma).truncate(n + 1)
        f1n, f2n = f1.truncate(n), f2.truncate(n)
        return Operator2(
            _zero(n), _zero(n), _zero(n),
            f1n * (-ih), f2n * (-ih),
            (f1.dx() + f2.dy()) * (-ih / 2) + f1n * An + f2n * Bn + m,
        )
    g1, g2, g3 = I.leading(X, Y)
    k1 = I.k1.jet(x, y, n + 1)
    k2 = I.k2.jet(x, y, n + 1)
    h2 = hbar**2
    T = lambda j: j.truncate(n)  # noqa: E731
    g1x, g2y = g1.dx(), g2.dy()
    g3x, g3y = g3.dx(), g3.dy()
    a11 = T(g1) * (-h2)
    a22 = T(g2) * (-h2)
    a12 = T(g3) * (-h2)
    b1 = T(g1x * 2 + g3y) * (-h2 / 2) + (T(g1) * An * 4 + T(g3) * Bn * 2 + T(k1) * 2) * (-ih / 2)
    b2 = T(g2y * 2 + g3x) * (-h2 / 2) + (T(g2) * Bn * 4 + T(g3) * An * 2 + T(k2) * 2) * (-ih / 2)
    second = T(g1x.dx()) + T(g2y.dy()) + T(g3x.dy())
    first = (
        T(g1) * A.dx() * 2 + T(g1x) * An * 2 + T(g2) * B.dy() * 2 + T(g2y) * Bn * 2
        + T(g3) * A.dy() + T(g3) * B.dx() + An * T(g3y) + Bn * T(g3x) + k1.dx() + k2.dy()
    )
    zeroth = T(g1) * An * An + T(g2) * Bn * Bn + T(g3) * An * Bn + T(k1) * An + T(k2) * Bn + m
    c = second * (-h2 / 2) + first * (-ih / 2) + zeroth
    return Operator2(a11, a22, a12, b1, b2, c)


class TestFunction:
    """psi = (x - x0)^i (y - y0)^j exp(-s |r - r0|^2 + i (kx x + ky y)), exact jets."""

    __test__ = False  # not a pytest class

    def __init__(self, x0=0.0, y0=0.0, s=1.0, i=0, j=0, kx=0.0, ky=0.0):
        self.x0, self.y0, self.s, self.i, self.j, self.kx, self.ky = x0, y0, s, i, j, kx, ky

    def jet(self, x, y, order):
        X, Y = Jet2.variable(x, "x", order), Jet2.variable(y, "y", order)
        dx, dy = X - self.x0, Y - self.y0
        expo = (dx * dx + dy * dy) * (-self.s) + (X * self.kx + Y * self.ky) * 1j
        out = jets.exp(expo)
        if self.i:
            out = out * dx**self.i
        if self.j:
            out = out * dy**self.j
        return out

    def to_dict(self):
        return dict(x0=self.x0, y0=self.y0, s=self.s, i=self.i, j=self.j, kx=self.kx, ky=self.ky)


def default_test_functions(center=(0.0, 0.0), s=0.5):
    """Five Gaussian-times-monomial functions, two of them with a plane-wave phase."""
    x0, y0 = center
    return [
        TestFunction(x0, y0, s),
        TestFunction(x0, y0, s, 1, 0),
        TestFunction(x0, y0, s, 0, 2, kx=0.7),
        TestFunction(x0, y0, s, 1, 1, ky=-0.4),
        TestFunction(x0, y0, s, 3, 0, kx=0.3, ky=0.5),
    ]


def _as_operator_factory(g, I, hbar):
    if callable(I) and not hasattr(I, "order") and I != "H":
        return I
    return lambda x, y, order: integral_operator(g, I, hbar, x, y, order)


@dataclass
class CommutatorReport:
    points: np.ndarray
    residual: np.ndarray  # complex
    scale: np.ndarray
    hbar: float

    @property
    def relative(self):
        return np.abs(self.residual) / self.scale

    @property
    def max_relative(self):
        return float(np.max(self.relative)) if len(self.residual) else float("nan")


def quantum_commutator_residual(g: GaugeData, I, hbar, psi, pts) -> CommutatorReport:
    """([H, X] psi)(pt) with psi jets of order 4 and operator coefficients to order 2.

    Relative scale per point is max(|H psi|, |X psi|, 1e-14).
    """
    Xf = _as_operator_factory(g, I, hbar)
    res, scale, good = [], [], []
    for x, y in np.asarray(pts, dtype=float):
        try:
            ps = psi.jet(x, y, 4)
            if ps.order < 4:
                raise ContractError("psi must supply jets of order 4")
            H2, X2 = hamiltonian_operator(g, hbar, x, y, 2), Xf(x, y, 2)
            H0, X0 = hamiltonian_operator(g, hbar, x, y, 0), Xf(x, y, 0)
        except DomainError:
            continue
        Hpsi, Xpsi = H2.apply(ps), X2.apply(ps)
        hx, xh = H0.apply(Xpsi).value, X0.apply(Hpsi).value
        res.append(hx - xh)
        scale.append(max(abs(Hpsi.value), abs(Xpsi.value), 1e-14))
        good.append((x, y))
    return CommutatorReport(np.array(good), np.array(res, dtype=complex), np.array(scale), hbar)


def _compose_apply(ops, psi_jet):
    """Apply a product of operators right to left: ops = [(factory_at_order_n), ...]."""
    out = psi_jet
    for op in reversed(ops):
        out = op(out.order - 2).apply(out)
    return out


@dataclass
class AlgebraReport:
    labels: tuple
    relative: dict
    hbar: float
    omega0: float

    def passed(self, tol):
        return all(v < tol for v in self.relative.values())


def algebra_check(family, hbar, psis=None, pts=None) -> AlgebraReport:
    """Commutation relations and the quadratic identity of the constant-field integrals.

    Residuals, each relative to the largest operator term at the point:
    ([X1, X2] + i hbar Omega0) psi, ([X3, X1] + i hbar X2) psi,
    ([X3, X2] - i hbar X1) psi, (X1^2 + X2^2 + 2 Omega0 X3 - 2 (H - W0)) psi.
    """
    if family.name != "constant-field":
        raise ContractError("algebra_check needs the constant-field family")
    omega0, w0 = family.params["omega0"], family.params["w0"]
    g = family.gauge
    X1, X2, X3 = family.integrals
    psis = psis if psis is not None else default_test_functions()
    pts = pts if pts is not None else np.array([[0.3, -0.2], [-0.5, 0.4], [0.1, 0.7], [0.8, 0.1], [-0.6, -0.6]])
    labels = ("[X1,X2]", "[X3,X1]", "[X3,X2]", "casimir")
    worst = {k: 0.0 for k in labels}
    ih = 1j * hbar
    for psi in psis:
        for x, y in pts:
            ps = psi.jet(x, y, 4)
            op = {
                name: (lambda n, I=I: integral_operator(g, I, hbar, x, y, n))
                for name, I in (("X1", X1), ("X2", X2), ("X3", X3), ("H", "H"))
            }
            ap = lambda names: _compose_apply([op[k] for k in names], ps).value  # noqa: E731
            x1, x2, x3, h = ap(["X1"]), ap(["X2"]), ap(["X3"]), ap(["H"])
            p0 = ps.value
            t12, t21 = ap(["X1", "X2"]), ap(["X2", "X1"])
            t31, t13 = ap(["X3", "X1"]), ap(["X1", "X3"])
            t32, t23 = ap(["X3", "X2"]), ap(["X2", "X3"])
            s11, s22 = ap(["X1", "X1"]), ap(["X2", "X2"])
            rows = {
                "[X1,X2]": (t12 - t21 + ih * omega0 * p0, (t12, t21, hbar * omega0 * p0)),
                "[X3,X1]": (t31 - t13 + ih * x2, (t31, t13, hbar * x2)),
                "[X3,X2]": (t32 - t23 - ih * x1, (t32, t23, hbar * x1)),
                "casimir": (s11 + s22 + 2 * omega0 * x3 - 2 * (h - w0 * p0), (s11, s22, 2 * omega0 * x3, 2 * h)),
            }
            for k, (val, terms) in rows.items():
                scale = max(max(abs(t) for t in terms), 1e-14)
                worst[k] = max(worst[k], abs(val) / scale)
    return AlgebraReport(labels, worst, hbar, omega0)


def hbar_affinity(residual_at_hbar, hbars=(0.0, 0.5, 1.0)):
    """Fit r(hbar) = c0 + c1 hbar^2 through three values.

    Returns (c0, c1, collinearity defect, root hbar^2 = -c0/c1).
    """
    h2 = np.array([h * h for h in hbars])
    r = np.array([residual_at_hbar(h) for h in hbars])
    c1 = (r[-1] - r[0]) / (h2[-1] - h2[0])
    c0 = r[0] - c1 * h2[0]
    defect = float(np.max(np.abs(r - (c0 + c1 * h2))))
    root = -c0 / c1 if c1 != 0 else math.nan
    return float(c0), float(c1), defect, float(root)


__all__ = [
    "AlgebraReport",
    "AnsatzFit",
    "CommutatorReport",
    "Operator2",
    "PhaseDual",
    "ResidualReport",
    "TestFunction",
    "algebra_check",
    "default_test_functions",
    "grid_points",
    "hamiltonian_operator",
    "hbar_affinity",
    "integral_operator",
    "parabolic_ansatz_fit",
    "poisson_bracket",
    "polar_cartesian_gap",
    "quantum_commutator_residual",
    "random_phase_states",
    "residual_first_order",
    "residual_parabolic",
    "residual_polar_form",
    "residual_second_order",
    "sample_points",
]
