"""Integrable families: magnetic field, effective potential, gauge, integrals.

Every builder returns a ``Family``. Iterating a family yields
``(physical, integral)`` so ``p, I = build_...(...)`` works; the family also
carries a gauge, the domain, derived constants, and the polar coefficients
``P``, ``Q`` where they exist.

Integrals are stored in velocity form, ``C = f1 xdot + f2 ydot + m`` or
``C = g1 xdot^2 + g2 ydot^2 + g3 xdot ydot + k1 xdot + k2 ydot + m``, which
is gauge independent. ``L3`` follows the convention ``f1 = alpha y + beta,
f2 = -alpha x + gamma``, so the alpha = 1 integral is ``y xdot - x ydot``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import jets, odes
from .errors import BlowUpError, ConstructionError, ContractError, DegenerateBranchError, DomainError
from .fields import (
    Antiderivative,
    ConstantField,
    ConstantProfile,
    Domain,
    FuncField,
    FuncProfile,
    Profile1D,
    ScalarField2D,
    ZERO,
    annulus,
    rect,
)
from .gauge import GaugeData, PhysicalData, symmetric_radial_gauge

CONVENTION = "L3 = y*px - x*py (f1 = alpha*y + beta, f2 = -alpha*x + gamma)"


# -- integrals ----------------------------------------------------------------

@dataclass(frozen=True)
class LinearIntegral:
    """C = f1 xdot + f2 ydot + m with f1 = alpha y + beta, f2 = -alpha x + gamma."""

    alpha: float
    beta: float
    gamma: float
    m: ScalarField2D
    label: str = "X"

    order = 1
    hbar_built = 0.0

    def leading(self, X, Y):
        return Y * self.alpha + self.beta, X * (-self.alpha) + self.gamma


@dataclass(frozen=True)
class QuadraticIntegral:
    """C = g1 xdot^2 + g2 ydot^2 + g3 xdot ydot + k1 xdot + k2 ydot + m."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    zeta: float
    xi: float
    k1: ScalarField2D
    k2: ScalarField2D
    m: ScalarField2D
    hbar_built: float = 0.0
    label: str = "X"

    order = 2

    def leading(self, X, Y):
        g1 = Y * Y * self.alpha - Y * self.beta + self.delta
        g2 = X * X * self.alpha + X * self.gamma + self.zeta
        g3 = X * Y * (-2 * self.alpha) + X * self.beta - Y * self.gamma + self.xi
        return g1, g2, g3

    @property
    def canonical(self):
        nz = {k for k in ("alpha", "beta", "gamma", "delta", "zeta", "xi") if getattr(self, k) != 0}
        if nz == {"delta"}:
            return "cartesian"
        if nz == {"alpha"}:
            return "polar"
        return "general"


# -- family container -----------------------------------------------------------

@dataclass
class Family:
    name: str
    physical: PhysicalData
    integrals: tuple
    gauge: GaugeData
    params: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)
    hbar_built: float = 0.0
    P: ScalarField2D | None = None
    Q: ScalarField2D | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def domain(self) -> Domain:
        return self.physical.domain

    @property
    def integral(self):
        return self.integrals[0]

    def __iter__(self):
        yield self.physical
        yield self.integrals if len(self.integrals) > 1 else self.integrals[0]

    def describe(self):
        return {
            "family": self.name,
            "params": self.params,
            "derived": self.derived,
            "domain": self.domain.to_dict(),
            "hbar_built": self.hbar_built,
            "integrals": [_integral_header(I) for I in self.integrals],
            "convention": CONVENTION,
        }


def _integral_header(I):
    keys = ("alpha", "beta", "gamma") if I.order == 1 else ("alpha", "beta", "gamma", "delta", "zeta", "xi")
    d = {"label": I.label, "order": I.order, **{k: getattr(I, k) for k in keys}}
    if I.order == 2:
        d["canonical"] = I.canonical
    return d


def _polar(X, Y):
    """(r, cos phi, sin phi) as jets."""
    r = jets.hypot(X, Y)
    inv = 1.0 / r
    return r, X * inv, Y * inv


def _k_from_PQ(P, Q, domain):
    """Cartesian k1 = P cos - Q sin, k2 = P sin + Q cos from polar P, Q."""

    def k1(X, Y):
        r, c, s = _polar(X, Y)
        return P.jet(X.value, Y.value, X.order) * c - Q.jet(X.value, Y.value, X.order) * s

    def k2(X, Y):
        r, c, s = _polar(X, Y)
        return P.jet(X.value, Y.value, X.order) * s + Q.jet(X.value, Y.value, X.order) * c

    return FuncField(k1, domain, "k1"), FuncField(k2, domain, "k2")


def _profile(obj):
    if isinstance(obj, Profile1D):
        return obj
    if isinstance(obj, (int, float)):
        return ConstantProfile(float(obj))
    if callable(obj):
        return FuncProfile(obj)
    raise TypeError(f"cannot use {type(obj).__name__} as a one-dimensional profile")


def _radial(profile, domain, name):
    return FuncField(lambda X, Y: profile.compose(jets.hypot(X, Y)), domain, name)


# -- first-order families -----------------------------------------------------

def build_radial_first_order(omega_r, w_r, rmin=0.1, rmax=5.0, base=0.0) -> Family:
    """Rotationally invariant Omega(rho), W(rho) with integral L3 - integral rho Omega d rho.

    ``omega_r`` and ``w_r`` are profiles in rho (or callables on ``Series``).
    ``m(rho) = -integral_{base}^{rho} s Omega(s) ds`` by quadrature.
    """
    omega_r, w_r = _profile(omega_r), _profile(w_r)
    if rmin <= 0:
        raise DomainError("radial family needs rmin > 0")
    dom = annulus(rmin, rmax)
    weighted = FuncProfile(lambda s: s * omega_r.compose(s), window=omega_r.window)
    m_r = Antiderivative(weighted, base=base, scale=-1.0)
    h = FuncProfile(lambda s: m_r.compose(s) / (s * s), window=omega_r.window)
    phys = PhysicalData(_radial(omega_r, dom, "Omega"), _radial(w_r, dom, "W"), dom)
    I = LinearIntegral(1.0, 0.0, 0.0, _radial(m_r, dom, "m"), "L")
    g = symmetric_radial_gauge(h, phys.W, dom)
    return Family("radial-first-order", phys, (I,), g, params={"rmin": rmin, "rmax": rmax, "base": base})


def build_translational_first_order(omega_x, w_x, half_x=5.0, half_y=5.0, base=0.0) -> Family:
    """Omega(x), W(x) with integral P2 + integral Omega dx (gauge A = 0, B = -m)."""
    omega_x, w_x = _profile(omega_x), _profile(w_x)
    dom = rect(half_x, half_y)
    m_x = Antiderivative(omega_x, base=base)

    def along_x(profile, name, scale=1.0):
        return FuncField(lambda X, Y: profile.compose(X) * scale, dom, name)

    phys = PhysicalData(along_x(omega_x, "Omega"), along_x(w_x, "W"), dom)
    m = along_x(m_x, "m")
    I = LinearIntegral(0.0, 0.0, 1.0, m, "P2")
    B = along_x(m_x, "B", -1.0)
    g = GaugeData(ZERO, B, _v_from_w(phys.W, ZERO, B, dom), dom)
    return Family("translational-first-order", phys, (I,), g, params={"half_x": half_x, "half_y": half_y})


def _v_from_w(W, A, B, domain):
    def V(X, Y):
        x, y, n = X.value, Y.value, X.order
        a, b = A.jet(x, y, n), B.jet(x, y, n)
        return W.jet(x, y, n) + (a * a + b * b) * 0.5

    return FuncField(V, domain, "V")


def build_constant_field(omega0, w0=0.0, half=10.0) -> Family:
    """Constant field in the Landau gauge A = Omega0 y, B = 0, V = Omega0^2 y^2 / 2 + W0.

    Integrals: X1 = P1 (beta = 1), X2 = P2 + Omega0 x (gamma = 1),
    X3 = L3 - (x^2 - y^2) Omega0 / 2 (alpha = 1).
    """
    if omega0 == 0:
        raise ContractError("constant-field family needs omega0 != 0")
    dom = rect(half, half)
    phys = PhysicalData(ConstantField(omega0, dom), ConstantField(w0, dom), dom)
    X1 = LinearIntegral(0.0, 1.0, 0.0, FuncField(lambda X, Y: Y * (-omega0), dom, "m1"), "X1")
    X2 = LinearIntegral(0.0, 0.0, 1.0, FuncField(lambda X, Y: X * omega0, dom, "m2"), "X2")
    X3 = LinearIntegral(1.0, 0.0, 0.0, FuncField(lambda X, Y: (X * X + Y * Y) * (-omega0 / 2), dom, "m3"), "X3")
    A = FuncField(lambda X, Y: Y * omega0, dom, "A")
    V = FuncField(lambda X, Y: Y * Y * (omega0**2 / 2) + w0, dom, "V")
    g = GaugeData(A, ZERO, V, dom)
    return Family("constant-field", phys, (X1, X2, X3), g, params={"omega0": omega0, "w0": w0, "half": half})


# -- cartesian family -----------------------------------------------------------

@dataclass(frozen=True)
class CartesianParams:
    """f'' = a f^2 + b f + c, g'' = -a g^2 + d g + e, initial data at 0."""

    a: float
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0
    k: float = 0.0
    f0: float = 0.0
    fx0: float = 0.0
    g0: float = 0.0
    gy0: float = 0.0
    half_x: float = 1.0
    half_y: float = 1.0
    allow_degenerate: bool = False
    xlim: tuple | None = None
    ylim: tuple | None = None

    def limits(self):
        """(xlim, ylim): explicit limits if given, else the symmetric half-widths."""
        xl = tuple(self.xlim) if self.xlim is not None else (-self.half_x, self.half_x)
        yl = tuple(self.ylim) if self.ylim is not None else (-self.half_y, self.half_y)
        if not (xl[0] < 0 < xl[1] and yl[0] < 0 < yl[1]):
            raise ContractError(f"domain limits must contain the origin, got x {xl}, y {yl}")
        return xl, yl


def _is_constant_solution(v0, v0p, quad, lin, const):
    return v0p == 0 and quad * v0 * v0 + lin * v0 + const == 0


def build_cartesian_family(p: CartesianParams) -> Family:
    """Cartesian integral (canonical delta = 1) from the f and g equations.

    With delta = 1 the coefficient fields are k1 = -2 g_y, k2 = -2 f_x and
    ``m`` is twice the delta = 1/2 normalization; Omega and W do not change.
    A constant f or g (the f_x = 0 or g_y = 0 branch) raises
    ``DegenerateBranchError`` unless ``allow_degenerate`` is set.
    """
    if not p.allow_degenerate:
        if _is_constant_solution(p.f0, p.fx0, p.a, p.b, p.c):
            raise DegenerateBranchError("f is constant (f_x = 0): Omega = Omega(y), W = W(y); use a first-order integral")
        if _is_constant_solution(p.g0, p.gy0, -p.a, p.d, p.e):
            raise DegenerateBranchError("g is constant (g_y = 0): Omega = Omega(x), W = W(x); use a first-order integral")
    xl, yl = p.limits()
    try:
        f = odes.solve_fg_ode(p.a, p.b, p.c, p.f0, p.fx0, xl)
        g = odes.solve_fg_ode(-p.a, p.d, p.e, p.g0, p.gy0, yl)
    except BlowUpError as exc:
        raise ConstructionError(f"ODE solution blows up inside the domain at {exc.abscissa:.10g}: {exc}") from exc
    dom = Domain("rect", xlim=xl, ylim=yl)
    a, b, c, d, e, k = p.a, p.b, p.c, p.d, p.e, p.k

    def fd(X, Y, kx):
        s = f.series(X.value, X.order + kx)
        for _ in range(kx):
            s = s.diff()
        return s(X)

    def gd(X, Y, ky):
        s = g.series(Y.value, Y.order + ky)
        for _ in range(ky):
            s = s.diff()
        return s(Y)

    def Omega(X, Y):
        return fd(X, Y, 2) + gd(X, Y, 2)

    def W(X, Y):
        G = gd(X, Y, 0) - fd(X, Y, 0)
        return G * G * G * (a / 3) - G * G * ((b + d) / 2) + G * (c + k - e)

    def m(X, Y):
        F, G = fd(X, Y, 0), gd(X, Y, 0)
        half = (
            (G * G * G + F * F * F * 2 - G * F * F * 3) * (-a / 3)
            + (F * G - F * F) * b
            + (G * G - F * F) * (d / 2)
            + (G - F * 2) * c
            + G * e
            - F * k
        )
        return half * 2

    phys = PhysicalData(FuncField(Omega, dom, "Omega"), FuncField(W, dom, "W"), dom)
    k1 = FuncField(lambda X, Y: gd(X, Y, 1) * (-2.0), dom, "k1")
    k2 = FuncField(lambda X, Y: fd(X, Y, 1) * (-2.0), dom, "k2")
    I = QuadraticIntegral(0, 0, 0, 1.0, 0, 0, k1, k2, FuncField(m, dom, "m"), 0.0, "XC")
    A = FuncField(lambda X, Y: Y * fd(X, Y, 2) + gd(X, Y, 1), dom, "A")
    gauge = GaugeData(A, ZERO, _v_from_w(phys.W, A, ZERO, dom), dom)
    derived = {
        "E_f": f.reference,
        "E_g": g.reference,
        "E_f_drift": f.drift(401),
        "E_g_drift": g.drift(401),
    }
    return Family(
        "cartesian", phys, (I,), gauge, params=_asdict(p), derived=derived, extras={"f": f, "g": g}
    )


def _asdict(p):
    from dataclasses import asdict

    return asdict(p)


# -- polar families -------------------------------------------------------------

@dataclass(frozen=True)
class PolarCase1Params:
    C0: float = 0.0
    C1: float = 0.0
    C2: float = 0.0
    K1: float = 0.0
    K2: float = 0.0
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    rmin: float = 0.2
    rmax: float = 3.0


def build_polar_case1(p: PolarCase1Params) -> Family:
    """Omega = 6 a r^2 - b with the rotational integral of the first polar case.

    P = -f', Q = f + R with f = C0 + C1 cos + C2 sin, R = -C0 + 3a r^5 - b r^3
    + 3c r; m from the generic polar formula with m0 = 2 K1 f (the additive
    constant of the integral differs from the closed-form C_R by a constant).
    """
    if p.rmin <= 0:
        raise DomainError(f"polar family needs rmin > 0, got {p.rmin}")
    dom = annulus(p.rmin, p.rmax)
    C0, C1, C2, K1, a, b, c = p.C0, p.C1, p.C2, p.K1, p.a, p.b, p.c

    def parts(X, Y):
        r, co, si = _polar(X, Y)
        f = co * C1 + si * C2 + C0
        fpp = -(co * C1 + si * C2)
        fp = si * (-C1) + co * C2
        r2 = r * r
        R = r2 * r2 * r * (3 * a) - r2 * r * b + r * (3 * c) - C0
        S = 1.0 / r2 * (C0 / 2) - 4 * K1 + r2 * r * a - r * b - 1.0 / r * (3 * c)
        return r, co, si, f, fp, fpp, R, S

    def Omega(X, Y):
        return (X * X + Y * Y) * (6 * a) - b

    def W(X, Y):
        r, co, si = _polar(X, Y)
        r2 = r * r
        return (
            r * (co * C1 + si * C2) * (-2 * a)
            + r2 * r2 * (a * b / 2)
            - r2 * (3 * a * c)
            - r2 * r2 * r2 * (a * a)
        )

    def P(X, Y):
        return -parts(X, Y)[4]

    def Q(X, Y):
        _, _, _, f, _, _, R, _ = parts(X, Y)
        return f + R

    def m(X, Y):
        r, co, si, f, fp, fpp, R, S = parts(X, Y)
        inv4 = 1.0 / (r * r * 4)
        return (f * fpp + f * f + f * R * 2 + R * R) * inv4 - fpp * S * 0.5 + f * (2 * K1)

    Pf, Qf = FuncField(P, dom, "P"), FuncField(Q, dom, "Q")
    k1, k2 = _k_from_PQ(Pf, Qf, dom)
    phys = PhysicalData(FuncField(Omega, dom, "Omega"), FuncField(W, dom, "W"), dom)
    I = QuadraticIntegral(1.0, 0, 0, 0, 0, 0, k1, k2, FuncField(m, dom, "m"), 0.0, "XR")
    h = FuncProfile(lambda s: s * s * (-1.5 * a) + b / 2)
    gauge = symmetric_radial_gauge(h, phys.W, dom)
    return Family("polar-case1", phys, (I,), gauge, params=_asdict(p), P=Pf, Q=Qf)


def case1_closed_form_CR(p: PolarCase1Params, x, y, xd, yd):
    """The explicit C_R of the first polar case (C0 = K1 = 0 normalization)."""
    a, b, c, C1, C2 = p.a, p.b, p.c, p.C1, p.C2
    r = math.hypot(x, y)
    co, si = x / r, y / r
    Rt = 3 * a * r**5 - b * r**3 + 3 * c * r
    return (
        (x * yd - y * xd) ** 2
        + (-C2 - Rt * si) * xd
        + (C1 + Rt * co) * yd
        - 3 * b * c * r**2 / 2
        + 9 * a * c * r**4 / 2
        - 3 * a * b * r**6 / 2
        + 2 * C1 * a * r**3 * co
        - C1 * b * r * co
        + 2 * C2 * a * r**3 * si
        - C2 * b * r * si
        + 9 * a**2 * r**8 / 4
        + b**2 * r**4 / 4
        + 9 * c**2 / 4
    )


@dataclass(frozen=True)
class YSelector:
    """Which solution y(phi) of the y equation to use.

    kind: "quadruple-zero" (roots (y1, 0, 0)), "zero-simple" (y1, y2, 0),
    "double-top" (y1, y1, y3), or "numeric" (A, B or B2, K, y0, y0p on window).
    """

    kind: str
    roots: tuple = ()
    phi0: float = 0.0
    branch: int = 1
    A: float = 0.0
    B: float | None = None
    B2: float | None = None
    K: float | None = None
    y0: float = 1.0
    y0p: float = 0.0
    window: tuple | None = None


@dataclass(frozen=True)
class PolarCase2Params:
    selector: YSelector
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    C1: float = 0.0
    C2: float = 0.0
    hbar: float = 1.0
    rmin: float = 0.5
    rmax: float = 2.0
    philim: tuple | None = None


def _resolve_y(sel: YSelector):
    """Return (profile y(phi), A, B2, phi-window or None)."""
    if sel.kind == "numeric":
        if sel.window is None:
            raise ContractError("numeric y(phi) needs a phi window")
        B2 = sel.B2 if sel.B2 is not None else (sel.B or 0.0) ** 2
        try:
            sol = odes.solve_y_ode(sel.A, None, sel.K, sel.y0, sel.y0p, sel.window, t0=sel.window[0], B2=B2)
        except BlowUpError as exc:
            raise ConstructionError(f"y(phi) reaches 0 inside the window near phi = {exc.abscissa:.10g}") from exc
        return sol, sel.A, B2, tuple(sel.window)
    roots = odes.RootTriple(*sel.roots)
    sol = odes.special_solution(sel.kind, roots, sel.phi0, sel.branch)
    return sol, sol.A, sol.B2, sel.window


def _sector_angle(X, Y, lo):
    phi = jets.atan2(Y, X)
    if lo is None:
        return phi
    turns = math.floor((float(np.real(phi.value)) - lo) / (2 * math.pi))
    return phi - 2 * math.pi * turns


def build_polar_case2(p: PolarCase2Params) -> Family:
    """Second polar case: Omega = -(y'' + y)/(2 r^3) with y = f + a solving the y equation.

    W and m carry hbar explicitly; the integral commutes with H only at
    hbar = hbar_built. The constants a, b, c of u(r) cancel from every field
    and are only echoed.
    """
    if p.rmin <= 0:
        raise DomainError(f"polar family needs rmin > 0, got {p.rmin}")
    if p.hbar < 0:
        raise ContractError("hbar must be >= 0")
    ysol, A, B2, ywin = _resolve_y(p.selector)
    philim = p.philim if p.philim is not None else ywin
    lo = philim[0] if philim is not None else None
    dom = annulus(p.rmin, p.rmax, philim)
    hb2 = p.hbar**2
    C1, C2 = p.C1, p.C2

    # f + a must not vanish on the window
    if philim is not None:
        grid = np.linspace(*philim, 801)
    else:
        grid = np.linspace(-math.pi, math.pi, 801)
    yvals = np.array([ysol(t) for t in grid])
    ymin = float(np.min(np.abs(yvals)))
    if ymin < 1e-6 or np.any(np.sign(yvals[1:]) != np.sign(yvals[:-1])):
        raise ConstructionError(f"f + a = y(phi) vanishes on the phi window (min sampled |y| = {ymin:.3g})")

    def ycoeffs(phi_jet):
        """Jets of y, y', y'' and f'''/f' composed with the angle jet."""
        n = phi_jet.order
        t = float(np.real(phi_jet.value))
        s = ysol.series(t, n + 2)
        s1 = s.diff()
        s2 = s1.diff()
        s, s1, s2 = s.truncate(n), s1.truncate(n), s2.truncate(n)
        inv = 1.0 / s
        Gy = s1 * s1 * inv * inv * 2.0 - 3.0 - inv * inv * (4 * A) - inv * inv * inv * inv * (3 * (B2 - A * A))
        ratio = Gy - s2 * inv * 4.0
        return tuple(q(phi_jet) for q in (s, s1, s2, ratio))

    def parts(X, Y):
        r = jets.hypot(X, Y)
        return (r, *ycoeffs(_sector_angle(X, Y, lo)))

    def Omega(X, Y):
        r, y, y1, y2, _ = parts(X, Y)
        return -(y2 + y) / (r * r * r * 2.0)

    def W(X, Y):
        r, y, y1, y2, ratio = parts(X, Y)
        ir2 = 1.0 / (r * r)
        iy = 1.0 / y
        out = (
            ir2 * (1.0 + y2 * iy * 2.0 - y1 * y1 * iy * iy) * (hb2 / 8)
            - y * y * ir2 * ir2 * (ratio + 4.0) / 32.0
            - y2 * y * ir2 * ir2 * (3 / 32)
            - ir2 * iy * iy * (C1 / 2)
        )
        return out + C2

    def P(X, Y):
        return -parts(X, Y)[2]

    def Q(X, Y):
        return parts(X, Y)[1]

    def m(X, Y):
        r, y, y1, y2, _ = parts(X, Y)
        iy2 = 1.0 / (y * y)
        return (y * y2 + y * y) / (r * r * 4.0) - iy2 * C1 + (y * y2 * 2.0 - y1 * y1) * iy2 * (hb2 / 4)

    def A_pot(X, Y):
        r, y, y1, y2, _ = parts(X, Y)
        return Y * (y2 + y) / (r * r * r * 2.0)

    def B_pot(X, Y):
        r, y, y1, y2, _ = parts(X, Y)
        return -X * (y2 + y) / (r * r * r * 2.0)

    Pf, Qf = FuncField(P, dom, "P"), FuncField(Q, dom, "Q")
    k1, k2 = _k_from_PQ(Pf, Qf, dom)
    phys = PhysicalData(FuncField(Omega, dom, "Omega"), FuncField(W, dom, "W"), dom)
    I = QuadraticIntegral(1.0, 0, 0, 0, 0, 0, k1, k2, FuncField(m, dom, "m"), p.hbar, "XR")
    Af, Bf = FuncField(A_pot, dom, "A"), FuncField(B_pot, dom, "B")
    gauge = GaugeData(Af, Bf, _v_from_w(phys.W, Af, Bf, dom), dom)
    params = _asdict(p)
    derived = {"A_y": A, "B2_y": B2, "K_y": _k_of(p.selector, ysol)}
    if p.selector.kind != "numeric":
        derived["roots"] = list(p.selector.roots)
    return Family("polar-case2", phys, (I,), gauge, params=params, derived=derived, hbar_built=p.hbar, P=Pf, Q=Qf,
                  extras={"y": ysol})


def _k_of(sel, ysol):
    if sel.kind == "numeric":
        return ysol.reference
    return ysol.K


def build_polar_degenerate(q_r, w_r, rmin=0.2, rmax=3.0) -> Family:
    """P = 0, Q = Q(r), W = W(r): Omega = (r Q' - Q)/(2 r^3), m = Q^2/(4 r^2)."""
    if rmin <= 0:
        raise DomainError(f"polar family needs rmin > 0, got {rmin}")
    q_r, w_r = _profile(q_r), _profile(w_r)
    dom = annulus(rmin, rmax)

    def Qs(X, Y):
        r = jets.hypot(X, Y)
        s = q_r.series(float(r.value), r.order + 1)
        return r, s.truncate(r.order)(r), s.diff()(r)

    def Omega(X, Y):
        r, q, qd = Qs(X, Y)
        return (r * qd - q) / (r * r * r * 2.0)

    def m(X, Y):
        r, q, _ = Qs(X, Y)
        return q * q / (r * r * 4.0)

    def A_pot(X, Y):
        r, q, _ = Qs(X, Y)
        return Y * q / (r * r * r * 2.0)

    def B_pot(X, Y):
        r, q, _ = Qs(X, Y)
        return -X * q / (r * r * r * 2.0)

    Pf = ConstantField(0.0, dom)
    Qf = FuncField(lambda X, Y: Qs(X, Y)[1], dom, "Q")
    k1, k2 = _k_from_PQ(Pf, Qf, dom)
    phys = PhysicalData(FuncField(Omega, dom, "Omega"), _radial(w_r, dom, "W"), dom)
    I = QuadraticIntegral(1.0, 0, 0, 0, 0, 0, k1, k2, FuncField(m, dom, "m"), 0.0, "XR")
    Af, Bf = FuncField(A_pot, dom, "A"), FuncField(B_pot, dom, "B")
    gauge = GaugeData(Af, Bf, _v_from_w(phys.W, Af, Bf, dom), dom)
    return Family("polar-degenerate", phys, (I,), gauge, params={"rmin": rmin, "rmax": rmax}, P=Pf, Q=Qf)


__all__ = [
    "CONVENTION",
    "CartesianParams",
    "Family",
    "LinearIntegral",
    "PolarCase1Params",
    "PolarCase2Params",
    "QuadraticIntegral",
    "YSelector",
    "build_cartesian_family",
    "build_constant_field",
    "build_polar_case1",
    "build_polar_case2",
    "build_polar_degenerate",
    "build_radial_first_order",
    "build_translational_first_order",
    "case1_closed_form_CR",
]
