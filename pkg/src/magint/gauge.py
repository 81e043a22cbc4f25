"""Gauge data (A, B, V), physical data (Omega, W), and conversions between them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from . import jets
from .errors import ContractError, DomainError, QuadratureError
from .fields import (
    COMPOSITE,
    PLANE,
    Antiderivative,
    ConstantField,
    DerivativeField,
    Domain,
    FuncProfile,
    Profile1D,
    ScalarField2D,
    ZERO,
    as_field,
)
from .jets import Jet2, ncoef, monomials

QUAD_EPSABS = 1e-12


@dataclass(frozen=True)
class GaugeData:
    """Vector potential (A, B) and scalar potential V of the Hamiltonian."""

    A: ScalarField2D
    B: ScalarField2D
    V: ScalarField2D
    domain: Domain = PLANE


@dataclass(frozen=True)
class PhysicalData:
    """Magnetic field Omega = A_y - B_x and effective potential W = V - (A^2+B^2)/2."""

    Omega: ScalarField2D
    W: ScalarField2D
    domain: Domain = PLANE


class _CurlField(ScalarField2D):
    provenance = COMPOSITE

    def __init__(self, A, B, domain):
        self.A, self.B, self.domain = A, B, domain

    def _jet(self, x, y, order):
        return self.A.jet(x, y, order + 1).dy() - self.B.jet(x, y, order + 1).dx()


class _EffectivePotential(ScalarField2D):
    provenance = COMPOSITE

    def __init__(self, g):
        self.g = g
        self.domain = g.domain

    def _jet(self, x, y, order):
        A = self.g.A.jet(x, y, order)
        B = self.g.B.jet(x, y, order)
        return self.g.V.jet(x, y, order) - (A * A + B * B) * 0.5


def derive_physical(g: GaugeData) -> PhysicalData:
    return PhysicalData(_CurlField(g.A, g.B, g.domain), _EffectivePotential(g), g.domain)


class _TransformedV(ScalarField2D):
    provenance = COMPOSITE

    def __init__(self, g, phi):
        self.g, self.phi = g, phi
        self.domain = g.domain

    def _jet(self, x, y, order):
        p = self.phi.jet(x, y, order + 1)
        px, py = p.dx(), p.dy()
        return (
            self.g.V.jet(x, y, order)
            + self.g.A.jet(x, y, order) * px
            + self.g.B.jet(x, y, order) * py
            + (px * px + py * py) * 0.5
        )


def apply_gauge_transform(g: GaugeData, phi) -> GaugeData:
    """A -> A + phi_x, B -> B + phi_y, V -> V + A phi_x + B phi_y + |grad phi|^2 / 2."""
    phi = as_field(phi)
    if phi.domain is not PLANE and g.domain is not PLANE and phi.domain != g.domain:
        raise DomainError("gauge function and gauge data have different domains")
    return GaugeData(
        g.A + DerivativeField(phi, 1, 0),
        g.B + DerivativeField(phi, 0, 1),
        _TransformedV(g, phi),
        g.domain,
    )


# -- gauge fixing ------------------------------------------------------------

class _LandauA(ScalarField2D):
    """A(x, y) = integral_{y_ref}^{y} Omega(x, s) ds, so that A_y = Omega with B = 0."""

    provenance = COMPOSITE

    def __init__(self, Omega, y_ref, domain):
        self.Omega = Omega
        self.y_ref = y_ref
        self.domain = domain
        self._xpartials = lru_cache(maxsize=8192)(self._integrate)

    def _integrate(self, x, y, n):
        def integrand(s):
            j = self.Omega.jet(x, s, n)
            return np.array([j.partial(k, 0) for k in range(n + 1)])

        val, err = integrate.quad_vec(integrand, self.y_ref, y, epsabs=QUAD_EPSABS, epsrel=1e-13)
        if not np.all(np.isfinite(val)) or err > 1e3 * QUAD_EPSABS + 1e-10 * np.max(np.abs(val)):
            raise QuadratureError(f"Landau-gauge quadrature failed at ({x}, {y}); error estimate {err}")
        return val

    def _jet(self, x, y, order):
        xs = self._xpartials(x, y, order)
        partials = np.empty(ncoef(order))
        if order >= 1:
            om = self.Omega.jet(x, y, order - 1)
        for k, (a, b) in enumerate(monomials(order)):
            partials[k] = xs[a] if b == 0 else om.partial(a, b - 1)
        return Jet2.from_partials(partials, order)


class _AxisProfile(Profile1D):
    """s -> Omega(s, 0), read off the +x axis of a radially symmetric field."""

    def __init__(self, Omega):
        self.Omega = Omega

    def _series(self, t, n):
        return self.Omega.jet(t, 0.0, n).along_x()


class _SymmetricRadialH(Profile1D):
    """h(rho) = -(1/rho^2) integral_{base}^{rho} s Omega(s) ds."""

    def __init__(self, omega_profile, base):
        weighted = FuncProfile(lambda s: s * omega_profile.compose(s))
        weighted.window = (base, np.inf)
        self.inner = Antiderivative(weighted, base=base, epsabs=QUAD_EPSABS)

    def _series(self, t, n):
        if t <= 0:
            raise DomainError("symmetric-radial gauge is singular at rho = 0")
        rho = jets.Series.variable(t, n)
        return -self.inner.series(t, n) / (rho * rho)


def symmetric_radial_gauge(h: Profile1D, W: ScalarField2D, domain=PLANE) -> GaugeData:
    """A = -y h(rho), B = x h(rho), V = W + rho^2 h^2 / 2."""
    from .fields import FuncField

    def hjet(X, Y):
        return h.compose(jets.hypot(X, Y))

    A = FuncField(lambda X, Y: -Y * hjet(X, Y), domain, "A_sym")
    B = FuncField(lambda X, Y: X * hjet(X, Y), domain, "B_sym")
    return GaugeData(A, B, _VFromW(W, A, B, domain), domain)


class _VFromW(ScalarField2D):
    provenance = COMPOSITE

    def __init__(self, W, A, B, domain):
        self.W, self.A, self.B, self.domain = W, A, B, domain

    def _jet(self, x, y, order):
        A = self.A.jet(x, y, order)
        B = self.B.jet(x, y, order)
        return self.W.jet(x, y, order) + (A * A + B * B) * 0.5


def gauge_from_vector_potential(p: PhysicalData, A, B) -> GaugeData:
    """Complete (A, B) to gauge data by V = W + (A^2 + B^2)/2."""
    return GaugeData(A, B, _VFromW(p.W, A, B, p.domain), p.domain)


def fix_gauge(p: PhysicalData, kind: str, ref: float = 0.0) -> GaugeData:
    """Reconstruct potentials for physical data.

    ``kind`` is ``"landau-x"`` (B = 0, A = integral of Omega along y from
    ``ref``) or ``"symmetric-radial"`` (A = -y h, B = x h with Omega read off
    the +x axis; the radial integral starts at ``ref``, or at the domain's
    inner radius if larger).
    """
    if isinstance(p.Omega, ConstantField) and p.Omega.value == 0:
        return GaugeData(ZERO, ZERO, p.W, p.domain)
    if kind == "landau-x":
        A = _LandauA(p.Omega, ref, p.domain)
        return gauge_from_vector_potential(p, A, ZERO)
    if kind == "symmetric-radial":
        base = max(ref, p.domain.rmin if p.domain.kind == "annulus" else 0.0)
        h = _SymmetricRadialH(_AxisProfile(p.Omega), base)
        return symmetric_radial_gauge(h, p.W, p.domain)
    raise ContractError(f"unknown gauge-fixing rule {kind!r}")


__all__ = [
    "GaugeData",
    "PhysicalData",
    "apply_gauge_transform",
    "derive_physical",
    "fix_gauge",
    "gauge_from_vector_potential",
    "symmetric_radial_gauge",
]
