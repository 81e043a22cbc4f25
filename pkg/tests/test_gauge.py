import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from magint.fields import ZERO, ConstantField, ExprField, FuncField, annulus, fd_jet
from magint.gauge import (
    GaugeData,
    PhysicalData,
    apply_gauge_transform,
    derive_physical,
    fix_gauge,
)


def _poly(coeffs):
    """Cubic polynomial in x, y from 10 coefficients."""
    mons = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]

    def fn(X, Y):
        out = 0.0
        for c, (a, b) in zip(coeffs, mons):
            out = out + (X**a) * (Y**b) * c
        return out

    return FuncField(fn)


def test_landau_potentials():
    om = 1.7
    g = GaugeData(FuncField(lambda X, Y: Y * om), ZERO, FuncField(lambda X, Y: Y * Y * (om * om / 2)))
    p = derive_physical(g)
    for x, y in [(0.3, -1.0), (2.0, 0.5)]:
        assert p.Omega(x, y) == pytest.approx(om)
        assert p.W(x, y) == pytest.approx(0.0, abs=1e-14)


def test_free_motion():
    p = derive_physical(GaugeData(ZERO, ZERO, ZERO))
    assert p.Omega(1.0, 2.0) == 0 and p.W(1.0, 2.0) == 0


def test_hand_differentiated_example():
    g = GaugeData(ExprField(["*", "x", "x", "y"]), ExprField(["*", "x", "y", "y"]), ZERO)
    p = derive_physical(g)
    assert p.Omega(1.0, 2.0) == pytest.approx(-3.0)
    assert p.W(1.0, 2.0) == pytest.approx(-10.0)
    # FD oracle on the curl
    A, B = g.A, g.B
    fdA = fd_jet(A, 1.0, 2.0, 1, 1e-3)
    fdB = fd_jet(B, 1.0, 2.0, 1, 1e-3)
    assert fdA.partial(0, 1) - fdB.partial(1, 0) == pytest.approx(-3.0, abs=1e-9)


def test_identity_gauge():
    g = GaugeData(ExprField(["sin", "y"]), ExprField("x"), ExprField(["*", "x", "y"]))
    h = apply_gauge_transform(g, ConstantField(0.0))
    for f0, f1 in [(g.A, h.A), (g.B, h.B), (g.V, h.V)]:
        assert f1(0.3, 0.7) == pytest.approx(f0(0.3, 0.7))


def test_landau_to_symmetric():
    om = 2.0
    g = GaugeData(FuncField(lambda X, Y: Y * om), ZERO, FuncField(lambda X, Y: Y * Y * (om * om / 2)))
    h = apply_gauge_transform(g, FuncField(lambda X, Y: X * Y * (-om / 2)))
    x, y = 0.4, -1.3
    assert h.A(x, y) == pytest.approx(om * y / 2)
    assert h.B(x, y) == pytest.approx(-om * x / 2)
    p = derive_physical(h)
    assert p.Omega(x, y) == pytest.approx(om)
    assert p.W(x, y) == pytest.approx(0.0, abs=1e-13)


coef = st.floats(-1.0, 1.0, allow_nan=False)


@given(
    st.lists(coef, min_size=10, max_size=10),
    st.lists(coef, min_size=10, max_size=10),
    st.lists(coef, min_size=10, max_size=10),
    st.lists(coef, min_size=10, max_size=10),
    st.integers(0, 2**32 - 1),
)
def test_gauge_invariance(ca, cb, cv, cphi, seed):
    g = GaugeData(_poly(ca), _poly(cb), _poly(cv))
    p0 = derive_physical(g)
    p1 = derive_physical(apply_gauge_transform(g, _poly(cphi)))
    rng = np.random.default_rng(seed)
    for x, y in rng.uniform(-1, 1, size=(20, 2)):
        j0, j1 = p0.Omega.jet(x, y, 1), p1.Omega.jet(x, y, 1)
        np.testing.assert_allclose(j1.partials, j0.partials, atol=1e-12 * (1 + np.max(np.abs(j0.partials))))
        w0, w1 = p0.W.jet(x, y, 1), p1.W.jet(x, y, 1)
        np.testing.assert_allclose(w1.partials, w0.partials, atol=1e-12 * (1 + np.max(np.abs(w0.partials))))


def test_fix_gauge_constant_landau():
    om = 1.5
    W = ExprField(["*", 0.3, "x"])
    g = fix_gauge(PhysicalData(ConstantField(om), W), "landau-x")
    for x, y in [(0.2, 0.7), (-1.0, -2.0)]:
        assert g.A(x, y) == pytest.approx(om * y, abs=1e-12)
        assert g.B(x, y) == 0
        assert g.V(x, y) == pytest.approx(0.3 * x + om * om * y * y / 2, abs=1e-12)


def test_fix_gauge_zero_field():
    W = ExprField(["*", "x", "y"])
    g = fix_gauge(PhysicalData(ConstantField(0.0), W), "landau-x")
    assert g.A(1, 2) == 0 and g.B(1, 2) == 0 and g.V(1, 2) == 2


def test_fix_gauge_landau_roundtrip_nonuniform():
    p = PhysicalData(ExprField(["+", ["cos", "x"], ["*", "x", "y"]]), ExprField(["sin", "y"]))
    q = derive_physical(fix_gauge(p, "landau-x", ref=0.0))
    for x, y in [(0.5, 0.8), (-0.3, 1.4)]:
        assert q.Omega(x, y) == pytest.approx(p.Omega(x, y), abs=1e-10)
        assert q.W(x, y) == pytest.approx(p.W(x, y), abs=1e-10)


def test_fix_gauge_symmetric_radial():
    a, b = 0.5, 1.0
    dom = annulus(0.2, 2.0)
    Om = ExprField(["-", ["*", 6 * a, ["^", "r", 2]], b], domain=dom)
    p = PhysicalData(Om, ExprField(["^", "r", 2], domain=dom), dom)
    g = fix_gauge(p, "symmetric-radial", ref=0.0)
    q = derive_physical(g)
    for x, y in [(0.5, 0.4), (-1.2, 0.9), (0.1, -1.5)]:
        assert q.Omega(x, y) == pytest.approx(p.Omega(x, y), abs=1e-10)
        assert q.W(x, y) == pytest.approx(p.W(x, y), abs=1e-10)
    # quadrature starts at rmin, so h(rho) = -(1/rho^2)[1.5 a s^4 - b s^2/2] from 0.2 to rho
    rho = 1.1
    F = lambda s: 1.5 * a * s**4 - b * s * s / 2  # noqa: E731
    h = -(F(rho) - F(0.2)) / rho**2
    assert g.B(rho, 0.0) == pytest.approx(rho * h, abs=1e-10)
    assert math.isclose(g.A(0.0, rho), -rho * h, abs_tol=1e-10)
