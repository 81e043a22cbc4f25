import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from magint import _jetcore_py, jets
from magint.fields import FuncField, fd_jet
from magint.jets import Jet2, Series, gidx, ncoef

coord = st.floats(-1.5, 1.5, allow_nan=False)
orders = st.integers(0, 4)


def test_layout_sizes():
    for n in range(7):
        assert ncoef(n) == len(jets.monomials(n)) == (n + 1) * (n + 2) // 2
    assert gidx(0, 0) == 0 and gidx(1, 0) == 1 and gidx(0, 1) == 2 and gidx(2, 0) == 3


def test_polynomial_partials_exact():
    X, Y = Jet2.variable(1.0, "x", 3), Jet2.variable(2.0, "y", 3)
    f = X * X * Y + Y * Y * Y * 2.0
    assert f.value == pytest.approx(1 * 2 + 16)
    assert f.partial(1, 0) == pytest.approx(2 * 1 * 2)
    assert f.partial(0, 1) == pytest.approx(1 + 6 * 4)
    assert f.partial(2, 0) == pytest.approx(4)
    assert f.partial(1, 1) == pytest.approx(2)
    assert f.partial(0, 3) == pytest.approx(12)
    assert f.partial(2, 1) == pytest.approx(2)
    assert f.partial(3, 0) == 0


def test_elementary_functions_against_closed_form():
    x0 = 0.7
    s = Series.variable(x0, 5)
    for fn, derivs in [
        (jets.exp, [math.exp(x0)] * 6),
        (jets.sin, [math.sin(x0), math.cos(x0), -math.sin(x0), -math.cos(x0), math.sin(x0), math.cos(x0)]),
        (jets.log, [math.log(x0), 1 / x0, -1 / x0**2, 2 / x0**3, -6 / x0**4, 24 / x0**5]),
    ]:
        out = fn(s)
        for k, d in enumerate(derivs):
            assert out.derivative(k) == pytest.approx(d, rel=1e-13)


def test_fractional_power_and_reciprocal():
    s = Series.variable(2.0, 3)
    r = s**0.5
    assert r.derivative(1) == pytest.approx(0.5 * 2**-0.5)
    assert r.derivative(2) == pytest.approx(-0.25 * 2**-1.5)
    inv = 1.0 / s
    assert inv.derivative(3) == pytest.approx(-6 / 2**4)
    with pytest.raises(ZeroDivisionError):
        Series.constant(0.0, 2).reciprocal()


def test_atan2_branch_and_derivative():
    X, Y = Jet2.variable(-1.0, "x", 2), Jet2.variable(1e-3, "y", 2)
    phi = jets.atan2(Y, X)
    assert phi.value == pytest.approx(math.atan2(1e-3, -1.0))
    r2 = 1.0 + 1e-6
    assert phi.partial(1, 0) == pytest.approx(-1e-3 / r2)
    assert phi.partial(0, 1) == pytest.approx(-1.0 / r2)
    with pytest.raises(ZeroDivisionError):
        jets.atan2(Jet2.variable(0.0, "y", 1), Jet2.variable(0.0, "x", 1))


@given(coord, coord, orders)
def test_product_rule(x, y, n):
    X, Y = Jet2.variable(x, "x", n), Jet2.variable(y, "y", n)
    f = jets.sin(X * Y) + X
    g = jets.exp(Y * 0.5) * X
    lhs = (f * g).partials
    if n >= 1:
        fx, gx = f.partial(1, 0), g.partial(1, 0)
        assert (f * g).partial(1, 0) == pytest.approx(fx * g.value + f.value * gx, abs=1e-12)
    assert lhs[0] == pytest.approx(f.value * g.value)


@given(coord, coord)
def test_exp_log_roundtrip(x, y):
    X, Y = Jet2.variable(x, "x", 4), Jet2.variable(y, "y", 4)
    u = X * X + Y * Y + 1.0
    back = jets.exp(jets.log(u))
    np.testing.assert_allclose(back.c, u.c, atol=1e-12, rtol=1e-12)


@given(coord, coord)
def test_jets_match_finite_differences(x, y):
    """Order-1 jets agree with central differences; the O(h^4) error drops ~16x when h halves."""

    def fn(X, Y):
        return jets.sin(X * 2.0) * jets.exp(Y * X * 0.3) + Y * Y * Y

    f = FuncField(fn)
    exact = f.jet(x, y, 1)
    e1 = abs(fd_jet(f, x, y, 1, 1e-2).partial(1, 0) - exact.partial(1, 0))
    e2 = abs(fd_jet(f, x, y, 1, 5e-3).partial(1, 0) - exact.partial(1, 0))
    assert e1 < 1e-7
    assert e2 <= e1 / 8 + 1e-11


def test_backends_agree():
    """Compiled kernels against the numpy fallback on random coefficients."""
    _kernels = pytest.importorskip("magint._jetcore")

    rng = np.random.default_rng(3)
    for n in range(5):
        m = ncoef(n)
        p, q = rng.normal(size=m), rng.normal(size=m)
        np.testing.assert_allclose(_kernels.mul2(p, q, n), _jetcore_py.mul2(p, q, n), rtol=1e-14, atol=1e-14)
        d = rng.normal(size=m)
        d[0] = 0
        g = rng.normal(size=n + 1)
        np.testing.assert_allclose(_kernels.horner2(g, d, n), _jetcore_py.horner2(g, d, n), rtol=1e-13, atol=1e-13)
        p1, q1 = rng.normal(size=n + 1), rng.normal(size=n + 1)
        np.testing.assert_allclose(_kernels.mul1(p1, q1, n), _jetcore_py.mul1(p1, q1, n), rtol=1e-14, atol=1e-14)
        pc = p + 1j * rng.normal(size=m)
        np.testing.assert_allclose(_kernels.mul2(pc, pc, n), _jetcore_py.mul2(pc, pc, n), rtol=1e-14, atol=1e-14)


def test_mixed_order_truncates():
    a = Jet2.variable(1.0, "x", 4)
    b = Jet2.variable(1.0, "y", 2)
    assert (a * b).order == 2
    assert (a + b).order == 2
    with pytest.raises(ValueError):
        b.truncate(3)


def test_order_limit():
    with pytest.raises(ValueError):
        Jet2.variable(0.0, "x", jets.MAX_ORDER + 1)
