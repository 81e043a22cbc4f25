import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given
from hypothesis import strategies as st

from magint.errors import AccuracyError, ContractError
from magint.jets import Jet2
from magint.quantum import (
    GridSpec,
    bessel_ansatz_jet,
    bessel_j,
    bessel_j_derivatives,
    bessel_j_table,
    bessel_rsep_residual,
    landau_gauge,
    landau_levels,
    oscillator_reduction,
)
from magint.gauge import derive_physical
from magint.verify import hamiltonian_operator


@given(st.integers(-30, 30), st.floats(-120.0, 120.0, allow_nan=False))
def test_bessel_against_scipy(m, x):
    assert bessel_j(m, x) == pytest.approx(sp.jv(m, x), abs=5e-14)


def test_bessel_table_edges():
    np.testing.assert_array_equal(bessel_j_table(3, 0.0), [1, 0, 0, 0])
    np.testing.assert_allclose(bessel_j_table(40, 7.5), sp.jv(np.arange(41), 7.5), atol=1e-15)
    with pytest.raises(ContractError):
        bessel_j_table(3, -1.0)


def test_bessel_derivatives():
    for m, x in [(0, 1.3), (2, 4.0), (5, 0.7)]:
        d = bessel_j_derivatives(m, x, 3)
        for j in range(4):
            assert d[j] == pytest.approx(sp.jvp(m, x, j), abs=1e-14)


@pytest.mark.parametrize("omega0, hbar", [(1.0, 1.0), (3.0, 2.0)])
def test_landau_levels(omega0, hbar):
    spec = oscillator_reduction(omega0, 0.0, hbar, n=6)
    np.testing.assert_allclose(spec.eigenvalues, landau_levels(omega0, hbar, 6), atol=1e-6)
    np.testing.assert_allclose(spec.order_estimate, 2.0, atol=0.05)
    # the spacing is the ladder step hbar * Omega0
    np.testing.assert_allclose(np.diff(spec.eigenvalues), hbar * omega0, atol=1e-6)


def test_spectrum_independent_of_lambda():
    grid = GridSpec(centre=0.0, lengths=14.0)
    base = oscillator_reduction(1.0, 0.0, 1.0, grid)
    for lam in (0.5, -0.25):
        shifted = oscillator_reduction(1.0, lam, 1.0, grid)
        np.testing.assert_allclose(shifted.eigenvalues, base.eigenvalues, atol=1e-8)


def test_negative_field_uses_magnitude():
    spec = oscillator_reduction(-2.0, 0.3, 1.0, n=3)
    np.testing.assert_allclose(spec.eigenvalues, landau_levels(-2.0, 1.0, 3), atol=1e-6)


def test_narrow_grid_is_rejected():
    with pytest.raises(AccuracyError):
        oscillator_reduction(1.0, 0.0, 1.0, GridSpec(lengths=3.0))
    with pytest.raises(ContractError):
        oscillator_reduction(0.0)
    with pytest.raises(ContractError):
        GridSpec(points=3)


def test_landau_gauge_is_constant_field():
    p = derive_physical(landau_gauge(2.5))
    assert p.Omega(0.3, -1.0) == pytest.approx(2.5)
    assert p.W(0.3, -1.0) == pytest.approx(0.0, abs=1e-14)


def test_ansatz_jet_matches_direct_evaluation():
    om, m, k = 1.5, 2, 1.3
    x, y = 0.8, -0.6
    j = bessel_ansatz_jet(om, m, k, x, y, 2)
    r, phi = math.hypot(x, y), math.atan2(y, x)
    direct = lambda x, y: np.exp(-0.5j * om * x * y) * sp.jv(m, k * math.hypot(x, y)) * np.exp(  # noqa: E731
        1j * m * math.atan2(y, x)
    )
    assert j.value == pytest.approx(direct(x, y), abs=1e-14)
    h = 1e-5
    fx = (direct(x + h, y) - direct(x - h, y)) / (2 * h)
    assert j.partial(1, 0) == pytest.approx(fx, abs=1e-8)
    neg = bessel_ansatz_jet(om, -m, k, x, y, 0)
    assert neg.value == pytest.approx(
        np.exp(-0.5j * om * x * y) * sp.jv(-m, k * r) * np.exp(-1j * m * phi), abs=1e-14
    )


def test_residual_agrees_with_operator_route():
    om, m, E = 2.0, 2, 1.5
    x, y = 0.9, 0.5
    rep = bessel_rsep_residual(om, m, E, pts=[[x, y]])
    H = hamiltonian_operator(landau_gauge(om), 1.0, x, y, 0)
    psi = bessel_ansatz_jet(om, m, rep.k, x, y, 2)
    assert rep.residual[0] == pytest.approx(H.apply(psi).value - E * psi.value, abs=1e-13)


@pytest.mark.parametrize("m, omega0", [(0, 1.0), (2, 2.0)])
def test_ansatz_defect_is_quadratic_potential(m, omega0):
    """The ansatz misses exactly the (Omega0^2 r^2 / 8) Psi term."""
    pts = np.array([[0.7, 0.4], [-1.2, 0.9], [2.0, -0.3], [0.1, -1.5]])
    rep = bessel_rsep_residual(omega0, m, 1.5, pts=pts)
    for (x, y), res in zip(pts, rep.residual):
        psi = bessel_ansatz_jet(omega0, m, rep.k, x, y, 0).value
        assert res == pytest.approx(omega0**2 * (x * x + y * y) / 8 * psi, abs=1e-13)


def test_broken_relation_is_worse():
    pts = np.array([[0.7, 0.4], [-1.2, 0.9], [1.5, 1.0]])
    ok = bessel_rsep_residual(1.0, 0, 1.5, pts=pts)
    broken = bessel_rsep_residual(1.0, 0, 1.5, pts=pts, k2=2 * 1.5 + 1.0)
    assert broken.max_relative > 1e-3
    assert broken.max_relative > ok.max_relative


def test_ansatz_contracts():
    with pytest.raises(ContractError):
        bessel_rsep_residual(1.0, 0, 1.0, hbar=2.0, pts=[[1, 0]])
    with pytest.raises(ContractError):
        bessel_rsep_residual(1.0, 0.5, 1.0, pts=[[1, 0]])
    with pytest.raises(ContractError):
        bessel_rsep_residual(1.0, 0, -3.0, pts=[[1, 0]])
    with pytest.raises(ContractError):
        bessel_ansatz_jet(1.0, 0, 1.0, 0.0, 0.0, 1)


def test_spectrum_dict():
    d = oscillator_reduction(1.0, n=2).to_dict()
    assert d["boundary"] == "dirichlet" and len(d["eigenvalues"]) == 2
    assert isinstance(Jet2.constant(1.0, 0).value, float)
