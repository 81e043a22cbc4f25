import dataclasses

import numpy as np
import pytest

from magint import jets
from magint.dynamics import integrate
from magint.errors import ContractError
from magint.families import (
    LinearIntegral,
    PolarCase1Params,
    PolarCase2Params,
    YSelector,
    build_constant_field,
    build_polar_case1,
    build_polar_case2,
    build_translational_first_order,
)
from magint.fields import ZERO, ConstantField, ExprField, FuncField, FuncProfile, annulus, fd_jet, rect
from magint.gauge import PhysicalData
from magint.verify import (
    TestFunction,
    algebra_check,
    default_test_functions,
    grid_points,
    hbar_affinity,
    integral_operator,
    parabolic_ansatz_fit,
    poisson_bracket,
    polar_cartesian_gap,
    quantum_commutator_residual,
    random_phase_states,
    residual_first_order,
    residual_parabolic,
    residual_polar_form,
    residual_second_order,
    sample_points,
)

CASE2 = PolarCase2Params(YSelector("zero-simple", roots=(2.0, 1.0, 0.0)), hbar=1.0, rmin=0.5, rmax=2.0)


@pytest.fixture(scope="module")
def case2():
    return build_polar_case2(CASE2)


@pytest.fixture(scope="module")
def const_field():
    return build_constant_field(1.0)


def test_sample_points_respect_domain_and_seed():
    d = annulus(0.5, 2.0, (0.1, 1.0))
    a = sample_points(d, 200, seed=4)
    b = sample_points(d, 200, seed=4)
    np.testing.assert_array_equal(a, b)
    r, phi = np.hypot(*a.T), np.arctan2(a[:, 1], a[:, 0])
    assert np.all((r >= 0.5 + 0.05 * 1.5 - 1e-12) & (r <= 2.0 - 0.05 * 1.5 + 1e-12))
    assert np.all((phi >= 0.1 + 0.045 - 1e-12) & (phi <= 1.0 - 0.045 + 1e-12))
    g = grid_points(rect(1.0, 2.0), 10, 10)
    assert g.shape == (100, 2) and np.max(np.abs(g[:, 1])) == pytest.approx(1.8)


def test_bracket_with_itself_is_zero(case2):
    for s in random_phase_states(case2.domain, 10, seed=1):
        assert poisson_bracket(case2.gauge, "H", s) == 0.0


def test_translation_integral_bracket(const_field):
    X2 = const_field.integrals[1]
    for s in random_phase_states(const_field.domain, 50, seed=2, pscale=2.0):
        assert abs(poisson_bracket(const_field.gauge, X2, s)) < 1e-12


def test_corrupted_integral_leaks(const_field):
    g = const_field.gauge
    X2 = const_field.integrals[1]
    bad = dataclasses.replace(X2, m=X2.m + FuncField(lambda X, Y: X * 0.01))
    for s in random_phase_states(const_field.domain, 10, seed=3):
        x, y, px, py = s
        dH_dpx = px + g.A(x, y)
        assert poisson_bracket(g, bad, s) == pytest.approx(0.01 * dH_dpx, abs=1e-12)


def test_first_order_residuals():
    fam = build_translational_first_order(FuncProfile(jets.cos), FuncProfile(jets.sin))
    rep = residual_first_order(fam.physical, fam.integral, sample_points(fam.domain, 100))
    assert rep.passed(1e-10)
    # generic field: P1 is not an integral
    p = PhysicalData(ExprField(["+", "x", "y"]), ZERO)
    P1 = LinearIntegral(0.0, 1.0, 0.0, ZERO, "P1")
    rep = residual_first_order(p, P1, sample_points(rect(1.0), 30))
    assert rep.max_abs["W"] == 0.0
    assert rep.max_abs["m_y"] > 0.1
    assert not rep.passed(1e-8)
    with pytest.raises(ContractError):
        residual_first_order(p, build_polar_case1(PolarCase1Params()).integral, [])


def test_report_skips_points_outside_domain(case2):
    rep = residual_polar_form(case2.physical, case2.P, case2.Q, case2.integral.m, 1.0, [[1.0, 0.5], [5.0, 0.0]])
    assert len(rep.points) == 1 and len(rep.skipped) == 1
    assert not rep.passed(1.0)
    d = rep.to_dict()
    assert d["npoints"] == 1 and d["skipped"] == [[5.0, 0.0]]


def test_polar_and_cartesian_forms_agree(case2):
    pts = sample_points(case2.domain, 60, seed=8)
    for hbar in (1.0, 0.0):
        cart = residual_second_order(case2.physical, case2.integral, hbar, pts)
        pol = residual_polar_form(case2.physical, case2.P, case2.Q, case2.integral.m, hbar, pts)
        assert polar_cartesian_gap(cart, pol) < 1e-8


def test_degenerate_polar_first_pair_vanishes():
    from magint.families import build_polar_degenerate

    fam = build_polar_degenerate(FuncProfile(lambda r: r * r * r), FuncProfile(lambda r: 1.0 / r))
    rep = residual_polar_form(fam.physical, fam.P, fam.Q, fam.integral.m, 0.0, sample_points(fam.domain, 40))
    assert rep.max_abs["P_r"] == 0.0
    assert rep.max_abs["P+Q_phi"] < 1e-14


def test_hbar_affinity(case2):
    x, y = 1.1, 0.4

    def r(h):
        rep = residual_polar_form(case2.physical, case2.P, case2.Q, case2.integral.m, h, [[x, y]])
        return rep.column("hbar_potential")[0]

    c0, c1, defect, root = hbar_affinity(r, (0.0, 0.5, 1.0))
    assert abs(c1) > 1e-3
    assert defect < 1e-10 * max(1.0, abs(c0))
    assert root == pytest.approx(1.0, abs=1e-6)


def test_parabolic_constant_field_oracle():
    p = PhysicalData(ConstantField(1.5), ConstantField(0.7))
    pts = grid_points(rect(1.0), 6, 6)
    fit = parabolic_ansatz_fit(p, 0.3, 1.0, pts, degree=3)
    assert fit.residual_max < 1e-10
    rep = residual_parabolic(p, 0.3, fit.k1, fit.k2, fit.m, 1.0, sample_points(rect(1.0), 40, seed=5))
    assert rep.worst < 1e-10
    assert "exploratory" in fit.notes


def test_parabolic_trivial_case():
    p = PhysicalData(ZERO, ConstantField(2.0))
    rep = residual_parabolic(p, 0.0, ZERO, ZERO, ZERO, 1.0, grid_points(rect(1.0), 4, 4))
    assert rep.worst == 0.0


def test_parabolic_no_go_for_case1_field():
    fam = build_polar_case1(PolarCase1Params(a=1.0, b=2.0, C1=1.0))
    pts = sample_points(fam.domain, 150, seed=6)
    fit = parabolic_ansatz_fit(fam.physical, 0.0, 0.0, pts, degree=6)
    assert fit.residual_max > 1e-3


def test_commutator_of_translation(const_field):
    pts = sample_points(rect(1.0), 20, seed=7)
    psi = TestFunction(0.0, 0.0, 1.0)
    rep = quantum_commutator_residual(const_field.gauge, const_field.integrals[1], 1.0, psi, pts)
    assert len(rep.residual) == 20
    assert rep.max_relative < 1e-10


def test_commutator_with_itself(case2):
    pts = sample_points(case2.domain, 10, seed=1)
    rep = quantum_commutator_residual(case2.gauge, "H", 1.0, TestFunction(1.0, 0.5, 0.5, 1, 1), pts)
    assert np.max(np.abs(rep.residual)) == 0.0


def test_commutator_sees_hbar_gap(case2):
    pts = sample_points(case2.domain, 15, seed=2)
    psi = TestFunction(1.0, 0.5, 0.5, 2, 1, kx=0.3)
    good = quantum_commutator_residual(case2.gauge, case2.integral, 1.0, psi, pts)
    assert good.max_relative < 1e-8
    wrong = build_polar_case2(dataclasses.replace(CASE2, hbar=0.0))
    bad = quantum_commutator_residual(wrong.gauge, wrong.integral, 1.0, psi, pts)
    assert bad.max_relative > 1e-4


def test_commutator_needs_order_four(case2):
    class Shallow:
        def jet(self, x, y, order):
            return jets.Jet2.variable(x, "x", 2)

    with pytest.raises(ContractError):
        quantum_commutator_residual(case2.gauge, case2.integral, 1.0, Shallow(), [[1.0, 0.5]])


def test_algebra(const_field):
    rep = algebra_check(const_field, 1.0)
    assert rep.passed(1e-10), rep.relative
    shifted = build_constant_field(2.0, 3.0)
    assert algebra_check(shifted, 1.0).passed(1e-10)
    with pytest.raises(ContractError):
        algebra_check(build_polar_case2(CASE2), 1.0)


def test_commutators_linear_in_hbar(const_field):
    g = const_field.gauge
    X1, X2, _ = const_field.integrals
    psi = default_test_functions()[3]
    x, y = 0.2, -0.3

    def comm(h):
        ps = psi.jet(x, y, 4)
        o1 = lambda n: integral_operator(g, X1, h, x, y, n)  # noqa: E731
        o2 = lambda n: integral_operator(g, X2, h, x, y, n)  # noqa: E731
        a = o1(0).apply(o2(2).apply(ps)).value
        b = o2(0).apply(o1(2).apply(ps)).value
        return a - b

    c1, c2 = comm(0.5), comm(1.0)
    assert abs(c1) > 1e-3
    assert c2 == pytest.approx(2 * c1, rel=1e-12)
    assert abs(comm(0.0)) < 1e-14


def _richardson(field, x, y, order, h):
    a = fd_jet(field, x, y, order, h).partials
    b = fd_jet(field, x, y, order, h / 2).partials
    return (16 * b - a) / 15


def test_jets_match_richardson_fd(case2):
    pts = sample_points(case2.domain, 5, seed=3)
    for f in (case2.physical.Omega, case2.physical.W, case2.integral.k1, case2.integral.m):
        for x, y in pts:
            exact = f.jet(x, y, 2).partials
            approx = _richardson(f, x, y, 2, 2e-2)
            np.testing.assert_allclose(approx, exact, rtol=1e-6, atol=1e-6 * max(1.0, np.max(np.abs(exact))))


def test_three_routes_agree():
    fam = build_translational_first_order(FuncProfile(jets.cos), FuncProfile(jets.sin))
    I = fam.integral
    bad = dataclasses.replace(I, m=I.m + FuncField(lambda X, Y: X * 0.05))
    states = random_phase_states(fam.domain, 10, seed=9)
    pts = sample_points(fam.domain, 30)
    s0 = (0.2, 0.1, 0.5, 0.3)
    verdicts = {}
    for name, J in (("good", I), ("bad", bad)):
        br = max(abs(poisson_bracket(fam.gauge, J, s)) for s in states) < 1e-10
        res = residual_first_order(fam.physical, J, pts).passed(1e-10)
        tr = integrate(s0, fam.gauge, 3.0, integrals=[("C", J)])
        verdicts[name] = (br, res, tr.drift["C"] < 1e-7)
    assert verdicts == {"good": (True, True, True), "bad": (False, False, False)}
