import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from magint.errors import BlowUpError, ComplexBError, ContractError, PatternError, SingularityError
from magint.odes import (
    DOUBLE_TOP,
    QUADRUPLE_ZERO,
    ZERO_SIMPLE,
    ConsistencyWarning,
    RootTriple,
    constants_to_roots,
    eval_T,
    roots_to_constants,
    solve_fg_ode,
    solve_y_ode,
    special_solution,
)


def test_linear_oscillator_limit():
    sol = solve_fg_ode(0.0, -1.0, 0.0, 1.0, 0.0, (0.0, 10.0))
    assert sol.drift() < 1e-10
    ts, v, vp = sol.grid(101)
    np.testing.assert_allclose(v, np.cos(ts), atol=1e-9)
    np.testing.assert_allclose(vp, -np.sin(ts), atol=1e-9)


def test_polynomial_case_exact():
    sol = solve_fg_ode(0.0, 0.0, 1.0, 0.0, 0.0, (-2.0, 3.0))
    ts, v, _ = sol.grid(51)
    np.testing.assert_allclose(v, ts**2 / 2, atol=1e-10)


def test_cubic_first_integral():
    sol = solve_fg_ode(1.0, 0.0, 0.0, 1.0, 1.0, (-0.5, 0.5))
    assert sol.reference == pytest.approx(1 / 3, abs=1e-15)
    assert sol.drift() < 1e-9


def test_blowup_reports_abscissa():
    with pytest.raises(BlowUpError) as info:
        solve_fg_ode(1.0, 0.0, 0.0, 1.0, 1.0, (0.0, 10.0))
    assert 0.5 < info.value.abscissa < 10


def test_series_follow_the_ode():
    sol = solve_fg_ode(0.7, -0.2, 0.1, 0.3, -0.4, (0.0, 2.0))
    s = sol.series(1.2, 4)
    v, vp = sol.state(1.2)
    assert s.derivative(0) == pytest.approx(v)
    assert s.derivative(2) == pytest.approx(0.7 * v * v - 0.2 * v + 0.1, rel=1e-12)
    assert s.derivative(3) == pytest.approx((1.4 * v - 0.2) * vp, rel=1e-12)


@pytest.mark.parametrize(
    "roots, expected",
    [((2, 0, 0), (2.0, 4.0, 0.0)), ((0, 0, 0), (0.0, 0.0, 0.0)), ((2, 1, 0), (2.5, 2.25, 0.0))],
)
def test_roots_to_constants(roots, expected):
    assert roots_to_constants(RootTriple(*roots)) == pytest.approx(expected)


def test_complex_b_path():
    with pytest.raises(ComplexBError) as info:
        roots_to_constants(RootTriple(1, 1, 1))
    assert info.value.A == pytest.approx(1.5)
    assert info.value.K == pytest.approx(1.0)
    assert info.value.B2 == pytest.approx(1.5**2 - 3)


def test_root_ordering_enforced():
    with pytest.raises(ContractError):
        RootTriple(1, 2, 0)


def test_eval_T_examples():
    A, B2, K = roots_to_constants(RootTriple(2, 0, 0))
    for y in (2.0, -2.0, 0.0):
        assert eval_T(y, A, B2=B2, K=K) == pytest.approx(0.0, abs=1e-12)
    A, B2, K = roots_to_constants(RootTriple(2, 1, 0))
    assert eval_T(1.5, A, B2=B2, K=K) == pytest.approx(4.921875, abs=1e-12)
    assert RootTriple(2, 1, 0).factored_T(1.5) == pytest.approx(4.921875, abs=1e-12)
    assert eval_T(100.0, A, B2=B2, K=K) < 0


root = st.floats(0.0, 3.0, allow_nan=False)


@given(st.lists(root, min_size=3, max_size=3), st.floats(-3.5, 3.5))
def test_root_constant_duality(rs, y):
    r = RootTriple(*sorted(rs, reverse=True))
    A, B2, K = (r.y1**2 + r.y2**2 + r.y3**2) / 2, None, r.y1**2 * r.y2**2 * r.y3**2
    B2 = A * A - (r.y1**2 * r.y2**2 + r.y2**2 * r.y3**2 + r.y3**2 * r.y1**2)
    T = r.factored_T(y)
    assert eval_T(y, A, B2=B2, K=K) == pytest.approx(T, abs=1e-10 * max(1.0, abs(T)) * 10)
    back = constants_to_roots(A, B2, K)
    # simple roots come back to 1e-10; a double root only to sqrt(eps) relative
    gaps = [r.y1 - r.y2, r.y2 - r.y3]
    tol = 1e-10 if min(gaps) > 1e-3 else 1e-6
    np.testing.assert_allclose(back.astuple(), r.astuple(), atol=tol * max(1.0, r.y1))


@pytest.mark.parametrize("roots", [(2, 1, 0), (3, 0, 0), (2, 2, 1), (2.5, 1.5, 0.5), (1, 1, 1)])
def test_roundtrip_examples(roots):
    r = RootTriple(*roots)
    A = sum(v * v for v in roots) / 2
    B2 = A * A - (roots[0] ** 2 * roots[1] ** 2 + roots[1] ** 2 * roots[2] ** 2 + roots[2] ** 2 * roots[0] ** 2)
    K = (roots[0] * roots[1] * roots[2]) ** 2
    np.testing.assert_allclose(constants_to_roots(A, B2, K).astuple(), r.astuple(), atol=1e-10)


def test_y_ode_matches_quadruple_zero_closed_form():
    sol = solve_y_ode(2.0, 2.0, 0.0, 2.0, 0.0, (0.0, 1.4))
    ts, y, _ = sol.grid(80)
    np.testing.assert_allclose(y, 2 * np.sin(ts + math.pi / 2), atol=1e-8)


def test_y_ode_zero_crossing_is_singular():
    with pytest.raises(SingularityError):
        solve_y_ode(2.0, 2.0, 0.0, 2.0, 0.0, (0.0, 2.0))
    with pytest.raises(SingularityError):
        solve_y_ode(2.0, 2.0, 0.0, 0.0, 1.0, (0.0, 1.0))


def test_constant_solution_at_double_root():
    A, B2, K = 4.5, -3.75, 4.0 * 4.0 * 1.0  # roots (2, 2, 1)
    sol = solve_y_ode(A, None, K, 2.0, 0.0, (0.0, 3.0), B2=B2)
    _, y, yp = sol.grid(61)
    assert np.max(np.abs(y - 2.0)) < 1e-9
    assert np.max(np.abs(yp)) < 1e-9


def test_simple_root_is_a_turning_point():
    A, B2, K = roots_to_constants(RootTriple(2, 1, 0))
    sol = solve_y_ode(A, math.sqrt(B2), K, 2.0, 0.0, (0.0, 0.5))
    h = 1e-6
    dT = (eval_T(2 + h, A, B2=B2, K=K) - eval_T(2 - h, A, B2=B2, K=K)) / (2 * h)
    assert sol.series(0.0, 2).derivative(2) == pytest.approx(dT / (2 * 2.0**4), rel=1e-8)
    assert sol(0.5) < 2.0 - 0.1


def test_K_drift_between_roots():
    A, B = 2.5, 1.5
    y0 = 1.8
    T0 = eval_T(y0, A, B, 0.0)
    assert T0 > 0
    sol = solve_y_ode(A, B, 0.0, y0, math.sqrt(T0) / y0**2, (0.0, 3.0))
    assert abs(sol.reference) < 1e-12
    assert sol.drift() < 1e-9


def test_inconsistent_initial_data_warns():
    with pytest.warns(ConsistencyWarning):
        solve_y_ode(2.5, 1.5, 0.0, 1.8, 0.0, (0.0, 0.2))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        solve_y_ode(2.5, 1.5, None, 1.8, 0.0, (0.0, 0.2))


def _closed_form_residual(sol, phis):
    out = []
    for p in phis:
        y, yp = sol.state(p)
        lhs = y**4 * yp**2
        T = eval_T(y, sol.A, B2=sol.B2, K=sol.K)
        out.append(abs(lhs - T) / max(1.0, abs(lhs)))
    return max(out)


def test_quadruple_zero_closed_form():
    sol = special_solution(QUADRUPLE_ZERO, (3, 0, 0))
    assert sol(math.pi / 2) == pytest.approx(3.0)
    assert _closed_form_residual(sol, np.linspace(0, 2 * math.pi, 200)) < 1e-10
    neg = special_solution(QUADRUPLE_ZERO, (3, 0, 0), phi0=0.3, branch=-1)
    assert _closed_form_residual(neg, np.linspace(0, 2 * math.pi, 200)) < 1e-10


def test_zero_simple_closed_form():
    sol = special_solution(ZERO_SIMPLE, (2, 1, 0))
    assert sol(math.pi / 4) == pytest.approx(2.0)
    assert sol(0.7) == pytest.approx(math.sqrt(2.5 + 1.5 * math.sin(1.4)))
    phis = np.linspace(0, 2 * math.pi, 200)
    assert _closed_form_residual(sol, phis) < 1e-10
    assert max(abs(sol(p + math.pi) - sol(p)) for p in phis) < 1e-10
    assert sol.period() == pytest.approx(math.pi)


def test_double_top_implicit_relation():
    sol = special_solution(DOUBLE_TOP, (2, 2, 1), phi0=0.2)
    y, _ = sol.state(0.2)
    assert y == pytest.approx(0.0, abs=1e-12)
    phis = np.linspace(0.25, 0.2 + sol.period() * 0.45, 200)
    assert max(sol.implicit_residual(p) for p in phis) < 1e-9
    assert _closed_form_residual(sol, phis) < 1e-9


def test_pattern_mismatch():
    with pytest.raises(PatternError):
        special_solution(ZERO_SIMPLE, (2, 1, 0.5))
    with pytest.raises(PatternError):
        special_solution(QUADRUPLE_ZERO, (2, 1, 0)).implicit_residual(0.0)
