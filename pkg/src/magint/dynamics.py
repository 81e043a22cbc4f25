"""Classical motion: equations of motion, integration, integrals along orbits.

Two state conventions are used. A ``PhaseState`` holds canonical momenta
and needs gauge data; a velocity state ``(x, y, xdot, ydot)`` only needs the
gauge-invariant ``PhysicalData``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate as _sp_integrate

from .errors import ContractError, DomainError, StiffnessError
from .gauge import GaugeData, PhysicalData

DEFAULT_TOL = 1e-11


class PhaseState(NamedTuple):
    x: float
    y: float
    px: float
    py: float


class VelocityState(NamedTuple):
    x: float
    y: float
    xd: float
    yd: float


def _check_finite(s):
    if not all(math.isfinite(v) for v in s):
        raise ContractError(f"state has non-finite entries: {tuple(s)}")


def eom_rhs_newton(s, p: PhysicalData):
    """(xdot, ydot, -W_x + Omega ydot, -W_y - Omega xdot)."""
    x, y, xd, yd = s
    Om = p.Omega.jet(x, y, 0).value
    W = p.W.jet(x, y, 1)
    return np.array([xd, yd, -W.partial(1, 0) + Om * yd, -W.partial(0, 1) - Om * xd])


def eom_rhs_hamiltonian(s, g: GaugeData):
    """(px + A, py + B, -V_x - A_x px - B_x py, -V_y - A_y px - B_y py)."""
    x, y, px, py = s
    A = g.A.jet(x, y, 1)
    B = g.B.jet(x, y, 1)
    V = g.V.jet(x, y, 1)
    return np.array(
        [
            px + A.value,
            py + B.value,
            -V.partial(1, 0) - A.partial(1, 0) * px - B.partial(1, 0) * py,
            -V.partial(0, 1) - A.partial(0, 1) * px - B.partial(0, 1) * py,
        ]
    )


def velocity_state(s, g: GaugeData) -> VelocityState:
    x, y, px, py = s
    return VelocityState(x, y, px + g.A(x, y), py + g.B(x, y))


def phase_state(v, g: GaugeData) -> PhaseState:
    x, y, xd, yd = v
    return PhaseState(x, y, xd - g.A(x, y), yd - g.B(x, y))


def hamiltonian(s, g: GaugeData):
    x, y, px, py = s
    return 0.5 * (px * px + py * py) + g.A(x, y) * px + g.B(x, y) * py + g.V(x, y)


def energy(v, p: PhysicalData):
    """Velocity-form energy (xdot^2 + ydot^2)/2 + W, equal to H."""
    x, y, xd, yd = v
    return 0.5 * (xd * xd + yd * yd) + p.W(x, y)


def eval_integral_velocity(v, I):
    """Value of a velocity-form integral at (x, y, xdot, ydot)."""
    x, y, xd, yd = v
    if I.order == 1:
        f1 = I.alpha * y + I.beta
        f2 = -I.alpha * x + I.gamma
        return f1 * xd + f2 * yd + I.m(x, y)
    g1 = I.alpha * y * y - I.beta * y + I.delta
    g2 = I.alpha * x * x + I.gamma * x + I.zeta
    g3 = -2 * I.alpha * x * y + I.beta * x - I.gamma * y + I.xi
    return g1 * xd * xd + g2 * yd * yd + g3 * xd * yd + I.k1(x, y) * xd + I.k2(x, y) * yd + I.m(x, y)


def eval_integral(s, I, g: GaugeData):
    """Classical value of the integral at a phase state, via xdot = px + A, ydot = py + B."""
    return eval_integral_velocity(velocity_state(s, g), I)


@dataclass
class Trajectory:
    """Accepted-step samples of an integrated orbit.

    ``states`` rows are phase states (Hamiltonian runs) or velocity states
    (Newton runs); ``kind`` says which. ``logs`` maps quantity names to values
    aligned with ``t``; ``drift`` holds max |Q - Q(0)| / max(rms(Q), 1e-14).
    """

    t: np.ndarray
    states: np.ndarray
    kind: str
    logs: dict
    drift: dict
    stats: dict
    exited: bool = False
    message: str = ""
    _segments: list = field(default_factory=list, repr=False)

    @property
    def final(self):
        return self.states[-1]

    def positions(self):
        return self.states[:, :2]

    def sample(self, ts):
        """Dense-output states at the given times (within the integrated span)."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty((len(ts), self.states.shape[1]))
        bounds = np.array([seg[1] for seg in self._segments])
        for i, t in enumerate(ts):
            if t < self.t[0] - 1e-14 or t > self.t[-1] + 1e-14:
                raise DomainError(f"t = {t} outside integrated span [{self.t[0]}, {self.t[-1]}]")
            k = min(int(np.searchsorted(bounds, t)), len(self._segments) - 1)
            out[i] = self._segments[k][2](t) if self._segments else self.states[0]
        return out


def drift_of(values):
    values = np.asarray(values, dtype=float)
    rms = math.sqrt(float(np.mean(values**2)))
    return float(np.max(np.abs(values - values[0])) / max(rms, 1e-14))


def integrate(s0, source, t_end, tol=DEFAULT_TOL, integrals=(), max_step=np.inf, min_step=1e-12):
    """Integrate from ``s0`` to ``t_end`` with DOP853 (order 8, adaptive).

    ``source`` is ``GaugeData`` (s0 is a phase state, Hamilton's equations) or
    ``PhysicalData`` (s0 is a velocity state, Newton form). Every integral in
    ``integrals`` (label, integral) pairs or bare integrals, plus the energy,
    is logged at each accepted step. Leaving the domain truncates the
    trajectory and sets ``exited``; a step-size collapse raises
    ``StiffnessError``.
    """
    if not t_end > 0:
        raise ContractError("t_end must be positive")
    s0 = np.asarray(s0, dtype=float)
    _check_finite(s0)
    if isinstance(source, GaugeData):
        kind = "phase"
        rhs = lambda t, s: eom_rhs_hamiltonian(s, source)  # noqa: E731
        H = lambda s: hamiltonian(s, source)  # noqa: E731
        value_of = lambda I, s: eval_integral(s, I, source)  # noqa: E731
    elif isinstance(source, PhysicalData):
        kind = "velocity"
        rhs = lambda t, s: eom_rhs_newton(s, source)  # noqa: E731
        H = lambda s: energy(s, source)  # noqa: E731
        value_of = lambda I, s: eval_integral_velocity(s, I)  # noqa: E731
    else:
        raise ContractError("source must be GaugeData or PhysicalData")
    source.domain.check(s0[0], s0[1])

    named = []
    for k, item in enumerate(integrals):
        if isinstance(item, tuple):
            named.append(item)
        else:
            named.append((getattr(item, "label", f"C{k}"), item))

    def record(s):
        row = {"H": H(s)}
        for name, I in named:
            row[name] = value_of(I, s)
        return row

    solver = _sp_integrate.DOP853(rhs, 0.0, s0, t_end, rtol=tol, atol=tol, max_step=max_step)
    ts, states, rows, segments = [0.0], [s0.copy()], [record(s0)], []
    exited, message = False, ""
    while solver.status == "running":
        try:
            msg = solver.step()
        except DomainError as exc:
            exited, message = True, f"left the domain near t = {solver.t:.10g}: {exc}"
            break
        if solver.status == "failed":
            raise StiffnessError(f"integration failed at t = {solver.t:.10g}: {msg}")
        if solver.step_size is not None and solver.step_size < min_step and solver.status == "running":
            raise StiffnessError(f"step size {solver.step_size:.3g} underflow at t = {solver.t:.10g}")
        s = solver.y.copy()
        try:
            row = record(s)
        except DomainError as exc:
            exited, message = True, f"left the domain at t = {solver.t:.10g}: {exc}"
            break
        segments.append((solver.t_old, solver.t, solver.dense_output()))
        ts.append(solver.t)
        states.append(s)
        rows.append(row)

    t = np.array(ts)
    logs = {name: np.array([r[name] for r in rows]) for name in rows[0]}
    drift = {name: drift_of(v) for name, v in logs.items()}
    stats = {"accepted_steps": len(ts) - 1, "nfev": solver.nfev, "rejected_steps": None}
    return Trajectory(t, np.array(states), kind, logs, drift, stats, exited, message, segments)


__all__ = [
    "PhaseState",
    "Trajectory",
    "VelocityState",
    "drift_of",
    "energy",
    "eom_rhs_hamiltonian",
    "eom_rhs_newton",
    "eval_integral",
    "eval_integral_velocity",
    "hamiltonian",
    "integrate",
    "phase_state",
    "velocity_state",
]
