"""Constant-field quantum checks: oscillator reduction and the Bessel ansatz.

Landau levels come from the 1D operator -(hbar^2/2) f'' + (Omega0 y + lam)^2 f / 2
on a finite-difference grid. The R-separated solution
Psi = exp(-i Omega0 x y / 2) J_m(k r) exp(i m phi) is checked against the
Landau-gauge Hamiltonian (A = Omega0 y, B = 0, V = Omega0^2 y^2 / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import jets
from .errors import AccuracyError, ContractError
from .fields import ConstantField, FuncField
from .gauge import GaugeData
from .jets import Jet2, Series

DEFAULT_LENGTHS = 12.0
DEFAULT_POINTS = 2001
BOUNDARY_AMPLITUDE = 1e-8


# -- oscillator reduction -----------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``points`` nodes (ends included, Dirichlet there) spanning
    ``lengths`` oscillator lengths sqrt(hbar/Omega0) on each side of ``centre``
    (default: the well centre -lam/Omega0)."""

    lengths: float = DEFAULT_LENGTHS
    points: int = DEFAULT_POINTS
    centre: float | None = None

    def __post_init__(self):
        if self.points < 5 or self.lengths <= 0:
            raise ContractError(f"grid needs >= 5 points and positive width, got {self}")


@dataclass
class Spectrum1D:
    eigenvalues: np.ndarray
    interval: tuple
    points: int
    boundary: str = "dirichlet"
    raw: dict = field(default_factory=dict)
    order_estimate: np.ndarray | None = None
    boundary_amplitude: float = 0.0

    def to_dict(self):
        return {
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "interval": [float(v) for v in self.interval],
            "points": self.points,
            "boundary": self.boundary,
            "order_estimate": None if self.order_estimate is None else [float(v) for v in self.order_estimate],
            "boundary_amplitude": self.boundary_amplitude,
        }


def _fd_levels(omega0, lam, hbar, lo, hi, points, n):
    y = np.linspace(lo, hi, points)[1:-1]
    h = (hi - lo) / (points - 1)
    diag = hbar**2 / h**2 + 0.5 * (omega0 * y + lam) ** 2
    off = np.full(len(y) - 1, -0.5 * hbar**2 / h**2)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, n - 1))
    edge = max(np.max(np.abs(v[[0, -1], :]) / np.max(np.abs(v), axis=0)), 0.0)
    return w, float(edge)


def oscillator_reduction(omega0, lam=0.0, hbar=1.0, grid: GridSpec | None = None, n=6) -> Spectrum1D:
    """Lowest ``n`` eigenvalues of -(hbar^2/2) f'' + (omega0 y + lam)^2 f / 2.

    Second-order differences on N, 2N - 1 and 4N - 3 nodes (halving h each
    time); the reported values are the Richardson combination (4 E_h/2 - E_h)/3
    of the two finer levels. ``order_estimate`` is the observed convergence
    order from all three. Raises ``AccuracyError`` when an eigenvector keeps
    more than 1e-8 of its peak amplitude next to the boundary.
    """
    if omega0 == 0 or hbar <= 0:
        raise ContractError("oscillator reduction needs omega0 != 0 and hbar > 0")
    grid = grid or GridSpec()
    w = abs(omega0)
    centre = -lam / omega0 if grid.centre is None else grid.centre
    half = grid.lengths * math.sqrt(hbar / w)
    lo, hi = centre - half, centre + half
    sizes = [grid.points, 2 * grid.points - 1, 4 * grid.points - 3]
    levels, edges = [], []
    for N in sizes:
        e, edge = _fd_levels(omega0, lam, hbar, lo, hi, N, n)
        levels.append(e)
        edges.append(edge)
    if edges[0] > BOUNDARY_AMPLITUDE:
        raise AccuracyError(
            f"grid too narrow: boundary amplitude {edges[0]:.3g} > {BOUNDARY_AMPLITUDE:g}; widen beyond {grid.lengths} lengths"
        )
    e1, e2, e4 = levels
    refined = (4 * e4 - e2) / 3
    with np.errstate(divide="ignore", invalid="ignore"):
        order = np.log2(np.abs(e1 - e2) / np.abs(e2 - e4))
    return Spectrum1D(
        np.sort(refined),
        (lo, hi),
        grid.points,
        raw={"N": e1, "2N": e2, "4N": e4},
        order_estimate=order,
        boundary_amplitude=edges[0],
    )


def landau_levels(omega0, hbar, n=6):
    """hbar |omega0| (k + 1/2), k = 0 .. n-1."""
    return hbar * abs(omega0) * (np.arange(n) + 0.5)


# -- Bessel functions ---------------------------------------------------------

def _miller_start(nmax, x):
    big = max(nmax, x)
    start = int(big + 30 + math.sqrt(60 * big))
    return start + (start % 2)


def _bessel_series(nmax, x):
    """Ascending series; for x < 1 the terms shrink at least 4x per step."""
    out = np.empty(nmax + 1)
    q = -(x * x) / 4
    lx = math.log(x / 2)
    for k in range(nmax + 1):
        lead = k * lx - math.lgamma(k + 1)
        term = math.exp(lead) if lead > -745 else 0.0
        acc, j = term, 0
        while term and abs(term) > 1e-17 * abs(acc):
            j += 1
            term *= q / (j * (j + k))
            acc += term
        out[k] = acc
    return out


def bessel_j_table(nmax, x):
    """[J_0(x), ..., J_nmax(x)] for real x >= 0.

    For x < 1 the ascending series is summed directly. Otherwise Miller's
    downward recurrence (normalized by J_0 + 2 sum J_2k = 1) gives every
    order; orders below x are then recomputed by the forward recurrence from
    J_0 and J_1, where it is stable.
    """
    x = float(x)
    if x < 0:
        raise ContractError("bessel_j_table takes x >= 0; use J_m(-x) = (-1)^m J_m(x)")
    if nmax < 0:
        raise ContractError("nmax must be >= 0")
    if x == 0:
        return np.eye(1, nmax + 1)[0]
    if x < 1:
        return _bessel_series(nmax, x)
    top = max(nmax, 1)
    start = _miller_start(top, x)
    vals = np.zeros(start + 2)
    vals[start] = 1e-300
    for k in range(start, 0, -1):
        vals[k - 1] = 2 * k / x * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals[k - 1 :] *= 1e-250
    vals /= vals[0] + 2 * np.sum(vals[2::2])
    out = vals[: top + 1].copy()
    # forward recurrence below the turning order
    upto = min(int(x), top)
    for k in range(1, upto):
        out[k + 1] = 2 * k / x * out[k] - out[k - 1]
    return out[: nmax + 1]


def bessel_j(m, x):
    """J_m(x) for integer m and real x."""
    m = int(m)
    sign = 1.0
    if m < 0:
        m = -m
        sign *= (-1.0) ** m
    if x < 0:
        x = -x
        sign *= (-1.0) ** m
    return sign * bessel_j_table(m, x)[m]


def bessel_j_derivatives(m, x, n):
    """[J_m(x), J_m'(x), ..., J_m^(n)(x)] via J^(j) = 2^-j sum_i (-1)^i C(j,i) J_(m-j+2i)."""
    orders = range(m - n, m + n + 1)
    top = max(abs(k) for k in orders)
    if x < 0:
        raise ContractError("derivatives are provided for x >= 0")
    table = bessel_j_table(top, x)

    def J(k):
        return table[k] if k >= 0 else (-1.0) ** (-k) * table[-k]

    out = []
    for j in range(n + 1):
        s = sum((-1) ** i * math.comb(j, i) * J(m - j + 2 * i) for i in range(j + 1))
        out.append(s / 2**j)
    return np.array(out)


# -- R-separated ansatz -------------------------------------------------------

def landau_gauge(omega0) -> GaugeData:
    """A = omega0 y, B = 0, V = omega0^2 y^2 / 2 (W = 0)."""
    A = FuncField(lambda X, Y: Y * omega0, name="A_landau")
    V = FuncField(lambda X, Y: Y * Y * (omega0 * omega0 / 2), name="V_landau")
    return GaugeData(A, ConstantField(0.0), V)


def bessel_ansatz_jet(omega0, m, k, x, y, order):
    """Jet of exp(-i omega0 x y / 2) J_m(k r) exp(i m phi) at (x, y)."""
    X, Y = Jet2.variable(x, "x", order), Jet2.variable(y, "y", order)
    r0 = math.hypot(x, y)
    if r0 == 0:
        raise ContractError("the ansatz needs r > 0")
    R = jets.hypot(X, Y)
    d = bessel_j_derivatives(m, k * r0, order)
    coeffs = np.array([d[j] * k**j / math.factorial(j) for j in range(order + 1)])
    radial = Series(coeffs, order)(R)
    # exp(i m phi) = ((x + i sgn(m) y) / r)^|m|
    z = (X + Y * (1j if m >= 0 else -1j)) / R
    angular = z ** abs(m) if m else Jet2.constant(1.0, order)
    phase = jets.exp(X * Y * (-0.5j * omega0))
    return phase * radial * angular


@dataclass
class BesselReport:
    points: np.ndarray
    residual: np.ndarray  # complex, (H - E) Psi
    scale: np.ndarray
    k: float
    params: dict

    @property
    def relative(self):
        return np.abs(self.residual) / self.scale

    @property
    def max_relative(self):
        return float(np.max(self.relative))


def bessel_rsep_residual(omega0, m_quantum, E, hbar=1.0, pts=(), k2=None) -> BesselReport:
    """Pointwise (H - E) Psi for the R-separated ansatz with k^2 = 2E + m omega0.

    ``k2`` overrides the relation (used for negative controls). Only hbar = 1
    is supported. ``scale`` is the largest of |E Psi| and the magnitudes of the
    kinetic, magnetic and potential terms of H Psi.
    """
    if hbar != 1:
        raise ContractError("the R-separated ansatz is only defined in hbar = 1 units")
    m = int(m_quantum)
    if m != m_quantum:
        raise ContractError("m must be an integer")
    if k2 is None:
        k2 = 2 * E + m * omega0
    if k2 < 0:
        raise ContractError(f"k^2 = {k2} < 0")
    k = math.sqrt(k2)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    res = np.empty(len(pts), dtype=complex)
    scale = np.empty(len(pts))
    for i, (x, y) in enumerate(pts):
        psi = bessel_ansatz_jet(omega0, m, k, x, y, 2)
        kinetic = -0.5 * (psi.partial(2, 0) + psi.partial(0, 2))
        magnetic = -1j * omega0 * y * psi.partial(1, 0)
        potential = 0.5 * omega0**2 * y * y * psi.value
        epsi = E * psi.value
        res[i] = kinetic + magnetic + potential - epsi
        scale[i] = max(abs(kinetic), abs(magnetic), abs(potential), abs(epsi), 1e-300)
    return BesselReport(pts, res, scale, k, {"omega0": omega0, "m": m, "E": E, "k2": k2, "hbar": hbar})


__all__ = [
    "BesselReport",
    "GridSpec",
    "Spectrum1D",
    "bessel_ansatz_jet",
    "bessel_j",
    "bessel_j_derivatives",
    "bessel_j_table",
    "bessel_rsep_residual",
    "landau_gauge",
    "landau_levels",
    "oscillator_reduction",
]
