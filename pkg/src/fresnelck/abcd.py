"""Fresnel (ABCD) parameters that map a time-dependent oscillator onto a static one.

The Hamiltonian f(t) P^2/2m + g(t) m omega0^2 X^2/2 is reduced with B = 0:
A = f^{-1/2}, D = 1/A, C = m dA/dt, and the frequency left over is checked
for constancy rather than enforced.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import OverdampedError, ParameterError, StabilityRangeError
from .model import OscillatorSpec


@dataclass(frozen=True)
class ABCDState:
    t: float
    a: float
    b: float
    c: float
    d: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def inverse(self) -> "ABCDState":
        return ABCDState(self.t, self.d, -self.b, -self.c, self.a)

    def compose(self, first: "ABCDState") -> "ABCDState":
        """Matrix product self @ first."""
        (a, b), (c, d) = self.matrix @ first.matrix
        return ABCDState(self.t, float(a), float(b), float(c), float(d))


@dataclass(frozen=True)
class CoefficientFunctions:
    """Kinetic and potential prefactors f(t), g(t) of the time-dependent Hamiltonian."""

    f: Callable[[float], float]
    g: Callable[[float], float]

    def sample(self, times) -> tuple[np.ndarray, np.ndarray]:
        times = np.asarray(times, dtype=float)
        f = np.array([self.f(t) for t in times], dtype=float)
        g = np.array([self.g(t) for t in times], dtype=float)
        return f, g


def ck_coefficients(spec: OscillatorSpec) -> CoefficientFunctions:
    """Caldirola-Kanai choice f = e^{-2 gamma t}, g = e^{2 gamma t}."""
    gamma = spec.gamma
    return CoefficientFunctions(lambda t: math.exp(-2.0 * gamma * t), lambda t: math.exp(2.0 * gamma * t))


def static_coefficients() -> CoefficientFunctions:
    return CoefficientFunctions(lambda t: 1.0, lambda t: 1.0)


@dataclass(frozen=True)
class ABCDTrajectory:
    times: np.ndarray
    states: tuple[ABCDState, ...]
    omega_sq: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.states) or len(self.times) != len(self.omega_sq):
            raise ParameterError("times, states and omega_sq must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ParameterError("trajectory times must be strictly increasing")

    @classmethod
    def from_arrays(cls, times, a, b, c, d, omega_sq) -> "ABCDTrajectory":
        times = np.asarray(times, dtype=float)
        states = tuple(
            ABCDState(float(t), float(ai), float(bi), float(ci), float(di))
            for t, ai, bi, ci, di in zip(times, a, b, c, d)
        )
        return cls(times, states, np.asarray(omega_sq, dtype=float))

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.states])

    @property
    def a(self):
        return self.column("a")

    @property
    def b(self):
        return self.column("b")

    @property
    def c(self):
        return self.column("c")

    @property
    def d(self):
        return self.column("d")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,A,B,C,D,omega_sq\n")
        for s, w2 in zip(self.states, self.omega_sq):
            buf.write(",".join(f"{v:.17g}" for v in (s.t, s.a, s.b, s.c, s.d, w2)) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ABCDTrajectory":
        rows = list(csv.DictReader(io.StringIO(text)))
        col = lambda k: np.array([float(r[k]) for r in rows])
        return cls.from_arrays(col("t"), col("A"), col("B"), col("C"), col("D"), col("omega_sq"))


def reduced_frequency(spec: OscillatorSpec) -> float:
    """sqrt(omega0^2 - gamma^2); rejects gamma >= omega0."""
    if spec.gamma >= spec.omega0:
        raise OverdampedError(f"gamma={spec.gamma} >= omega0={spec.omega0}")
    return math.sqrt(spec.omega0**2 - spec.gamma**2)


def ck_abcd(spec: OscillatorSpec, t: float) -> ABCDState:
    """Closed-form CK parameters (e^{gamma t}, 0, m gamma e^{gamma t}, e^{-gamma t})."""
    grow = math.exp(spec.gamma * t)
    return ABCDState(float(t), grow, 0.0, spec.m * spec.gamma * grow, math.exp(-spec.gamma * t))


def symplectic_defect(state: ABCDState) -> float:
    return abs(state.a * state.d - state.b * state.c - 1.0)


def fd_weights(x0: float, nodes: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights for the ``order``-th derivative at x0 (Fornberg's algorithm)."""
    n = len(nodes)
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, nodes[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5, c4 = 1.0, c4, nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def derivative(values, times, order: int = 1, width: int = 3) -> np.ndarray:
    """Derivative of sampled values using centred ``width``-point stencils.

    Near the ends the stencil slides inward and becomes one-sided, keeping the
    same number of points (one more for second derivatives), so the accuracy
    order is the same everywhere.
    """
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    n = len(times)
    half = width // 2
    edge_size = min(n, width + order - 1)
    out = np.empty(n)
    for i in range(n):
        if half <= i < n - half and width <= n:
            idx = slice(i - half, i + half + 1)
        elif i < half:
            idx = slice(0, edge_size)
        else:
            idx = slice(n - edge_size, n)
        out[i] = fd_weights(times[i], times[idx], order) @ values[idx]
    return out


def reduce_b_zero(coeffs: CoefficientFunctions, spec: OscillatorSpec, times: Sequence[float]) -> ABCDTrajectory:
    """B = 0 reduction of the general time-dependent oscillator.

    Derivatives of A use five-point stencils (fourth order, one-sided at the
    ends) so that C = m dA/dt is smooth enough to be differentiated again by
    ``residual_check`` without end effects.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 3:
        raise StabilityRangeError("reduce_b_zero needs at least 3 sample times")
    if np.any(np.diff(times) <= 0):
        raise ParameterError("times must be strictly increasing")
    f, g = coeffs.sample(times)
    if np.any(f <= 0):
        bad = float(times[np.argmax(f <= 0)])
        raise ParameterError(f"kinetic coefficient f must be positive; f({bad}) = {coeffs.f(bad)}")
    a = f**-0.5
    a_dot = derivative(a, times, 1, width=5)
    a_ddot = derivative(a, times, 2, width=5)
    d = 1.0 / a
    c = spec.m * a_dot
    c_dot = spec.m * a_ddot
    d_dot = -a_dot / a**2
    omega_sq = c**2 * f / spec.m**2 + d**2 * spec.omega0**2 * g + (c * d_dot - d * c_dot) / spec.m
    return ABCDTrajectory.from_arrays(times, a, np.zeros_like(a), c, d, omega_sq)


def residual_check(traj: ABCDTrajectory, coeffs: CoefficientFunctions, spec: OscillatorSpec):
    """Absolute defects of the three reduction conditions at interior times.

    Returns (times, r_p2, r_x2, r_xp): the P^2, X^2 and (XP+PX) coefficient
    mismatches against the static Hamiltonian P^2/2m + m omega^2 X^2/2.
    Derivatives are second-order central differences on the trajectory's grid.
    """
    times = traj.times
    if len(times) < 5:
        raise StabilityRangeError("residual_check needs at least 5 trajectory points")
    a, b, c, d = traj.a, traj.b, traj.c, traj.d
    da, db, dc, dd = (np.gradient(v, times, edge_order=2) for v in (a, b, c, d))
    f, g = coeffs.sample(times)
    m, w0 = spec.m, spec.omega0
    omega = reduced_frequency(spec)
    r_p2 = a**2 * f / (2 * m) + b**2 * m * w0**2 * g / 2 + (a * db - b * da) / 2 - 1.0 / (2 * m)
    r_x2 = c**2 * f / (2 * m) + d**2 * m * w0**2 * g / 2 + (c * dd - d * dc) / 2 - m * omega**2 / 2
    r_xp = a * c * f / (2 * m) + d * b * m * w0**2 * g / 2 - (d * da - c * db) / 2
    inner = slice(1, -1)
    return times[inner], np.abs(r_p2[inner]), np.abs(r_x2[inner]), np.abs(r_xp[inner])
