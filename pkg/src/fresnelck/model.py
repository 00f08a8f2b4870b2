"""Oscillator parameters, position grids and the special functions everything else builds on.

Units: hbar, m and omega0 all default to 1. Every formula keeps hbar explicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OverdampedError, ParameterError, StabilityRangeError

MAX_ORDER = 200


@dataclass(frozen=True)
class OscillatorSpec:
    """Caldirola-Kanai oscillator: mass, natural frequency, damping rate and hbar."""

    m: float = 1.0
    omega0: float = 1.0
    gamma: float = 0.5
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "omega0", "hbar"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ParameterError(f"gamma must be non-negative, got {self.gamma!r}")
        if self.gamma >= self.omega0:
            raise OverdampedError(
                f"overdamped or critical regime: gamma={self.gamma} >= omega0={self.omega0}; "
                "reduced frequency sqrt(omega0^2 - gamma^2) is not real and positive"
            )

    @property
    def omega(self) -> float:
        """Reduced frequency sqrt(omega0^2 - gamma^2)."""
        return math.sqrt(self.omega0**2 - self.gamma**2)

    @property
    def length_scale(self) -> float:
        """Oscillator length sqrt(hbar / (m omega)) of the reduced static oscillator."""
        return math.sqrt(self.hbar / (self.m * self.omega))

    def sigma_x(self, t: float) -> float:
        """Ground-state position spread at time t: sqrt(hbar / 2 m omega) e^{-gamma t}."""
        return math.sqrt(self.hbar / (2.0 * self.m * self.omega)) * math.exp(-self.gamma * t)


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic position grid x_j = x_min + j dx, j = 0..n_points-1."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ParameterError(f"x_min ({self.x_min}) must be below x_max ({self.x_max})")
        n = self.n_points
        if int(n) != n or n < 16 or (int(n) & (int(n) - 1)) != 0:
            raise ParameterError(f"n_points must be a power of two >= 16, got {n!r}")

    @classmethod
    def symmetric(cls, half_width: float, n_points: int) -> "GridSpec":
        return cls(-float(half_width), float(half_width), int(n_points))

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in the discrete-transform layout of ``np.fft.fft``."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)


def _check_order(n) -> int:
    if int(n) != n or n < 0:
        raise StabilityRangeError(f"order must be a non-negative integer, got {n!r}")
    if n > MAX_ORDER:
        raise StabilityRangeError(f"order {n} above supported range (<= {MAX_ORDER})")
    return int(n)


def hermite_h(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence.

    Works elementwise on arrays. Valid for n <= 200; large |x| may overflow to inf.
    """
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def laguerre_l(n: int, x):
    """Laguerre polynomial L_n(x) via (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}."""
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if n == 0:
        return l_prev if l_prev.ndim else float(l_prev)
    l = 1.0 - x
    for k in range(1, n):
        l_prev, l = l, ((2 * k + 1 - x) * l - k * l_prev) / (k + 1)
    return l if l.ndim else float(l)


def eigenfunction_table(n_max: int, spec: OscillatorSpec, y) -> np.ndarray:
    """Rows chi_0(y) .. chi_{n_max}(y) of the static oscillator with the reduced frequency.

    The normalized recurrence
        chi_{k+1} = sqrt(2/(k+1)) xi chi_k - sqrt(k/(k+1)) chi_{k-1},  xi = y / length_scale
    never forms 2^n n!, so high orders stay finite.
    """
    n_max = _check_order(n_max)
    y = np.asarray(y, dtype=float)
    xi = y / spec.length_scale
    table = np.empty((n_max + 1,) + xi.shape)
    table[0] = (1.0 / (math.pi * spec.length_scale**2)) ** 0.25 * np.exp(-0.5 * xi**2)
    if n_max >= 1:
        table[1] = math.sqrt(2.0) * xi * table[0]
    for k in range(1, n_max):
        table[k + 1] = math.sqrt(2.0 / (k + 1)) * xi * table[k] - math.sqrt(k / (k + 1)) * table[k - 1]
    return table


def oscillator_eigenfunction(n: int, spec: OscillatorSpec, y):
    """Normalized eigenfunction chi_n(y) of the static oscillator with frequency ``spec.omega``."""
    n = _check_order(n)
    value = eigenfunction_table(n, spec, y)[n]
    return value if value.ndim else float(value)
