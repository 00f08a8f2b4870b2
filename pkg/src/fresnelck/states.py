"""Squeezed number states of the CK oscillator and Fresnel transforms of wavefunctions."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.signal import czt

from .abcd import ABCDState, ck_abcd
from .errors import BranchError, GridResolutionError, ParameterError, ShapeError
from .model import GridSpec, OscillatorSpec, _check_order, oscillator_eigenfunction

KERNEL_B_THRESHOLD = 1e-9


@dataclass(frozen=True)
class WavefunctionGrid:
    grid: GridSpec
    values: np.ndarray
    t: float
    spec: OscillatorSpec
    n: Optional[int] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if np.shape(self.values) != (self.grid.n_points,):
            raise ShapeError(f"values shape {np.shape(self.values)} does not match grid of {self.grid.n_points}")

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.values) ** 2)) * self.grid.dx)

    def inner(self, other: "WavefunctionGrid") -> complex:
        """<self|other> by the periodic trapezoidal rule."""
        _same_grid(self, other)
        return complex(np.vdot(self.values, other.values) * self.grid.dx)

    def with_values(self, values) -> "WavefunctionGrid":
        return WavefunctionGrid(self.grid, np.asarray(values, dtype=complex), self.t, self.spec, self.n)

    def to_csv(self) -> str:
        s = self.spec
        buf = io.StringIO()
        n = "" if self.n is None else str(self.n)
        buf.write(f"# t={self.t:.17g}\n# gamma={s.gamma:.17g}\n# m={s.m:.17g}\n")
        buf.write(f"# omega0={s.omega0:.17g}\n# hbar={s.hbar:.17g}\n# n={n}\n")
        buf.write(f"# x_min={self.grid.x_min:.17g}\n# x_max={self.grid.x_max:.17g}\n")
        buf.write("x,re,im\n")
        for x, v in zip(self.grid.x, self.values):
            buf.write(f"{x:.17g},{v.real:.17g},{v.imag:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "WavefunctionGrid":
        header, rows = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                header[key] = value
            elif line and not line.startswith("x,"):
                rows.append([float(v) for v in line.split(",")])
        data = np.array(rows)
        grid = GridSpec(float(header["x_min"]), float(header["x_max"]), len(data))
        spec = OscillatorSpec(float(header["m"]), float(header["omega0"]), float(header["gamma"]), float(header["hbar"]))
        n = int(header["n"]) if header.get("n") else None
        return cls(grid, data[:, 1] + 1j * data[:, 2], float(header["t"]), spec, n)


def _same_grid(a: WavefunctionGrid, b: WavefunctionGrid):
    if a.grid != b.grid:
        raise ShapeError(f"grid mismatch: {a.grid} vs {b.grid}")


def check_grid(spec: OscillatorSpec, n: int, t: float, grid: GridSpec):
    """Raise GridResolutionError unless ``grid`` resolves the n-th squeezed state at time t.

    Three bounds: the envelope must fit inside the window, dx must resolve the
    envelope (tighter for higher n), and dx must resolve the chirp
    exp(-i m gamma e^{2 gamma t} x^2 / 2 hbar) at the window edge.
    """
    sigma = spec.sigma_x(t)
    spread = math.sqrt(2 * n + 1)
    extent = sigma * (8.0 + math.sqrt(2.0) * (spread - 1.0))
    half_width = min(-grid.x_min, grid.x_max)
    if half_width < extent:
        raise GridResolutionError("envelope extent (half-width >= 8 sigma_x(t), widened for n)", extent, half_width)
    dx_envelope = sigma / (8.0 * spread)
    if grid.dx > dx_envelope:
        raise GridResolutionError("envelope resolution (dx <= sigma_x(t)/8, narrowed for n)", dx_envelope, grid.dx)
    if spec.gamma > 0:
        edge = max(abs(grid.x_min), abs(grid.x_max))
        dx_chirp = math.pi * spec.hbar / (spec.m * spec.gamma * math.exp(2 * spec.gamma * t) * edge)
        if grid.dx > dx_chirp:
            raise GridResolutionError("chirp Nyquist (dx <= pi hbar / (m gamma e^{2 gamma t} x_max))", dx_chirp, grid.dx)


def ck_wavefunction_values(spec: OscillatorSpec, n: int, t: float, x) -> np.ndarray:
    """psi_n(x, t) of the CK oscillator at arbitrary points, including the phase e^{-i(n+1/2) omega t}."""
    n = _check_order(n)
    x = np.asarray(x, dtype=float)
    grow = math.exp(spec.gamma * t)
    chirp = np.exp(-0.5j * spec.m * spec.gamma * grow**2 * x**2 / spec.hbar)
    dynamical = np.exp(-1j * (n + 0.5) * spec.omega * t)
    return dynamical * math.sqrt(grow) * chirp * oscillator_eigenfunction(n, spec, grow * x)


def ck_wavefunction(spec: OscillatorSpec, n: int, t: float, grid: GridSpec) -> WavefunctionGrid:
    """Exact CK wavefunction (squeezed number state) sampled on ``grid``."""
    n = _check_order(n)
    check_grid(spec, n, t, grid)
    return WavefunctionGrid(grid, ck_wavefunction_values(spec, n, t, grid.x), float(t), spec, n)


def apply_inverse_fresnel_b0(
    state_fn: Callable[[np.ndarray], np.ndarray], abcd: ABCDState, spec: OscillatorSpec, grid: GridSpec
) -> WavefunctionGrid:
    """<x|F^{-1}|phi> = sqrt(A) exp(-i C A x^2 / 2 hbar) phi(A x) for B = 0."""
    if abcd.b != 0:
        raise BranchError(f"B = {abcd.b} is nonzero; use apply_fresnel_kernel for B != 0")
    if abcd.a <= 0:
        raise BranchError(f"A = {abcd.a} must be positive on the B = 0 path")
    x = grid.x
    values = math.sqrt(abcd.a) * np.exp(-0.5j * abcd.c * abcd.a * x**2 / spec.hbar) * state_fn(abcd.a * x)
    return WavefunctionGrid(grid, np.asarray(values, dtype=complex), abcd.t, spec)


def apply_fresnel_kernel(psi: WavefunctionGrid, abcd: ABCDState, spec: Optional[OscillatorSpec] = None) -> WavefunctionGrid:
    """Apply F via its position kernel

        <x'|F|x> = (2 pi i hbar B)^{-1/2} exp[i (A x^2 - 2 x' x + D x'^2) / (2 hbar B)]

    as a trapezoidal sum over the input grid, evaluated on the same grid.
    The sum over x is a chirp-z transform, so the cost is O(N log N).
    """
    spec = spec or psi.spec
    hbar, b = spec.hbar, abcd.b
    if abs(b) <= KERNEL_B_THRESHOLD:
        raise BranchError(f"|B| = {abs(b):.3g} below kernel threshold {KERNEL_B_THRESHOLD}; use apply_inverse_fresnel_b0")
    grid = psi.grid
    x, dx, n = grid.x, grid.dx, grid.n_points
    amp = np.abs(psi.values)
    support = amp > 1e-10 * amp.max()
    x_support = float(np.max(np.abs(x[support]))) if support.any() else 0.0
    x_out = max(abs(grid.x_min), abs(grid.x_max))
    dx_kernel = math.pi * hbar * abs(b) / (abs(abcd.a) * x_support + x_out)
    if dx > dx_kernel:
        raise GridResolutionError("kernel Nyquist (dx <= pi hbar |B| / (|A| x_support + x_max))", dx_kernel, dx)

    weights = np.full(n, dx)
    weights[[0, -1]] *= 0.5
    scale = 1.0 / (hbar * b)
    j = np.arange(n)
    integrand = weights * psi.values * np.exp(0.5j * abcd.a * x**2 * scale) * np.exp(-1j * x[0] * j * dx * scale)
    theta = dx * dx * scale
    summed = czt(integrand, n, w=np.exp(-1j * theta), a=1.0)
    phase_out = np.exp(-1j * (x[0] * x[0] + j * dx * x[0]) * scale) * np.exp(0.5j * abcd.d * x**2 * scale)
    prefactor = 1.0 / np.sqrt(2j * math.pi * hbar * b + 0j)
    return WavefunctionGrid(grid, prefactor * phase_out * summed, psi.t, spec, psi.n)


def kinetic_second_derivative(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    return np.fft.ifft(-(grid.k**2) * np.fft.fft(values))


def ck_hamiltonian_apply(spec: OscillatorSpec, t: float, psi: WavefunctionGrid) -> np.ndarray:
    """H(t) psi for H = e^{-2 gamma t} P^2/2m + e^{2 gamma t} m omega0^2 X^2/2, spectral kinetic term."""
    f = math.exp(-2 * spec.gamma * t)
    g = math.exp(2 * spec.gamma * t)
    kinetic = -(spec.hbar**2) * f / (2 * spec.m) * kinetic_second_derivative(psi.values, psi.grid)
    potential = 0.5 * g * spec.m * spec.omega0**2 * psi.grid.x**2 * psi.values
    return kinetic + potential


def schrodinger_residual(spec: OscillatorSpec, n: int, t: float, dt: float, grid: GridSpec) -> float:
    """Relative defect ||i hbar d_t psi - H psi|| / ||H psi|| of the closed form, d_t by central difference."""
    if dt <= 0:
        raise ParameterError("dt must be positive")
    before = ck_wavefunction(spec, n, t - dt, grid)
    now = ck_wavefunction(spec, n, t, grid)
    after = ck_wavefunction(spec, n, t + dt, grid)
    lhs = 1j * spec.hbar * (after.values - before.values) / (2 * dt)
    rhs = ck_hamiltonian_apply(spec, t, now)
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))


def ck_abcd_wavefunction(spec: OscillatorSpec, n: int, t: float, grid: GridSpec) -> WavefunctionGrid:
    """Same state as ``ck_wavefunction`` but built generically from F^{-1} and chi_n (no dynamical phase)."""
    return apply_inverse_fresnel_b0(lambda y: oscillator_eigenfunction(n, spec, y), ck_abcd(spec, t), spec, grid)
