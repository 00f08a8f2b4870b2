"""Wigner functions of the CK squeezed number states.

Closed forms come from pulling the static-oscillator Wigner function
(-1)^n e^{-2|alpha|^2} L_n(4|alpha|^2) / (pi hbar) back through the
area-preserving map x' = e^{gamma t} x, p' = m gamma e^{gamma t} x + e^{-gamma t} p.
``wigner_numeric`` evaluates the defining integral over a sampled wavefunction
and serves as the independent check.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ParameterError, TruncatedSupportError
from .model import OscillatorSpec, _check_order, laguerre_l
from .states import WavefunctionGrid

FORMAT_VERSION = 1
NEGATIVE_THRESHOLD = -1e-9
MAX_RESOLUTION = 2048


@dataclass(frozen=True)
class PhasePointMap:
    t: float
    spec: OscillatorSpec

    def __call__(self, x, p):
        return map_phase_point(self, x, p)

    def jacobian(self) -> np.ndarray:
        grow = math.exp(self.spec.gamma * self.t)
        return np.array([[grow, 0.0], [self.spec.m * self.spec.gamma * grow, 1.0 / grow]])


def map_phase_point(pmap: PhasePointMap, x, p):
    grow = math.exp(pmap.spec.gamma * pmap.t)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    x_new = grow * x
    p_new = pmap.spec.m * pmap.spec.gamma * grow * x + p / grow
    if x_new.ndim == 0:
        return float(x_new), float(p_new)
    return x_new, p_new


def _alpha_sq(spec: OscillatorSpec, t: float, x, p):
    xm, pm = map_phase_point(PhasePointMap(t, spec), x, p)
    mw = spec.m * spec.omega
    return 0.5 * (mw * np.square(xm) / spec.hbar + np.square(pm) / (mw * spec.hbar))


def wigner_closed_form(spec: OscillatorSpec, n: int, t: float, x, p):
    """(-1)^n e^{-2|alpha'|^2} L_n(4|alpha'|^2) / (pi hbar) at the mapped phase point."""
    n = _check_order(n)
    a2 = _alpha_sq(spec, t, x, p)
    value = (-1) ** n * np.exp(-2.0 * a2) * laguerre_l(n, 4.0 * a2) / (math.pi * spec.hbar)
    return value if np.ndim(value) else float(value)


def _squeezed_exponent(spec: OscillatorSpec, t: float, x, p):
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    e2 = math.exp(2 * spec.gamma * t)
    mw, hbar = spec.m * spec.omega, spec.hbar
    return (p + spec.m * spec.gamma * e2 * x) ** 2 / (mw * hbar * e2) + mw * e2 * x**2 / hbar


def wigner_vacuum(spec: OscillatorSpec, t: float, x, p):
    value = np.exp(-_squeezed_exponent(spec, t, x, p)) / (math.pi * spec.hbar)
    return value if np.ndim(value) else float(value)


def wigner_n1(spec: OscillatorSpec, t: float, x, p):
    q = _squeezed_exponent(spec, t, x, p)
    value = (2.0 * q - 1.0) * np.exp(-q) / (math.pi * spec.hbar)
    return value if np.ndim(value) else float(value)


def wigner_covariance(spec: OscillatorSpec, n: int, t: float) -> tuple[float, float, float]:
    """(var_x, var_p, cov_xp) of the n-th squeezed number state."""
    var_xs = (2 * n + 1) * spec.hbar / (2 * spec.m * spec.omega)
    var_ps = (2 * n + 1) * spec.m * spec.hbar * spec.omega / 2
    mg = spec.m * spec.gamma
    return (
        math.exp(-2 * spec.gamma * t) * var_xs,
        math.exp(2 * spec.gamma * t) * (var_ps + mg**2 * var_xs),
        -mg * var_xs,
    )


@dataclass(frozen=True)
class WignerGrid:
    """values[i, j] = W(x_axis[i], p_axis[j])."""

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    t: Optional[float] = None
    spec: Optional[OscillatorSpec] = None
    n: Optional[int] = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0])

    @property
    def dp(self) -> float:
        return float(self.p_axis[1] - self.p_axis[0])

    def total(self) -> float:
        return float(np.sum(self.values) * self.dx * self.dp)

    def moments(self) -> dict:
        """Means, variances and covariance from cell sums."""
        w = self.values * self.dx * self.dp
        mass = np.sum(w)
        x = self.x_axis[:, None]
        p = self.p_axis[None, :]
        mx = np.sum(w * x) / mass
        mp = np.sum(w * p) / mass
        return {
            "mean_x": float(mx),
            "mean_p": float(mp),
            "var_x": float(np.sum(w * (x - mx) ** 2) / mass),
            "var_p": float(np.sum(w * (p - mp) ** 2) / mass),
            "cov_xp": float(np.sum(w * (x - mx) * (p - mp)) / mass),
        }

    def minimum(self) -> tuple[float, float, float]:
        i, j = np.unravel_index(np.argmin(self.values), self.values.shape)
        return float(self.values[i, j]), float(self.x_axis[i]), float(self.p_axis[j])

    def maximum(self) -> tuple[float, float, float]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.values[i, j]), float(self.x_axis[i]), float(self.p_axis[j])

    def negative_cells(self) -> int:
        return int(np.count_nonzero(self.values < NEGATIVE_THRESHOLD))

    def metadata(self) -> dict:
        out = {"version": FORMAT_VERSION, "t": self.t, "n": self.n}
        if self.spec is not None:
            s = self.spec
            out.update(m=s.m, omega0=s.omega0, gamma=s.gamma, hbar=s.hbar)
        out.update(self.meta)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self.metadata().items():
            buf.write(f"# {key}={_fmt(value)}\n")
        buf.write("x,p,w\n")
        for i, x in enumerate(self.x_axis):
            for j, p in enumerate(self.p_axis):
                buf.write(f"{x:.17g},{p:.17g},{self.values[i, j]:.17g}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": FORMAT_VERSION,
                "x_axis": self.x_axis.tolist(),
                "p_axis": self.p_axis.tolist(),
                "values": self.values.ravel().tolist(),
                "metadata": self.metadata(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "WignerGrid":
        obj = json.loads(text)
        if obj.get("version") != FORMAT_VERSION:
            raise ParameterError(f"unsupported Wigner grid format version {obj.get('version')!r}")
        x = np.array(obj["x_axis"], dtype=float)
        p = np.array(obj["p_axis"], dtype=float)
        meta = dict(obj.get("metadata", {}))
        spec = None
        if all(k in meta for k in ("m", "omega0", "gamma", "hbar")):
            spec = OscillatorSpec(meta.pop("m"), meta.pop("omega0"), meta.pop("gamma"), meta.pop("hbar"))
        for key in ("version",):
            meta.pop(key, None)
        t, n = meta.pop("t", None), meta.pop("n", None)
        values = np.array(obj["values"], dtype=float).reshape(len(x), len(p))
        return cls(x, p, values, t, spec, n, meta)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return "" if value is None else str(value)


def default_window(spec: OscillatorSpec, n: int, t: float, sigmas: float = 6.0) -> tuple[tuple, tuple]:
    var_x, var_p, _ = wigner_covariance(spec, n, t)
    hx, hp = sigmas * math.sqrt(var_x), sigmas * math.sqrt(var_p)
    return (-hx, hx), (-hp, hp)


def _axis(window: Sequence[float], resolution: int) -> np.ndarray:
    axis = np.linspace(window[0], window[1], resolution)
    if window[0] == -window[1]:
        # exact antisymmetry, so an odd mesh hits the origin exactly
        axis = 0.5 * (axis - axis[::-1])
    return axis


def figure_grid(spec: OscillatorSpec, n: int, t: float, x_window: Optional[Sequence[float]] = None,
                p_window: Optional[Sequence[float]] = None, resolution: int = 201) -> WignerGrid:
    """Closed-form Wigner function on a resolution x resolution mesh.

    Windows default to +-6 standard deviations of the state's own covariance.
    An odd resolution puts the origin on a mesh point.
    """
    if not 2 <= resolution <= MAX_RESOLUTION:
        raise ParameterError(f"resolution must be in [2, {MAX_RESOLUTION}], got {resolution}")
    auto_x, auto_p = default_window(spec, n, t)
    x_window = x_window or auto_x
    p_window = p_window or auto_p
    x = _axis(x_window, resolution)
    p = _axis(p_window, resolution)
    values = wigner_closed_form(spec, n, t, x[:, None], p[None, :])
    return WignerGrid(x, p, values, float(t), spec, n)


def _check_edges(psi: WavefunctionGrid, tol: float = 1e-8):
    edge = max(float(np.max(np.abs(psi.values[:2]))), float(np.max(np.abs(psi.values[-2:]))))
    if edge >= tol:
        raise TruncatedSupportError(f"|psi| = {edge:.3g} at the grid edge (needs < {tol})")


def wigner_numeric(psi: WavefunctionGrid, p_axis: Optional[Sequence[float]] = None,
                   x_window: Optional[Sequence[float]] = None) -> WignerGrid:
    """W(x, p) = (1/2 pi hbar) int du e^{-i u p/hbar} psi(x + u/2) psi*(x - u/2) by quadrature.

    This is <psi| Delta(x, p) |psi> for the Wigner operator
    int du/2pi e^{i u p} |x + u/2><x - u/2|.

    The u samples are u = 2 k dx, so both arguments stay on the grid. Without
    ``p_axis`` the k-sum is a transform onto the momenta pi hbar m / (N dx);
    with one, it is evaluated directly at the requested momenta.
    Rows are limited to ``x_window`` when given.
    """
    _check_edges(psi)
    grid, hbar = psi.grid, psi.spec.hbar
    x_all, dx, n_pts = grid.x, grid.dx, grid.n_points
    rows = np.arange(n_pts)
    if x_window is not None:
        rows = rows[(x_all >= x_window[0]) & (x_all <= x_window[1])]
    half = n_pts // 2
    k = np.arange(-half, half)
    plus = rows[:, None] + k[None, :]
    minus = rows[:, None] - k[None, :]
    valid = (plus >= 0) & (plus < n_pts) & (minus >= 0) & (minus < n_pts)
    vals = psi.values
    corr = np.where(valid, vals[np.clip(plus, 0, n_pts - 1)] * np.conj(vals[np.clip(minus, 0, n_pts - 1)]), 0.0)
    scale = dx / (math.pi * hbar)
    if p_axis is None:
        # Sum over k of c_k e^{-2 pi i k m / N}, k stored in wrap-around order.
        spectrum = np.fft.fft(np.fft.ifftshift(corr, axes=1), axis=1)
        w = np.fft.fftshift(spectrum, axes=1) * scale
        p = math.pi * hbar * np.arange(-half, half) / (n_pts * dx)
    else:
        p = np.asarray(p_axis, dtype=float)
        phase = np.exp(-2j * dx * np.outer(k, p) / hbar)
        w = (corr @ phase) * scale
    residue = float(np.max(np.abs(w.imag))) if w.size else 0.0
    if residue > 1e-10:
        raise ArithmeticError(f"Wigner quadrature left an imaginary residue {residue:.3g}")
    return WignerGrid(x_all[rows], p, w.real, psi.t, psi.spec, psi.n, {"source": "numeric"})


def marginals(w: WignerGrid, sigmas: float = 6.0) -> tuple[np.ndarray, np.ndarray]:
    """(position density over x_axis, momentum density over p_axis) by cell sums.

    When the grid carries its state's metadata, the window must cover
    ``sigmas`` standard deviations on both axes.
    """
    if w.spec is not None and w.n is not None and w.t is not None:
        var_x, var_p, _ = wigner_covariance(w.spec, w.n, w.t)
        for name, axis, var in (("x", w.x_axis, var_x), ("p", w.p_axis, var_p)):
            need = sigmas * math.sqrt(var) * (1 - 1e-9)
            if axis[0] > -need or axis[-1] < need:
                raise TruncatedSupportError(
                    f"{name} window [{axis[0]:.4g}, {axis[-1]:.4g}] does not cover +-{sigmas} sigma = {need:.4g}"
                )
    return np.sum(w.values, axis=1) * w.dp, np.sum(w.values, axis=0) * w.dx
