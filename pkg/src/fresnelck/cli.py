"""Command-line front end.

    fresnelck {abcd,wavefunction,wigner,fock,verify,figure} [options]

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 grid-resolution error. Summary lines on stdout have the form
``METRIC name value tolerance pass|fail``.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import abcd as abcd_mod
from .abcd import ck_abcd, ck_coefficients, reduce_b_zero, residual_check, symplectic_defect
from .errors import ConfigurationError, GridResolutionError, ParameterError, StabilityRangeError
from .fockspace import (
    dimensionless_abcd,
    fresnel_canonical,
    fresnel_normal_ordered,
    relative_phase,
    render_fock_state,
    squeezed_number_state,
    verify_similarity,
)
from .model import GridSpec, OscillatorSpec
from .oracle import PropagationPlan, phase_aligned_error, split_step_evolve
from .states import ck_wavefunction, schrodinger_residual
from .wigner import default_window, figure_grid, marginals, wigner_closed_form, wigner_numeric

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_RESOLUTION = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    m: float = 1.0
    omega0: float = 1.0
    gamma: float = 0.5
    hbar: float = 1.0
    n: int = 0
    times: tuple = (1.0,)
    grid_points: int = 2048
    x_max: float = 16.0
    dt: float = 1e-4
    dim: int = 128
    out_dir: str = "out"
    t_end: float = 2.0
    abcd_step: float = 1e-3
    method: str = "closed"
    resolution: int = 201
    oracle_x_max: float = 33.0
    oracle_points: int = 2048
    numeric: bool = False

    def oscillator(self) -> OscillatorSpec:
        return OscillatorSpec(m=self.m, omega0=self.omega0, gamma=self.gamma, hbar=self.hbar)

    def grid(self) -> GridSpec:
        return GridSpec.symmetric(self.x_max, self.grid_points)

    def oracle_grid(self) -> GridSpec:
        return GridSpec.symmetric(self.oracle_x_max, self.oracle_points)


# config-file key -> (RunConfig field, parser)
_KEYS = {
    "gamma": ("gamma", float),
    "omega0": ("omega0", float),
    "mass": ("m", float),
    "m": ("m", float),
    "hbar": ("hbar", float),
    "n": ("n", int),
    "t": ("times", lambda v: tuple(float(x) for x in str(v).split(",") if x.strip())),
    "grid_points": ("grid_points", int),
    "x_max": ("x_max", float),
    "dt": ("dt", float),
    "dim": ("dim", int),
    "out_dir": ("out_dir", str),
    "t_end": ("t_end", float),
    "abcd_step": ("abcd_step", float),
    "method": ("method", str),
    "resolution": ("resolution", int),
    "oracle_x_max": ("oracle_x_max", float),
    "oracle_points": ("oracle_points", int),
    "numeric": ("numeric", lambda v: str(v).strip().lower() in ("1", "true", "yes", "on")),
}


class ConfigError(Exception):
    pass


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _KEYS:
            raise ConfigError(f"config line {lineno}: unknown or malformed entry {raw.strip()!r}")
        name, conv = _KEYS[key]
        try:
            out[name] = conv(value.strip())
        except ValueError as exc:
            raise ConfigError(f"config field {key}: {exc}") from None
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"config file {args.config}: {exc.strerror}") from None
        values.update(parse_config_text(text))
    for key, (name, _) in _KEYS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            values[name] = tuple(flag) if name == "times" else flag
    config = RunConfig(**values)
    for name in ("grid_points", "dim", "resolution", "oracle_points"):
        if getattr(config, name) <= 0:
            raise ConfigError(f"{name} must be positive")
    if config.method not in ("closed", "reduce"):
        raise ConfigError(f"method must be 'closed' or 'reduce', got {config.method!r}")
    return config


def metric(name: str, value: float, tol: float, out=None) -> bool:
    ok = bool(np.isfinite(value) and value < tol)
    print(f"METRIC {name} {value:.6e} {tol:.1e} {'pass' if ok else 'fail'}", file=out or sys.stdout)
    return ok


def _tag(t: float) -> str:
    return f"{t:g}".replace("-", "m")


def _out(config: RunConfig) -> Path:
    path = Path(config.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_abcd(config: RunConfig) -> int:
    spec = config.oscillator()
    steps = int(round(config.t_end / config.abcd_step))
    if steps < 4:
        raise ConfigError("t_end / abcd_step must give at least 5 samples")
    times = np.linspace(0.0, steps * config.abcd_step, steps + 1)
    coeffs = ck_coefficients(spec)
    if config.method == "reduce":
        traj = reduce_b_zero(coeffs, spec, times)
    else:
        states = [ck_abcd(spec, t) for t in times]
        traj = abcd_mod.ABCDTrajectory(times, tuple(states), np.full(len(times), spec.omega**2))
    path = _out(config) / "abcd.csv"
    path.write_text(traj.to_csv())
    _, r1, r2, r3 = residual_check(traj, coeffs, spec)
    print(f"wrote {path}")
    metric("max_symplectic_defect", max(symplectic_defect(s) for s in traj.states), 1e-10)
    metric("max_residual", float(max(r1.max(), r2.max(), r3.max())), 1e-5)
    return EXIT_OK


def cmd_wavefunction(config: RunConfig) -> int:
    spec, grid = config.oscillator(), config.grid()
    out = _out(config)
    for t in config.times:
        psi = ck_wavefunction(spec, config.n, t, grid)
        path = out / f"wavefunction_n{config.n}_t{_tag(t)}.csv"
        path.write_text(psi.to_csv())
        print(f"wrote {path}")
        metric(f"norm_error_t{_tag(t)}", abs(psi.norm() - 1.0), 1e-6)
    return EXIT_OK


def cmd_wigner(config: RunConfig) -> int:
    spec = config.oscillator()
    out = _out(config)
    ok = True
    for t in config.times:
        w = figure_grid(spec, config.n, t, resolution=config.resolution)
        stem = out / f"wigner_n{config.n}_t{_tag(t)}"
        stem.with_suffix(".csv").write_text(w.to_csv())
        stem.with_suffix(".json").write_text(w.to_json())
        lo, hi = w.minimum(), w.maximum()
        print(f"wrote {stem}.csv {stem}.json")
        print(f"SUMMARY t={t:g} min={lo[0]:.17g} min_at=({lo[1]:.6g},{lo[2]:.6g}) max={hi[0]:.17g} "
              f"max_at=({hi[1]:.6g},{hi[2]:.6g}) negative_cells={w.negative_cells()}")
        ok &= metric(f"normalization_t{_tag(t)}", abs(w.total() - 1.0), 1e-4)
        if config.numeric:
            ok &= metric(f"wigner_numeric_vs_closed_t{_tag(t)}", _wigner_check(spec, config.n, t, config.grid()), 1e-6)
    return EXIT_OK if ok else EXIT_VERIFY


def _wigner_check(spec, n, t, grid) -> float:
    psi = ck_wavefunction(spec, n, t, grid)
    (x0, x1), p_window = default_window(spec, n, t)
    w = wigner_numeric(psi, np.linspace(*p_window, 241), (x0 - 2 * grid.dx, x1 + 2 * grid.dx))
    ref = wigner_closed_form(spec, n, t, w.x_axis[:, None], w.p_axis[None, :])
    return float(np.max(np.abs(w.values - ref)))


def _fock_metrics(config: RunConfig, t: float, emit=metric) -> bool:
    spec = config.oscillator()
    ab = dimensionless_abcd(ck_abcd(spec, t), spec)
    f3 = fresnel_normal_ordered(ab, config.dim)
    f5 = fresnel_canonical(ab, config.dim)
    ok = True
    theta, agreement = relative_phase(f3, f5)
    ok &= emit(f"fock_factorization_agreement_t{_tag(t)}", agreement, 1e-6)
    print(f"INFO fock_relative_phase_t{_tag(t)} {theta:.6e}")
    for label, defect in zip(("FXFd", "FdXF", "FPFd", "FdPF"), verify_similarity(f3, ab)):
        ok &= emit(f"fock_similarity_{label}_t{_tag(t)}", defect, 1e-6)
    coeffs = squeezed_number_state(ab, config.n, config.dim)
    grid = config.grid()
    rendered = render_fock_state(coeffs, spec, grid, t)
    ok &= emit(f"fock_state_render_t{_tag(t)}", phase_aligned_error(rendered, ck_wavefunction(spec, config.n, t, grid)), 1e-5)
    return ok


def cmd_fock(config: RunConfig) -> int:
    spec = config.oscillator()
    out = _out(config)
    ok = True
    for t in config.times:
        ab = dimensionless_abcd(ck_abcd(spec, t), spec)
        coeffs = squeezed_number_state(ab, config.n, config.dim)
        path = out / f"fock_state_n{config.n}_t{_tag(t)}.csv"
        lines = ["k,re,im"] + [f"{k},{c.real:.17g},{c.imag:.17g}" for k, c in enumerate(coeffs)]
        path.write_text("\n".join(lines) + "\n")
        op_path = out / f"fresnel_t{_tag(t)}.json"
        op_path.write_text(fresnel_normal_ordered(ab, config.dim).to_json())
        print(f"wrote {path} {op_path}")
        ok &= _fock_metrics(config, t)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify(config: RunConfig) -> int:
    spec = config.oscillator()
    coeffs = ck_coefficients(spec)
    ok = True

    times = np.linspace(0.0, 3.0, 3001)
    closed = [ck_abcd(spec, t) for t in times]
    ok &= metric("abcd_symplectic_defect", max(symplectic_defect(s) for s in closed), 1e-12)
    traj = abcd_mod.ABCDTrajectory(times, tuple(closed), np.full(len(times), spec.omega**2))
    ok &= metric("abcd_residual", float(max(r.max() for r in residual_check(traj, coeffs, spec)[1:])), 1e-5)
    reduced = reduce_b_zero(coeffs, spec, times)
    ok &= metric("reduction_vs_closed_form", float(max(np.max(np.abs(reduced.column(k) - traj.column(k))) for k in "abcd")), 1e-5)
    ok &= metric("reduction_omega_sq_spread", float(np.ptp(reduced.omega_sq)), 1e-6)
    ok &= metric("reduction_omega_sq_error", float(np.max(np.abs(reduced.omega_sq - spec.omega**2))), 1e-6)

    grid = config.grid()
    for t in config.times:
        ok &= metric(f"schrodinger_residual_t{_tag(t)}", schrodinger_residual(spec, config.n, t, 1e-4, grid), 1e-6)

    t_final = max(config.times)
    try:
        ogrid = config.oracle_grid()
        plan = PropagationPlan(0.0, t_final, config.dt, ogrid, coeffs, spec)
        evolved = split_step_evolve(plan, ck_wavefunction(spec, config.n, 0.0, ogrid))
        err = phase_aligned_error(evolved, ck_wavefunction(spec, config.n, t_final, ogrid))
    except ConfigurationError as exc:
        print(f"INFO oracle plan rejected: {exc}")
        err = math.inf
    ok &= metric(f"oracle_phase_aligned_error_t{_tag(t_final)}", err, 1e-5)

    for t in config.times:
        ok &= _fock_metrics(config, t)
        ok &= metric(f"wigner_numeric_vs_closed_t{_tag(t)}", _wigner_check(spec, config.n, t, grid), 1e-6)
        w = figure_grid(spec, config.n, t, resolution=config.resolution)
        px, _ = marginals(w)
        from .states import ck_wavefunction_values

        density = np.abs(ck_wavefunction_values(spec, config.n, t, w.x_axis)) ** 2
        ok &= metric(f"wigner_marginal_t{_tag(t)}", float(np.max(np.abs(px - density))), 1e-5)
        ok &= metric(f"wigner_normalization_t{_tag(t)}", abs(w.total() - 1.0), 1e-4)
    print("VERIFY " + ("pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_VERIFY


PANELS = (
    # (label, n, use configured gamma?, t)
    ("fig1a", 0, False, 0.0),
    ("fig1b", 0, True, 1.0),
    ("fig1c", 0, True, 3.0),
    ("fig2a", 1, False, 0.0),
    ("fig2b", 1, True, 1.0),
    ("fig2c", 1, True, 3.0),
)


def cmd_figure(config: RunConfig) -> int:
    out = _out(config)
    variances = {}
    for label, n, damped, t in PANELS:
        spec = config.oscillator() if damped else replace(config.oscillator(), gamma=0.0)
        w = figure_grid(spec, n, t, resolution=config.resolution)
        (out / f"{label}.csv").write_text(w.to_csv())
        (out / f"{label}.json").write_text(w.to_json())
        lo, hi, mom = w.minimum(), w.maximum(), w.moments()
        variances[label] = mom["var_x"]
        print(
            f"PANEL {label} n={n} gamma={spec.gamma:g} t={t:g} min={lo[0]:.17g} min_at=({lo[1]:.6g},{lo[2]:.6g}) "
            f"max={hi[0]:.17g} max_at=({hi[1]:.6g},{hi[2]:.6g}) var_x={mom['var_x']:.17g} var_p={mom['var_p']:.17g} "
            f"negative_cells={w.negative_cells()}"
        )
    gamma = config.gamma
    for fig in ("fig1", "fig2"):
        ratio = variances[f"{fig}c"] / variances[f"{fig}b"]
        expected = math.exp(-2 * gamma * 2.0)
        print(f"RATIO {fig} var_x(t=3)/var_x(t=1) {ratio:.17g} expected {expected:.17g}")
    return EXIT_OK


COMMANDS = {
    "abcd": cmd_abcd,
    "wavefunction": cmd_wavefunction,
    "wigner": cmd_wigner,
    "fock": cmd_fock,
    "verify": cmd_verify,
    "figure": cmd_figure,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=float)
    common.add_argument("--omega0", type=float)
    common.add_argument("--mass", type=float)
    common.add_argument("--hbar", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--t", type=float, action="append", help="time; repeat for several")
    common.add_argument("--grid-points", dest="grid_points", type=int)
    common.add_argument("--x-max", dest="x_max", type=float)
    common.add_argument("--dt", type=float)
    common.add_argument("--dim", type=int)
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--config", help="key=value config file; flags override it")
    common.add_argument("--t-end", dest="t_end", type=float)
    common.add_argument("--abcd-step", dest="abcd_step", type=float)
    common.add_argument("--method", choices=("closed", "reduce"))
    common.add_argument("--resolution", type=int)
    common.add_argument("--oracle-x-max", dest="oracle_x_max", type=float)
    common.add_argument("--oracle-points", dest="oracle_points", type=int)
    common.add_argument("--numeric", action="store_const", const=True)

    parser = argparse.ArgumentParser(prog="fresnelck", description="Fresnel-operator solution of the CK oscillator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        config.oscillator()
        return COMMANDS[args.command](config)
    except (ConfigError, ParameterError, ConfigurationError, StabilityRangeError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GridResolutionError as exc:
        print(f"resolution error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION


if __name__ == "__main__":
    sys.exit(main())
