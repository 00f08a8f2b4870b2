"""Split-step error against the closed-form state as dt shrinks.

Prints dt, phase-aligned L2 error and the ratio to the previous row for
n = 0, 1, 2 at t = 1; a second-order scheme gives ratios near 4.

    python3 scripts/convergence_study.py
"""
import numpy as np

from fresnelck.abcd import ck_coefficients
from fresnelck.model import GridSpec, OscillatorSpec
from fresnelck.oracle import PropagationPlan, phase_aligned_error, split_step_evolve
from fresnelck.states import WavefunctionGrid, ck_wavefunction_values

spec = OscillatorSpec(gamma=0.5)
grid = GridSpec.symmetric(17.0, 512)
t1 = 1.0


def state(n, t):
    return WavefunctionGrid(grid, ck_wavefunction_values(spec, n, t, grid.x), t, spec, n)


print(f"{'n':>2} {'dt':>9} {'error':>11} {'ratio':>7}")
for n in (0, 1, 2):
    prev = None
    for dt in (8e-4, 4e-4, 2e-4, 1e-4, 5e-5):
        try:
            plan = PropagationPlan(0.0, t1, dt, grid, ck_coefficients(spec), spec)
            err = phase_aligned_error(split_step_evolve(plan, state(n, 0.0)), state(n, t1))
        except ValueError as exc:
            print(f"{n:>2} {dt:>9.1e}  skipped: {exc}")
            continue
        ratio = prev / err if prev else np.nan
        print(f"{n:>2} {dt:>9.1e} {err:>11.3e} {ratio:>7.3f}")
        prev = err
