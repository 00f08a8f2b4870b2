"""Fresnel-operator solution of the Caldirola-Kanai damped oscillator."""
from .abcd import (
    ABCDState,
    ABCDTrajectory,
    CoefficientFunctions,
    ck_abcd,
    ck_coefficients,
    reduce_b_zero,
    reduced_frequency,
    residual_check,
    symplectic_defect,
)
from .model import GridSpec, OscillatorSpec, hermite_h, laguerre_l, oscillator_eigenfunction
from .states import WavefunctionGrid, ck_wavefunction, schrodinger_residual
from .wigner import WignerGrid, wigner_closed_form

__all__ = [
    "ABCDState",
    "ABCDTrajectory",
    "CoefficientFunctions",
    "GridSpec",
    "OscillatorSpec",
    "WavefunctionGrid",
    "WignerGrid",
    "ck_abcd",
    "ck_coefficients",
    "ck_wavefunction",
    "hermite_h",
    "laguerre_l",
    "oscillator_eigenfunction",
    "reduce_b_zero",
    "reduced_frequency",
    "residual_check",
    "schrodinger_residual",
    "symplectic_defect",
    "wigner_closed_form",
]
