"""Freeze reference values computed by an independent route.

Everything here uses mpmath quadrature and mpmath's own Hermite polynomials,
sharing no code with the package. Output: tests/data/oracles.json.

    python3 scripts/freeze_oracles.py
"""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30
M, OMEGA0, GAMMA, HBAR = mp.mpf(1), mp.mpf(1), mp.mpf("0.5"), mp.mpf(1)
OMEGA = mp.sqrt(OMEGA0**2 - GAMMA**2)


def chi(n, y):
    """Normalized oscillator eigenfunction in dimensionless y."""
    norm = 1 / mp.sqrt(2**n * mp.factorial(n) * mp.sqrt(mp.pi))
    return norm * mp.hermite(n, y) * mp.exp(-y * y / 2)


def psi(n, t, x):
    """Damped-oscillator number state in physical units."""
    ell = mp.sqrt(HBAR / (M * OMEGA))
    grow = mp.exp(GAMMA * t)
    chirp = mp.exp(-1j * M * GAMMA * grow**2 * x * x / (2 * HBAR))
    phase = mp.exp(-1j * (n + mp.mpf(1) / 2) * OMEGA * t)
    return phase * mp.sqrt(grow / ell) * chirp * chi(n, grow * x / ell)


def wigner(n, t, x, p):
    """(1/pi hbar) int dy psi*(x+y) psi(x-y) exp(2ipy/hbar)."""
    f = lambda y: mp.conj(psi(n, t, x + y)) * psi(n, t, x - y) * mp.exp(2j * p * y / HBAR)
    val = mp.quad(f, [-mp.inf, -2, 0, 2, mp.inf]) / (mp.pi * HBAR)
    return float(mp.re(val))


def inverse_fresnel_coeff(k, n, t):
    """<k| F^{-1} |n> = int chi_k(y) sqrt(A) exp(-i C A y^2 / 2) chi_n(A y) dy, dimensionless."""
    a = mp.exp(GAMMA * t)
    c = M * GAMMA * a / (M * OMEGA)
    f = lambda y: chi(k, y) * mp.sqrt(a) * mp.exp(-1j * c * a * y * y / 2) * chi(n, a * y)
    val = mp.quad(f, [-mp.inf, -3, 0, 3, mp.inf])
    return [float(mp.re(val)), float(mp.im(val))]


def main():
    points = [(0.0, 0.0), (0.3, -0.4), (-0.7, 0.9), (1.1, 0.2), (0.5, 1.5)]
    wig = []
    for n in (0, 1, 2):
        for t in (0.0, 1.0):
            for x, p in points:
                wig.append({"n": n, "t": t, "x": x, "p": p, "w": wigner(n, mp.mpf(t), mp.mpf(x), mp.mpf(p))})
    fock = []
    for n in (0, 1, 2):
        for t in (0.5, 1.0):
            coeffs = [inverse_fresnel_coeff(k, n, mp.mpf(t)) for k in range(8)]
            fock.append({"n": n, "t": t, "coeffs": coeffs})
    wave = []
    for n in (0, 1, 3):
        for t in (0.0, 1.0, 3.0):
            for x in (-1.3, 0.2, 0.9):
                v = psi(n, mp.mpf(t), mp.mpf(x))
                wave.append({"n": n, "t": t, "x": x, "re": float(mp.re(v)), "im": float(mp.im(v))})
    out = {
        "params": {"m": 1.0, "omega0": 1.0, "gamma": 0.5, "hbar": 1.0},
        "omega_sq": float(OMEGA**2),
        "wigner": wig,
        "inverse_fresnel": fock,
        "wavefunction": wave,
    }
    path = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"
    path.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
