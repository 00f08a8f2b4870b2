"""Fresnel operators as matrices in a truncated Fock basis.

Two independent constructions are provided and cross-checked:

* ``fresnel_canonical``: exp(iC/2A X^2) exp(-i/2 (XP+PX) ln A) exp(-iB/2A P^2),
  each factor from an eigendecomposition of its Hermitian generator built in a
  padded basis, then cropped.
* ``fresnel_normal_ordered``: exp(s a+^2) exp((a+a + 1/2) ln tau) exp(s' a^2).
  Matrix elements come from the recurrence implied by that product,
      sqrt(i+1) F[i+1, j] = 2 s sqrt(i) F[i-1, j] + tau sqrt(j) F[i, j-1],
  seeded with the first row tau^{1/2} <0|exp(s' a^2)|j>. Forming the three
  factors explicitly cancels catastrophically at high index.

Operators act on dimensionless quadratures X = (a + a+)/sqrt2, P = (a - a+)/(i sqrt2)
of the reduced oscillator; ``dimensionless_abcd`` converts physical parameters.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .abcd import ABCDState, symplectic_defect
from .errors import BranchError, DegenerateParameterError, ParameterError, StabilityRangeError
from .model import GridSpec, OscillatorSpec, eigenfunction_table
from .states import WavefunctionGrid

DEFAULT_DIM = 128
MAX_DIM = 512
PAD_FACTOR = 4
FLOAT_RECURRENCE_MAX_DIM = 64


@dataclass(frozen=True)
class TruncatedOperator:
    dim: int
    entries: np.ndarray

    def __post_init__(self):
        if self.dim < 4:
            raise StabilityRangeError(f"dim must be >= 4, got {self.dim}")
        if np.shape(self.entries) != (self.dim, self.dim):
            raise ParameterError(f"entries shape {np.shape(self.entries)} does not match dim {self.dim}")

    @property
    def H(self) -> "TruncatedOperator":
        return TruncatedOperator(self.dim, self.entries.conj().T)

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            return TruncatedOperator(self.dim, self.entries @ other.entries)
        return self.entries @ other

    def unitarity_defect(self, block: Optional[int] = None) -> float:
        """Spectral norm of (U^dagger U - I) on the leading ``block`` levels (default dim // 2)."""
        block = self.dim // 2 if block is None else block
        gram = self.entries.conj().T @ self.entries
        return float(np.linalg.norm(gram[:block, :block] - np.eye(block), 2))

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim": self.dim,
                "entries_re": self.entries.real.ravel().tolist(),
                "entries_im": self.entries.imag.ravel().tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TruncatedOperator":
        obj = json.loads(text)
        dim = int(obj["dim"])
        entries = (np.array(obj["entries_re"]) + 1j * np.array(obj["entries_im"])).reshape(dim, dim)
        return cls(dim, entries)


def _check_dim(dim) -> int:
    if int(dim) != dim or dim < 4:
        raise StabilityRangeError(f"dim must be an integer >= 4, got {dim!r}")
    if dim > MAX_DIM:
        raise StabilityRangeError(f"dim {dim} above hard cap {MAX_DIM}")
    return int(dim)


def ladder_matrices(dim: int) -> tuple[np.ndarray, np.ndarray]:
    dim = _check_dim(dim) if dim <= MAX_DIM else int(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    return a, a.conj().T


def quadrature_matrices(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a, ad = ladder_matrices(dim)
    return (a + ad) / math.sqrt(2.0), (a - ad) / (1j * math.sqrt(2.0))


def dimensionless_abcd(state: ABCDState, spec: OscillatorSpec) -> ABCDState:
    """Rescale physical (A, B, C, D) to the reduced oscillator's dimensionless quadratures."""
    m_omega = spec.m * spec.omega
    return ABCDState(state.t, state.a, state.b * m_omega, state.c / m_omega, state.d)


def _check_symplectic(abcd: ABCDState):
    defect = symplectic_defect(abcd)
    if defect > 1e-10:
        raise ParameterError(f"AD - BC - 1 = {defect:.3g}; Fresnel parameters must be symplectic")


def _expm_hermitian(generator: np.ndarray, coeff: float) -> np.ndarray:
    """exp(i coeff G) for Hermitian G."""
    w, v = np.linalg.eigh(generator)
    return (v * np.exp(1j * coeff * w)) @ v.conj().T


def fresnel_canonical(abcd: ABCDState, dim: int = DEFAULT_DIM, work_dim: Optional[int] = None) -> TruncatedOperator:
    """Fresnel operator from the (X, P) factorization; requires A > 0.

    The generators are exponentiated in a basis of ``work_dim`` levels
    (default 4 dim) and the result is cropped to ``dim``. ``work_dim=dim``
    gives the plain truncated construction.
    """
    dim = _check_dim(dim)
    _check_symplectic(abcd)
    if abcd.a <= 0:
        raise BranchError(f"A = {abcd.a} must be positive for the canonical factorization (ln A)")
    work = PAD_FACTOR * dim if work_dim is None else int(work_dim)
    if work < dim:
        raise ParameterError("work_dim must be >= dim")
    x, p = quadrature_matrices(work)
    a, b, c = abcd.a, abcd.b, abcd.c
    chirp = _expm_hermitian(x @ x, c / (2 * a))
    dilation = _expm_hermitian(x @ p + p @ x, -0.5 * math.log(a))
    shear = _expm_hermitian(p @ p, -b / (2 * a))
    return TruncatedOperator(dim, (chirp @ dilation @ shear)[:dim, :dim])


def normal_ordered_coefficients(abcd: ABCDState) -> tuple[complex, complex, complex]:
    """(s, tau, s') of the normal-ordered factorization."""
    a, b, c, d = abcd.a, abcd.b, abcd.c, abcd.d
    den = a + d + 1j * (b - c)
    if abs(den) < 1e-14:
        raise DegenerateParameterError("A + D + i(B - C) vanishes")
    s = (a - d + 1j * (b + c)) / (2 * den)
    s_prime = -(a - d - 1j * (b + c)) / (2 * den)
    return complex(s), complex(2 / den), complex(s_prime)


def _normal_ordered_entries(s, tau, s_prime, dim, ctx=None):
    if ctx is None:
        sqrt, zero = math.sqrt, 0j
        f = np.zeros((dim, dim), dtype=complex)
        root_tau = complex(np.sqrt(tau))
    else:
        sqrt, zero = ctx.sqrt, ctx.mpc(0)
        s, tau, s_prime = ctx.mpc(s), ctx.mpc(tau), ctx.mpc(s_prime)
        f = [[zero] * dim for _ in range(dim)]
        root_tau = ctx.sqrt(tau)
    roots = [sqrt(k) for k in range(dim + 1)]
    rows = f if ctx is not None else None

    def get(i, j):
        return rows[i][j] if ctx is not None else f[i, j]

    def put(i, j, v):
        if ctx is not None:
            rows[i][j] = v
        else:
            f[i, j] = v

    put(0, 0, root_tau)
    for j in range(2, dim, 2):
        put(0, j, get(0, j - 2) * s_prime * roots[j] * roots[j - 1] / (j // 2))
    for i in range(0, dim - 1):
        for j in range(dim):
            value = 2 * s * roots[i] * get(i - 1, j) if i > 0 else zero
            if j > 0:
                value += tau * roots[j] * get(i, j - 1)
            put(i + 1, j, value / roots[i + 1])
    if ctx is None:
        return f
    return np.array([[complex(v) for v in row] for row in rows])


def fresnel_normal_ordered(abcd: ABCDState, dim: int = DEFAULT_DIM, dps: Optional[int] = None) -> TruncatedOperator:
    """Fresnel operator from the normal-ordered (a, a+) factorization.

    Above 64 levels the recurrence is run in multiprecision (``dps`` digits,
    default 30 + dim // 4); its error grows with index in double precision.
    """
    dim = _check_dim(dim)
    _check_symplectic(abcd)
    s, tau, s_prime = normal_ordered_coefficients(abcd)
    if dps is None and dim <= FLOAT_RECURRENCE_MAX_DIM:
        entries = _normal_ordered_entries(s, tau, s_prime, dim)
    else:
        import mpmath

        ctx = mpmath.mp.clone() if hasattr(mpmath.mp, "clone") else mpmath.MPContext()
        ctx.dps = dps or 30 + dim // 4
        entries = _normal_ordered_entries(s, tau, s_prime, dim, ctx)
    return TruncatedOperator(dim, entries)


def _block_norm(m: np.ndarray, block: int) -> float:
    return float(np.linalg.norm(m[:block, :block], 2))


def verify_similarity(f_matrix, abcd: ABCDState, dim: Optional[int] = None, block: Optional[int] = None,
                      form: str = "intertwine") -> tuple[float, float, float, float]:
    """Defects of F X F+ = DX - BP, F+ X F = AX + BP, F P F+ = AP - CX, F+ P F = CX + DP.

    ``form="intertwine"`` checks the equivalent relations F X = (DX - BP) F,
    X F = F (AX + BP), F P = (AP - CX) F, P F = F (CX + DP). X and P are
    tridiagonal, so on the leading block no sum is cut by the truncation and
    the defect measures only the accuracy of F's matrix elements.
    ``form="conjugate"`` evaluates F X F+ literally, which also picks up the
    Fock levels the squeezed block leaks above ``dim``.
    """
    f = f_matrix.entries if isinstance(f_matrix, TruncatedOperator) else np.asarray(f_matrix)
    dim = f.shape[0] if dim is None else dim
    block = dim // 2 if block is None else block
    x, p = quadrature_matrices(dim)
    a, b, c, d = abcd.a, abcd.b, abcd.c, abcd.d
    fh = f.conj().T
    if form == "intertwine":
        pairs = (
            (f @ x, (d * x - b * p) @ f),
            (x @ f, f @ (a * x + b * p)),
            (f @ p, (a * p - c * x) @ f),
            (p @ f, f @ (c * x + d * p)),
        )
    elif form == "conjugate":
        pairs = (
            (f @ x @ fh, d * x - b * p),
            (fh @ x @ f, a * x + b * p),
            (f @ p @ fh, a * p - c * x),
            (fh @ p @ f, c * x + d * p),
        )
    else:
        raise ValueError(f"unknown form {form!r}")
    return tuple(_block_norm(lhs - rhs, block) for lhs, rhs in pairs)


def relative_phase(f1: TruncatedOperator, f2: TruncatedOperator, block: Optional[int] = None) -> tuple[float, float]:
    """Best global phase theta with f1 ~ e^{i theta} f2 on the block, and the residual norm after alignment."""
    block = f1.dim // 2 if block is None else block
    m1, m2 = f1.entries[:block, :block], f2.entries[:block, :block]
    overlap = np.vdot(m2.ravel(), m1.ravel())
    theta = float(np.angle(overlap)) if abs(overlap) > 0 else 0.0
    return theta, _block_norm(m1 - np.exp(1j * theta) * m2, block)


def squeezed_number_state(abcd: ABCDState, n: int, dim: int = DEFAULT_DIM, method: str = "normal") -> np.ndarray:
    """Fock coefficients of F^{-1}|n>, i.e. column n of F^dagger.

    Raises StabilityRangeError if n >= dim/2 or the truncated vector has lost
    more than 1e-8 of its norm to levels above ``dim``.
    """
    dim = _check_dim(dim)
    if int(n) != n or n < 0 or n >= dim // 2:
        raise StabilityRangeError(f"n = {n} needs n < dim/2 = {dim // 2} for truncation headroom")
    build = {"normal": fresnel_normal_ordered, "canonical": fresnel_canonical}[method]
    f = build(abcd, dim)
    coeffs = f.entries[int(n), :].conj()
    deficit = abs(float(np.vdot(coeffs, coeffs).real) - 1.0)
    if deficit > 1e-8:
        raise StabilityRangeError(f"F^-1|{n}> leaks {deficit:.2e} of its norm above dim={dim}; increase dim")
    return coeffs


def render_fock_state(coeffs: np.ndarray, spec: OscillatorSpec, grid: GridSpec, t: float = 0.0) -> WavefunctionGrid:
    """Position wavefunction sum_k c_k chi_k(x) in the reduced oscillator's eigenbasis."""
    coeffs = np.asarray(coeffs, dtype=complex)
    table = eigenfunction_table(len(coeffs) - 1, spec, grid.x)
    return WavefunctionGrid(grid, coeffs @ table, float(t), spec)


def protected_block(f: TruncatedOperator, tol: float = 1e-8) -> int:
    """Largest K such that F|k> and F^dagger|k>, k < K, keep all but ``tol`` of their norm inside ``dim``.

    Squeezing pushes high Fock levels out of the basis, so this is where
    unitarity can be checked at all.
    """
    cols = np.sum(np.abs(f.entries) ** 2, axis=0)
    rows = np.sum(np.abs(f.entries) ** 2, axis=1)
    bad = (np.abs(cols - 1.0) > tol) | (np.abs(rows - 1.0) > tol)
    return int(np.argmax(bad)) if bad.any() else f.dim
