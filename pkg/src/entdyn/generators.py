"""Hamiltonians, dissipators, and Liouvillian assembly.

Superoperators act on row-major Liouville vectors (see quantum.vectorize),
so left multiplication A rho maps to kron(A, I), right multiplication
rho B to kron(I, B.T), and the two-sided A rho B to kron(A, B.T).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError
from .linalg import kron

__all__ = [
    "HamiltonianParams",
    "build_hamiltonian",
    "hamiltonian_superop",
    "lindblad_dissipator_superop",
    "validate_dephasing_rates",
    "validate_relaxation_rates",
    "phenomenological_superop",
    "PureDephasing",
    "pure_dephasing_from_amplitudes",
    "ConstraintCheck",
    "check_dephasing_constraints",
    "assemble_liouvillian",
]


@dataclass(frozen=True)
class HamiltonianParams:
    """Couplings of the two-qubit Hamiltonian a Z1 + b Z2 + c (XX + YY + ZZ).

    a and b are the local level splittings, c the isotropic exchange
    strength. The off-diagonal coupling between the one-excitation levels
    is y = 2c.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")

    @property
    def level_shifts(self) -> tuple[float, float, float, float]:
        """Diagonal entries (x1, x2, x3, x4) of the Hamiltonian."""
        a, b, c = self.a, self.b, self.c
        return (a + b + c, a - b - c, -a + b - c, -a - b + c)

    @property
    def coupling(self) -> float:
        """Off-diagonal element y = 2c between the one-excitation levels."""
        return 2.0 * self.c


def build_hamiltonian(params: HamiltonianParams) -> np.ndarray:
    """Dense 4x4 Hamiltonian: diagonal level shifts plus the central coupling."""
    h = np.diag(np.asarray(params.level_shifts, dtype=complex))
    h[1, 2] = h[2, 1] = params.coupling
    return h


def _square(mat, name: str) -> np.ndarray:
    out = np.asarray(mat, dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {out.shape}")
    return out


def hamiltonian_superop(h, atol: float = 1e-10) -> np.ndarray:
    """Superoperator of the coherent part, -i (H rho - rho H)."""
    mat = _square(h, "h")
    dev = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
    if dev > atol:
        raise NotHermitianError(f"max|h - h†| = {dev:.3e} exceeds {atol:.1e}")
    eye = np.eye(mat.shape[0], dtype=complex)
    return -1j * (kron(mat, eye) - kron(eye, mat.T))


def lindblad_dissipator_superop(v) -> np.ndarray:
    """Superoperator of the dissipator V rho V† - (V†V rho + rho V†V)/2.

    For several collapse operators, sum one superoperator per operator.
    """
    mat = _square(v, "v")
    eye = np.eye(mat.shape[0], dtype=complex)
    vdv = mat.conj().T @ mat
    return kron(mat, mat.conj()) - 0.5 * kron(vdv, eye) - 0.5 * kron(eye, vdv.T)


def validate_dephasing_rates(rates) -> np.ndarray:
    """Check a dephasing-rate matrix: real, symmetric, nonnegative, zero diagonal."""
    mat = np.asarray(rates, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"rates must be square, got shape {mat.shape}")
    if np.any(np.diag(mat) != 0):
        raise ValueError("dephasing rates must have a zero diagonal")
    if np.max(np.abs(mat - mat.T)) > 0:
        raise ValueError("dephasing rates must be symmetric")
    if np.any(mat < 0):
        raise ValueError("dephasing rates must be nonnegative")
    return mat


def validate_relaxation_rates(rates) -> np.ndarray:
    """Check a relaxation-rate matrix: real, nonnegative, zero diagonal.

    Entry (n, k) is the rate of the population transfer from level k to
    level n; no symmetry is required.
    """
    mat = np.asarray(rates, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"rates must be square, got shape {mat.shape}")
    if np.any(np.diag(mat) != 0):
        raise ValueError("relaxation rates must have a zero diagonal")
    if np.any(mat < 0):
        raise ValueError("relaxation rates must be nonnegative")
    return mat


def phenomenological_superop(dephasing, relaxation=None) -> np.ndarray:
    """Dissipation superoperator built directly from observable rates.

    dephasing[i, j] is the decay rate of the coherence r[i*n + j]; the
    optional relaxation[n, k] moves population from level k to level n
    while draining the source diagonal, keeping the total trace constant.
    """
    deph = validate_dephasing_rates(dephasing)
    n = deph.shape[0]
    if relaxation is None:
        relax = np.zeros((n, n))
    else:
        relax = validate_relaxation_rates(relaxation)
        if relax.shape != deph.shape:
            raise DimensionMismatchError(
                f"relaxation shape {relax.shape} does not match dephasing {deph.shape}"
            )
    ld = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if i != j:
                ld[i * n + j, i * n + j] = -deph[i, j]
    for i in range(n):
        for k in range(n):
            if i != k:
                ld[i * n + i, k * n + k] += relax[i, k]
                ld[k * n + k, k * n + k] -= relax[i, k]
    return ld


class PureDephasing(NamedTuple):
    rates: np.ndarray
    superop: np.ndarray


def pure_dephasing_from_amplitudes(amplitudes) -> PureDephasing:
    """Pure-dephasing rates and superoperator from diagonal coupling amplitudes.

    Each level i carries its own independent channel with collapse operator
    amplitudes[i] |i><i|, so the coherence (i, j) decays at
    (|a_i|^2 + |a_j|^2) / 2 regardless of the amplitudes' phases. The
    returned superoperator is the diagonal rate form; it coincides exactly
    with the sum of the per-level Lindblad dissipators.
    """
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
        raise ValueError("amplitudes contain non-finite entries")
    n = amps.size
    strengths = np.abs(amps) ** 2
    rates = 0.5 * (strengths[:, None] + strengths[None, :])
    np.fill_diagonal(rates, 0.0)
    return PureDephasing(rates, phenomenological_superop(rates))


class ConstraintCheck(NamedTuple):
    physical: bool
    witness: np.ndarray | None


def check_dephasing_constraints(rates, rtol: float = 1e-9) -> ConstraintCheck:
    """Decide whether 4-level dephasing rates come from diagonal amplitudes.

    The rates are physical exactly when nonnegative per-level strengths
    x1..x4 exist with rates[i, j] = (x_i + x_j) / 2. Necessary conditions
    are the pair-sum equalities G12+G34 = G14+G23 = G13+G24; these are
    checked to rtol * max(rates), then the strengths are solved for and
    must come out nonnegative (the equalities alone do not guarantee
    that). On success the witness x is returned, clipped at zero.
    """
    mat = validate_dephasing_rates(rates)
    if mat.shape != (4, 4):
        raise DimensionMismatchError(f"expected 4x4 rates, got {mat.shape}")
    scale = float(np.max(mat))
    tol = rtol * scale
    sums = (mat[0, 1] + mat[2, 3], mat[0, 3] + mat[1, 2], mat[0, 2] + mat[1, 3])
    if max(sums) - min(sums) > tol:
        return ConstraintCheck(False, None)
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    system = np.zeros((len(pairs), 4))
    target = np.zeros(len(pairs))
    for row, (i, j) in enumerate(pairs):
        system[row, i] = system[row, j] = 1.0
        target[row] = 2.0 * mat[i, j]
    x, *_ = np.linalg.lstsq(system, target, rcond=None)
    if np.min(x) < -max(tol, rtol):
        return ConstraintCheck(False, None)
    return ConstraintCheck(True, np.clip(x, 0.0, None))


def assemble_liouvillian(h, dissipators: Sequence[np.ndarray] = ()) -> np.ndarray:
    """Total generator: coherent superoperator plus dissipation superoperators.

    h may be None for purely dissipative dynamics; dissipators are already
    built superoperators (n^2 x n^2) and are summed as given.
    """
    parts = [np.asarray(d, dtype=complex) for d in dissipators]
    if h is not None:
        parts.insert(0, hamiltonian_superop(h))
    if not parts:
        raise ValueError("nothing to assemble: no Hamiltonian and no dissipators")
    shape = parts[0].shape
    for p in parts[1:]:
        if p.shape != shape:
            raise DimensionMismatchError(f"superoperator shapes differ: {shape} vs {p.shape}")
    if shape[0] != shape[1]:
        raise DimensionMismatchError(f"superoperators must be square, got {shape}")
    n = int(round(np.sqrt(shape[0])))
    if n * n != shape[0]:
        raise DimensionMismatchError(f"superoperator size {shape[0]} is not a perfect square")
    return sum(parts)
