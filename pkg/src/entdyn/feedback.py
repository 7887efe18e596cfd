"""Measurement-based direct feedback against collective dephasing.

Models the Wiseman-Milburn scheme: a continuous measurement of strength m
on the first qubit, its signal fed back through a joint X-type drive of
strength f, in competition with environmental dephasing of strength gamma.
The one-excitation block {|01>, |10>} is invariant, so the scheme reduces
to a driven qubit whose Bloch dynamics ds/dt = A s + c is affine and has
closed-form steady-state purity and concurrence when y = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonUniqueSteadyStateError, RequiresZeroYError
from .generators import (
    HamiltonianParams,
    build_hamiltonian,
    hamiltonian_superop,
    lindblad_dissipator_superop,
)
from .linalg import kron, solve_linear
from .quantum import PAULI_X, PAULI_Z

__all__ = [
    "FeedbackParams",
    "wm_full_generator",
    "wm_subspace_generator",
    "BlochSystem",
    "bloch_system",
    "bloch_steady_state",
    "bloch_eigenvalues",
    "SteadyState",
    "steady_state_closed_form",
    "SweepResult",
    "concurrence_sweep",
]


@dataclass(frozen=True)
class FeedbackParams:
    """Strengths of the feedback loop and its environment.

    m is the measurement strength, f the feedback strength, mu the level
    splitting inside the one-excitation block, gamma the environmental
    dephasing strength, and y the open-loop exchange coupling. All are
    rates; m, f, and gamma must be nonnegative.
    """

    m: float
    f: float
    mu: float = 0.0
    gamma: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        for name in ("m", "f", "mu", "gamma", "y"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        for name in ("m", "f", "gamma"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")


def embedding_hamiltonian(params: FeedbackParams) -> HamiltonianParams:
    """Two-qubit couplings whose one-excitation block is mu Z + y X."""
    return HamiltonianParams(a=params.mu / 2, b=-params.mu / 2, c=params.y / 2)


def wm_full_generator(params: FeedbackParams, hamiltonian: HamiltonianParams | None = None) -> np.ndarray:
    """Full 16-dim generator of the feedback master equation.

    The measurement operator is sqrt(m) Z x I, the feedback operator
    sqrt(f) X x X, and the environment couples through sqrt(gamma) Z x I.
    The Hamiltonian is the coherent part plus the feedback correction
    (M†F + FM)/2, which vanishes identically here because Z and X
    anticommute. All three operators preserve the one-excitation block,
    so block-supported states stay block-supported.

    hamiltonian overrides the coherent couplings; by default they are the
    embedding with one-excitation block mu Z + y X.
    """
    if hamiltonian is None:
        hamiltonian = embedding_hamiltonian(params)
    eye = np.eye(2, dtype=complex)
    measurement = np.sqrt(params.m) * kron(PAULI_Z, eye)
    drive = np.sqrt(params.f) * kron(PAULI_X, PAULI_X)
    environment = np.sqrt(params.gamma) * kron(PAULI_Z, eye)
    h = build_hamiltonian(hamiltonian)
    h = h + 0.5 * (measurement.conj().T @ drive + drive @ measurement)
    return (
        hamiltonian_superop(h)
        + lindblad_dissipator_superop(measurement - 1j * drive)
        + lindblad_dissipator_superop(environment)
    )


def wm_subspace_generator(params: FeedbackParams) -> np.ndarray:
    """Qubit generator of the dynamics restricted to the one-excitation block.

    The block sees the Hamiltonian mu Z + y X, the combined
    measurement-feedback operator sqrt(m) Z - i sqrt(f) X, and the
    environmental operator sqrt(gamma) Z.
    """
    h = params.mu * PAULI_Z + params.y * PAULI_X
    combined = np.sqrt(params.m) * PAULI_Z - 1j * np.sqrt(params.f) * PAULI_X
    environment = np.sqrt(params.gamma) * PAULI_Z
    return (
        hamiltonian_superop(h)
        + lindblad_dissipator_superop(combined)
        + lindblad_dissipator_superop(environment)
    )


@dataclass(frozen=True)
class BlochSystem:
    """Affine Bloch dynamics ds/dt = matrix @ s + drive."""

    matrix: np.ndarray
    drive: np.ndarray


def bloch_system(params: FeedbackParams) -> BlochSystem:
    """Bloch-space form of the subspace feedback dynamics.

    The drive enters only the y component, with magnitude 4 sqrt(m f);
    its sign is fixed by the generator (the velocity of the maximally
    mixed state points along -y), which a consistency test pins against
    wm_subspace_generator.
    """
    m, f, mu, gamma, y = params.m, params.f, params.mu, params.gamma, params.y
    matrix = -2.0 * np.array(
        [
            [m + gamma, mu, 0.0],
            [-mu, f + m + gamma, y],
            [0.0, -y, f],
        ]
    )
    drive = np.array([0.0, -4.0 * np.sqrt(m * f), 0.0])
    return BlochSystem(matrix, drive)


def bloch_steady_state(system: BlochSystem) -> np.ndarray:
    """Fixed point of the affine Bloch dynamics, solving matrix s = -drive."""
    return solve_linear(system.matrix, -np.asarray(system.drive, dtype=float)).real


def bloch_eigenvalues(params: FeedbackParams) -> np.ndarray:
    """Closed-form eigenvalues of the Bloch matrix, valid only for y = 0.

    One eigenvalue is -2f; the other two are -f - 2 gamma - 2m plus or
    minus sqrt(f^2 - 4 mu^2), a complex pair when f^2 < 4 mu^2.
    """
    if params.y != 0:
        raise RequiresZeroYError("eigenvalue formula requires y = 0")
    m, f, mu, gamma = params.m, params.f, params.mu, params.gamma
    root = np.sqrt(complex(f * f - 4.0 * mu * mu))
    base = -f - 2.0 * gamma - 2.0 * m
    return np.array([-2.0 * f, base + root, base - root])


@dataclass(frozen=True)
class SteadyState:
    """Steady state of the feedback loop with its purity and concurrence."""

    rho: np.ndarray
    purity: float
    concurrence: float


def steady_state_closed_form(params: FeedbackParams) -> SteadyState:
    """Closed-form steady state of the subspace dynamics for y = 0, f > 0.

    The diagonal is balanced at 1/2; the coherence is
    sqrt(f m) (mu + i (gamma + m)) / (mu^2 + (gamma + m)(gamma + m + f)),
    giving concurrence twice its modulus and purity (1 + C^2) / 2.
    """
    if params.y != 0:
        raise RequiresZeroYError("closed form requires y = 0")
    if params.f == 0:
        raise NonUniqueSteadyStateError("closed form requires f > 0")
    m, f, mu, gamma = params.m, params.f, params.mu, params.gamma
    denom = mu * mu + (gamma + m) * (gamma + m + f)
    off = np.sqrt(f * m) * (mu + 1j * (gamma + m)) / denom
    rho = np.array([[0.5, off], [np.conj(off), 0.5]])
    conc = 2.0 * np.sqrt(m * f) * np.sqrt(mu * mu + (gamma + m) ** 2) / denom
    pur = 0.5 + 2.0 * f * m * (mu * mu + (gamma + m) ** 2) / denom**2
    return SteadyState(rho, float(pur), float(conc))


@dataclass(frozen=True)
class SweepResult:
    """Steady-state concurrence over a measurement/feedback strength grid."""

    m_grid: np.ndarray
    f_grid: np.ndarray
    concurrence: np.ndarray
    log10_one_minus_concurrence: np.ndarray


def concurrence_sweep(m_grid, f_grid, gamma: float, mu: float = 0.0) -> SweepResult:
    """Closed-form steady-state concurrence over all (m, f) grid pairs.

    Entry (i, j) belongs to (m_grid[i], f_grid[j]). gamma must be positive
    so the concurrence stays below one and its deficit has a logarithm.
    """
    m = np.asarray(m_grid, dtype=float).reshape(-1)
    f = np.asarray(f_grid, dtype=float).reshape(-1)
    if m.size == 0 or f.size == 0:
        raise ValueError("grids must be nonempty")
    if np.any(m <= 0) or np.any(f <= 0):
        raise ValueError("grid values must be positive")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    mm = m[:, None]
    ff = f[None, :]
    denom = mu * mu + (gamma + mm) * (gamma + mm + ff)
    conc = 2.0 * np.sqrt(mm * ff) * np.sqrt(mu * mu + (gamma + mm) ** 2) / denom
    return SweepResult(m, f, conc, np.log10(1.0 - conc))
