"""States, vectorization, subspace maps, and entanglement measures.

Density matrices and state vectors are plain complex ndarrays; invariants
are enforced by the validate_* helpers rather than wrapper classes.

Vectorization is row-major: the density-matrix entry (i, j) lands at flat
index i*n + j, so conjugation stays entrywise and A rho B maps to the
superoperator kron(A, B.T).
"""
from __future__ import annotations

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    InvalidStateError,
    LeakyStateError,
    NotHermitianError,
    NotPSDError,
    OutsideBlochBallError,
)

__all__ = [
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "bell_state",
    "density_from_pure",
    "validate_density",
    "vectorize",
    "devectorize",
    "bloch_from_density",
    "density_from_bloch",
    "restrict_23",
    "embed_23",
    "purity",
    "concurrence",
    "concurrence_2x2_embedded",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_YY = np.kron(PAULI_Y, PAULI_Y)

#: population allowed outside the central block when restricting
_LEAK_TOL = 1e-9


def bell_state() -> np.ndarray:
    """The maximally entangled vector (|01> + |10>) / sqrt(2)."""
    return np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)


def density_from_pure(psi) -> np.ndarray:
    """Rank-one density matrix |psi><psi| of a normalized state vector."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-10:
        raise InvalidStateError(f"state norm {norm:.12f} is not 1")
    return np.outer(v, v.conj())


def validate_density(
    rho,
    *,
    herm_atol: float = 1e-10,
    trace_atol: float = 1e-10,
    eig_floor: float = -1e-9,
) -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity of a density matrix.

    Returns the validated array. Raises NotHermitianError, InvalidStateError,
    or NotPSDError respectively.
    """
    mat = np.asarray(rho, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"density matrix must be square, got shape {mat.shape}")
    dev = np.max(np.abs(mat - mat.conj().T))
    if dev > herm_atol:
        raise NotHermitianError(f"max|rho - rho†| = {dev:.3e} exceeds {herm_atol:.1e}")
    tr = np.trace(mat)
    if abs(tr - 1.0) > trace_atol:
        raise InvalidStateError(f"trace {tr:.12f} deviates from 1 beyond {trace_atol:.1e}")
    values, _ = linalg.hermitian_eig(0.5 * (mat + mat.conj().T))
    if values[0] < eig_floor:
        raise NotPSDError(f"eigenvalue {values[0]:.3e} below {eig_floor:.1e}")
    return mat


def vectorize(rho) -> np.ndarray:
    """Flatten a density matrix row-major into a Liouville vector."""
    mat = np.asarray(rho, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {mat.shape}")
    return mat.reshape(-1).copy()


def devectorize(r, validate: bool = False) -> np.ndarray:
    """Reshape a Liouville vector back to an n x n matrix.

    With validate=True the result must pass validate_density; propagation
    intermediates may transiently violate positivity at round-off scale, so
    validation is off by default.
    """
    vec = np.asarray(r, dtype=complex).reshape(-1)
    n = int(round(np.sqrt(vec.size)))
    if n * n != vec.size:
        raise DimensionMismatchError(f"length {vec.size} is not a perfect square")
    mat = vec.reshape(n, n).copy()
    if validate:
        validate_density(mat)
    return mat


def bloch_from_density(rho) -> np.ndarray:
    """Bloch vector (tr(X rho), tr(Y rho), tr(Z rho)) of a qubit state."""
    mat = np.asarray(rho, dtype=complex)
    if mat.shape != (2, 2):
        raise DimensionMismatchError(f"expected shape (2, 2), got {mat.shape}")
    return np.array(
        [np.trace(p @ mat).real for p in (PAULI_X, PAULI_Y, PAULI_Z)]
    )


def density_from_bloch(s) -> np.ndarray:
    """Qubit density matrix (I + s . sigma) / 2 from a Bloch vector."""
    vec = np.asarray(s, dtype=float).reshape(-1)
    if vec.size != 3:
        raise DimensionMismatchError(f"Bloch vector must have 3 components, got {vec.size}")
    norm = np.linalg.norm(vec)
    if norm > 1.0 + 1e-9:
        raise OutsideBlochBallError(f"|s| = {norm:.12f} exceeds 1")
    return 0.5 * (
        np.eye(2, dtype=complex)
        + vec[0] * PAULI_X
        + vec[1] * PAULI_Y
        + vec[2] * PAULI_Z
    )


def restrict_23(rho) -> np.ndarray:
    """Extract the central 2x2 block (basis levels 2 and 3) of a 4x4 state.

    The block spans the one-excitation levels |01> and |10>. Raises
    LeakyStateError if the population outside the block exceeds 1e-9;
    no renormalization is applied.
    """
    mat = np.asarray(rho, dtype=complex)
    if mat.shape != (4, 4):
        raise DimensionMismatchError(f"expected shape (4, 4), got {mat.shape}")
    leak = abs(mat[0, 0].real) + abs(mat[3, 3].real)
    if leak > _LEAK_TOL:
        raise LeakyStateError(f"population {leak:.3e} outside the (2,3) block")
    return mat[1:3, 1:3].copy()


def embed_23(rho) -> np.ndarray:
    """Embed a 2x2 state into the central block of a 4x4 matrix."""
    mat = np.asarray(rho, dtype=complex)
    if mat.shape != (2, 2):
        raise DimensionMismatchError(f"expected shape (2, 2), got {mat.shape}")
    out = np.zeros((4, 4), dtype=complex)
    out[1:3, 1:3] = mat
    return out


def purity(rho) -> float:
    """tr(rho^2), 1 for pure states, 1/n for the maximally mixed state."""
    mat = np.asarray(rho, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {mat.shape}")
    return float(np.trace(mat @ mat).real)


def concurrence(rho) -> float:
    """Two-qubit concurrence of a density matrix.

    With S the principal square root of rho and K = kron(Y, Y), the matrix
    B = S K conj(S) satisfies B B† = S K conj(rho) K S, which shares its
    spectrum with the spin-flip product rho K conj(rho) K. The needed
    square-rooted eigenvalues are therefore the singular values of B,
    which come out with absolute round-off accuracy instead of the
    sqrt(eps) noise a sqrt-of-eigenvalue extraction would put on the zero
    modes. The concurrence is max(l1 - l2 - l3 - l4, 0) over those values
    in descending order. Conjugation is entrywise in the standard basis.
    """
    mat = np.asarray(rho, dtype=complex)
    if mat.shape != (4, 4):
        raise DimensionMismatchError(f"expected shape (4, 4), got {mat.shape}")
    dev = np.max(np.abs(mat - mat.conj().T))
    if dev > 1e-8:
        raise NotHermitianError(f"max|rho - rho†| = {dev:.3e} exceeds 1e-8")
    root = linalg.sqrt_psd(mat, clip=1e-9)
    lam = np.linalg.svd(root @ _YY @ root.conj(), compute_uv=False)
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0))


def concurrence_2x2_embedded(rho) -> float:
    """Concurrence of a qubit state embedded in the central (2,3) block."""
    return concurrence(embed_23(rho))
