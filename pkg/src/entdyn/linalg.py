"""Dense linear-algebra kernels with validated contracts.

Thin wrappers over LAPACK-backed routines. Each function checks its inputs
and raises a typed error instead of leaking library exceptions upward.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
    SingularMatrixError,
)

__all__ = [
    "kron",
    "hermitian_eig",
    "sqrt_psd",
    "expm",
    "solve_linear",
    "eig_real_3x3",
]

#: relative condition-number gate for solve_linear
_COND_LIMIT = 1e12


def _as_matrix(m, name: str = "matrix") -> np.ndarray:
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-dimensional, got ndim={out.ndim}")
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return out


def _as_square(m, name: str = "matrix") -> np.ndarray:
    out = _as_matrix(m, name)
    if out.shape[0] != out.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {out.shape}")
    return out


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(_as_matrix(a, "a"), _as_matrix(b, "b"))


def hermitian_eig(m, atol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (values, vectors) with values real and ascending and vectors
    orthonormal in columns, so m = vectors @ diag(values) @ vectors†.

    Raises NotHermitianError if max|m - m†| exceeds atol, NoConvergenceError
    if the underlying solver fails.
    """
    mat = _as_square(m)
    dev = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
    if dev > atol:
        raise NotHermitianError(f"max|m - m†| = {dev:.3e} exceeds {atol:.1e}")
    try:
        values, vectors = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigensolver failed: {exc}") from exc
    return values, vectors


def sqrt_psd(m, clip: float = 1e-10) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix.

    Eigenvalues in [-clip, 0) are treated as round-off and clipped to zero;
    anything more negative raises NotPSDError.
    """
    values, vectors = hermitian_eig(m)
    if values.size and values[0] < -clip:
        raise NotPSDError(f"eigenvalue {values[0]:.3e} below -{clip:.1e}")
    root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    return 0.5 * (root + root.conj().T)


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring."""
    return scipy.linalg.expm(_as_square(m))


def solve_linear(a, b) -> np.ndarray:
    """Solve a x = b for a square system, with one iterative-refinement step.

    Raises SingularMatrixError when the system is singular or its condition
    number exceeds 1e12.
    """
    mat = _as_square(a, "a")
    rhs = np.asarray(b, dtype=complex)
    if rhs.shape[0] != mat.shape[0]:
        raise DimensionMismatchError(
            f"rhs length {rhs.shape[0]} does not match system size {mat.shape[0]}"
        )
    if mat.size:
        cond = np.linalg.cond(mat)
        if not np.isfinite(cond) or cond > _COND_LIMIT:
            raise SingularMatrixError(f"condition number {cond:.3e} exceeds {_COND_LIMIT:.1e}")
    try:
        x = np.linalg.solve(mat, rhs)
        x = x + np.linalg.solve(mat, rhs - mat @ x)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    return x


def eig_real_3x3(a) -> np.ndarray:
    """Eigenvalues (complex, unordered) of a real 3x3 matrix.

    The only non-Hermitian eigenproblem in scope; kept separate so the
    Hermitian path never sees non-normal input.
    """
    mat = np.asarray(a)
    if mat.shape != (3, 3):
        raise DimensionMismatchError(f"expected shape (3, 3), got {mat.shape}")
    if np.iscomplexobj(mat) and np.any(mat.imag != 0):
        raise ValueError("expected a real matrix")
    mat = np.asarray(mat.real, dtype=float)
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix contains non-finite entries")
    return np.linalg.eigvals(mat)
