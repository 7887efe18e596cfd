"""Time evolution and steady states.

Two independent propagation routes are provided on purpose: propagate_expm
exponentiates the generator at every sample, while propagate_ode integrates
the same flow with an embedded Dormand-Prince 4(5) pair. They share no
numerical machinery, so agreement between them is a real cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import quantum
from .errors import (
    DimensionMismatchError,
    InvalidStateError,
    NoConvergenceError,
    NonUniqueSteadyStateError,
    NotHermitianError,
    StepUnderflowError,
)
from .linalg import expm

__all__ = [
    "TimeGrid",
    "Trajectory",
    "unitary_evolve",
    "propagate_expm",
    "propagate_ode",
    "steady_state",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling of a time interval, endpoints included."""

    t_start: float
    t_end: float
    n_samples: int

    def __post_init__(self):
        if not (np.isfinite(self.t_start) and np.isfinite(self.t_end)):
            raise ValueError("time bounds must be finite")
        if self.t_end <= self.t_start:
            raise ValueError(f"t_end {self.t_end} must exceed t_start {self.t_start}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ValueError(f"n_samples must be an integer >= 2, got {self.n_samples}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, int(self.n_samples))

    @property
    def span(self) -> float:
        return self.t_end - self.t_start


@dataclass
class Trajectory:
    """Sampled evolution: times, the states at those times, and named series.

    states holds state vectors (n_samples, d) for unitary runs and density
    matrices (n_samples, n, n) for open-system runs. observables maps a
    series name to a real array over the same samples.
    """

    times: np.ndarray
    states: np.ndarray
    observables: dict[str, np.ndarray] = field(default_factory=dict)


def _density_observables(states: np.ndarray) -> dict[str, np.ndarray]:
    n = states.shape[1]
    obs: dict[str, np.ndarray] = {}
    obs["purity"] = np.array([quantum.purity(s) for s in states])
    if n == 4:
        obs["concurrence"] = np.array([quantum.concurrence(s) for s in states])
    elif n == 2:
        bloch = np.array([quantum.bloch_from_density(s) for s in states])
        obs["bloch_x"] = bloch[:, 0]
        obs["bloch_y"] = bloch[:, 1]
        obs["bloch_z"] = bloch[:, 2]
        obs["bloch_norm"] = np.linalg.norm(bloch, axis=1)
        obs["concurrence"] = np.array(
            [quantum.concurrence_2x2_embedded(s) for s in states]
        )
    return obs


def _density_trajectory(times: np.ndarray, vectors: list[np.ndarray]) -> Trajectory:
    states = np.array([quantum.devectorize(v) for v in vectors])
    return Trajectory(times, states, _density_observables(states))


def unitary_evolve(h, v0, grid: TimeGrid, sign: int = +1) -> Trajectory:
    """Closed-system evolution v(t) = expm(sign * i t H) v0.

    sign selects the convention for the evolution operator and must be +1
    or -1; measures built from |v(t)| are identical for both choices.
    """
    ham = np.asarray(h, dtype=complex)
    if ham.ndim != 2 or ham.shape[0] != ham.shape[1]:
        raise DimensionMismatchError(f"Hamiltonian must be square, got shape {ham.shape}")
    dev = np.max(np.abs(ham - ham.conj().T))
    if dev > 1e-10:
        raise NotHermitianError(f"max|h - h†| = {dev:.3e} exceeds 1e-10")
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    v = np.asarray(v0, dtype=complex).reshape(-1)
    if v.size != ham.shape[0]:
        raise DimensionMismatchError(
            f"state length {v.size} does not match Hamiltonian size {ham.shape[0]}"
        )
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-10:
        raise InvalidStateError(f"initial norm {norm:.12f} is not 1")
    times = grid.times
    states = np.array([expm(sign * 1j * t * ham) @ v for t in times])
    obs = {"norm": np.linalg.norm(states, axis=1)}
    if v.size == 4:
        obs["concurrence"] = np.array(
            [quantum.concurrence(np.outer(s, s.conj())) for s in states]
        )
    return Trajectory(times, states, obs)


def _check_generator_and_state(l, r0) -> tuple[np.ndarray, np.ndarray]:
    gen = np.asarray(l, dtype=complex)
    if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
        raise DimensionMismatchError(f"generator must be square, got shape {gen.shape}")
    n = int(round(np.sqrt(gen.shape[0])))
    if n * n != gen.shape[0]:
        raise DimensionMismatchError(f"generator size {gen.shape[0]} is not a perfect square")
    r = np.asarray(r0, dtype=complex).reshape(-1)
    if r.size != gen.shape[0]:
        raise DimensionMismatchError(
            f"state length {r.size} does not match generator size {gen.shape[0]}"
        )
    return gen, r


def propagate_expm(l, r0, grid: TimeGrid) -> Trajectory:
    """Propagate r(t) = expm(t L) r0, exponentiating at every sample time.

    Exact up to round-off for a time-independent generator; the cost is one
    matrix exponential per sample, negligible at the dimensions in scope.
    """
    gen, r = _check_generator_and_state(l, r0)
    times = grid.times
    vectors = [expm(gen * t) @ r for t in times]
    return _density_trajectory(times, vectors)


# Dormand-Prince 4(5) tableau: stage weights, 5th-order solution weights,
# and the embedded error weights (difference to the 4th-order solution).
_DP_STAGES = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_SOLUTION = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_ERROR = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

_MAX_STEP_ATTEMPTS = 1_000_000


def _dp_step(gen: np.ndarray, y: np.ndarray, h: float):
    """One embedded step: returns (y_new, error_estimate)."""
    k = [gen @ y]
    for row in _DP_STAGES:
        increment = sum(c * ki for c, ki in zip(row, k))
        k.append(gen @ (y + h * increment))
    y_new = y + h * sum(c * ki for c, ki in zip(_DP_SOLUTION, k))
    err = h * sum(c * ki for c, ki in zip(_DP_ERROR, k))
    return y_new, err


def propagate_ode(l, r0, grid: TimeGrid, rtol: float = 1e-10, atol: float = 1e-12) -> Trajectory:
    """Propagate by adaptive Runge-Kutta integration of dr/dt = L r.

    An embedded Dormand-Prince 4(5) pair controls the local error against
    atol + rtol * |r| per component. Raises StepUnderflowError if the
    controller needs a step below 1e-14 of the grid span.
    """
    gen, y = _check_generator_and_state(l, r0)
    if not (rtol > 0 and atol > 0):
        raise ValueError("rtol and atol must be positive")
    times = grid.times
    floor = 1e-14 * grid.span
    vectors = [y.copy()]

    rate = np.linalg.norm(gen @ y)
    size = np.linalg.norm(y)
    h = 0.01 * size / rate if rate > 0 else grid.span / 100
    h = min(max(h, floor), grid.span)

    t = times[0]
    attempts = 0
    for target in times[1:]:
        while target - t > floor:
            h_try = min(h, target - t)
            if h_try < floor:
                raise StepUnderflowError(
                    f"step {h_try:.3e} below floor {floor:.3e} at t = {t:.6g}"
                )
            attempts += 1
            if attempts > _MAX_STEP_ATTEMPTS:
                raise NoConvergenceError(
                    f"integrator exceeded {_MAX_STEP_ATTEMPTS} step attempts"
                )
            y_new, err = _dp_step(gen, y, h_try)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            ratio = np.abs(err) / scale
            peak = float(np.max(ratio))
            err_norm = peak * np.sqrt(np.mean((ratio / peak) ** 2)) if peak > 0 else 0.0
            if err_norm <= 1.0:
                t = t + h_try
                y = y_new
                factor = 5.0 if err_norm == 0 else min(5.0, 0.9 * err_norm ** -0.2)
                h = max(h_try * factor, floor)
            else:
                h = max(h_try * max(0.2, 0.9 * err_norm ** -0.2), floor)
                if h >= h_try:
                    h = 0.5 * h_try
        t = target
        vectors.append(y.copy())
    return _density_trajectory(times, vectors)


def steady_state(l) -> np.ndarray:
    """Unique trace-one kernel element of a Liouvillian.

    Solves L r = 0 together with the trace functional as one stacked
    system; a rank deficiency of that system means the generator admits
    either several normalizable steady states or none, and raises
    NonUniqueSteadyStateError. The result is validated as a density matrix.
    """
    gen = np.asarray(l, dtype=complex)
    if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
        raise DimensionMismatchError(f"generator must be square, got shape {gen.shape}")
    size = gen.shape[0]
    n = int(round(np.sqrt(size)))
    if n * n != size:
        raise DimensionMismatchError(f"generator size {size} is not a perfect square")
    trace_row = quantum.vectorize(np.eye(n, dtype=complex))
    stacked = np.vstack([gen, trace_row])
    rhs = np.zeros(size + 1, dtype=complex)
    rhs[-1] = 1.0
    singular_values = np.linalg.svd(stacked, compute_uv=False)
    rank = int(np.sum(singular_values > singular_values[0] * 1e-12))
    if rank < size:
        raise NonUniqueSteadyStateError(
            f"kernel dimension {size - rank + 1}: steady state is not unique"
        )
    solution, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)
    residual = np.linalg.norm(stacked @ solution - rhs)
    if residual > 1e-8:
        raise NonUniqueSteadyStateError(
            f"no normalizable steady state (residual {residual:.3e})"
        )
    return quantum.devectorize(solution, validate=True)
