"""Shared random generators and assertion helpers for the test suite."""
import numpy as np


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_unitary(rng, n):
    """Haar-distributed unitary via QR with the phase convention fixed."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(a)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def assert_multiset_close(actual, expected, tol):
    """Match two unordered collections of complex numbers pairwise within tol."""
    remaining = [complex(z) for z in actual]
    assert len(remaining) == len(expected)
    for target in expected:
        best = min(range(len(remaining)), key=lambda k: abs(remaining[k] - target))
        gap = abs(remaining[best] - target)
        assert gap <= tol, f"no match for {target} within {tol} (closest off by {gap:.3e})"
        remaining.pop(best)


def read_csv(path):
    """Parse a CSV written by the command line into (header, float rows)."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().split("\n")
    assert lines[-1] == "", "file must end with a newline"
    header = lines[0].split(",")
    rows = [[float(tok) for tok in line.split(",")] for line in lines[1:-1]]
    return header, rows
