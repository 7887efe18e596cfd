import numpy as np
import pytest

from entdyn.errors import (
    DimensionMismatchError,
    InvalidStateError,
    LeakyStateError,
    NotHermitianError,
    NotPSDError,
    OutsideBlochBallError,
)
from entdyn.linalg import kron
from entdyn.quantum import (
    bell_state,
    bloch_from_density,
    concurrence,
    concurrence_2x2_embedded,
    density_from_bloch,
    density_from_pure,
    devectorize,
    embed_23,
    purity,
    restrict_23,
    validate_density,
    vectorize,
)
from helpers import random_density, random_pure, random_unitary


def decayed_coherence_state(t, rate=1.0):
    """Density matrix of the pair-coherence family: equal central
    populations 1/2 and central coherences (1/2) e^(-rate t)."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = rho[2, 2] = 0.5
    rho[1, 2] = rho[2, 1] = 0.5 * np.exp(-rate * t)
    return rho


class TestStatesAndValidation:
    def test_bell_state_vector(self):
        assert np.allclose(bell_state(), np.array([0, 1, 1, 0]) / np.sqrt(2), atol=1e-15)

    def test_density_from_pure_is_projector(self):
        rho = density_from_pure(bell_state())
        assert np.max(np.abs(rho @ rho - rho)) <= 1e-12

    def test_density_from_pure_rejects_unnormalized(self):
        with pytest.raises(InvalidStateError):
            density_from_pure(np.array([1.0, 1.0]))

    def test_validate_density_accepts_valid(self):
        rng = np.random.default_rng(21)
        validate_density(random_density(rng, 4))

    def test_validate_density_rejects_bad_trace(self):
        with pytest.raises(InvalidStateError):
            validate_density(np.eye(4) / 2)

    def test_validate_density_rejects_non_hermitian(self):
        rho = np.eye(4) / 4 + 0.0j
        rho[0, 1] = 1e-3
        with pytest.raises(NotHermitianError):
            validate_density(rho)

    def test_validate_density_rejects_indefinite(self):
        with pytest.raises(NotPSDError):
            validate_density(np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex))


class TestVectorization:
    def test_bell_density_layout(self):
        r = vectorize(density_from_pure(bell_state()))
        expected = 0.5 * np.array([0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0])
        assert np.allclose(r, expected, atol=1e-15)

    def test_round_trip_is_exact(self):
        rng = np.random.default_rng(22)
        for n in (2, 4):
            rho = random_density(rng, n)
            assert np.array_equal(devectorize(vectorize(rho)), rho)

    def test_maximally_mixed_layout(self):
        r = vectorize(np.eye(4) / 4)
        assert np.allclose(r[[0, 5, 10, 15]], 0.25, atol=1e-15)
        mask = np.ones(16, dtype=bool)
        mask[[0, 5, 10, 15]] = False
        assert np.all(r[mask] == 0)

    def test_devectorize_rejects_bad_length(self):
        with pytest.raises(DimensionMismatchError):
            devectorize(np.zeros(5))

    def test_devectorize_validates_on_request(self):
        with pytest.raises(InvalidStateError):
            devectorize(np.zeros(16), validate=True)


class TestBloch:
    def test_maximally_mixed_is_origin(self):
        assert np.allclose(bloch_from_density(np.eye(2) / 2), [0, 0, 0], atol=1e-15)

    def test_ground_state_is_north_pole(self):
        assert np.allclose(bloch_from_density(np.diag([1.0, 0.0])), [0, 0, 1], atol=1e-15)

    def test_bell_block_points_along_x(self):
        block = restrict_23(density_from_pure(bell_state()))
        assert np.allclose(bloch_from_density(block), [1, 0, 0], atol=1e-12)

    def test_round_trips(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            s = rng.normal(size=3)
            s *= rng.uniform(0, 1) / np.linalg.norm(s)
            assert np.max(np.abs(bloch_from_density(density_from_bloch(s)) - s)) <= 1e-12
            rho = random_density(rng, 2)
            rebuilt = density_from_bloch(bloch_from_density(rho))
            assert np.max(np.abs(rebuilt - rho)) <= 1e-12

    def test_purity_from_bloch_norm(self):
        rng = np.random.default_rng(24)
        for _ in range(200):
            rho = random_density(rng, 2)
            s = bloch_from_density(rho)
            assert abs(purity(rho) - 0.5 * (1 + s @ s)) <= 1e-12

    def test_rejects_outside_ball(self):
        with pytest.raises(OutsideBlochBallError):
            density_from_bloch([1.1, 0.0, 0.0])


class TestBlockRestriction:
    def test_bell_block(self):
        block = restrict_23(density_from_pure(bell_state()))
        assert np.allclose(block, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_embed_maximally_mixed(self):
        out = embed_23(np.eye(2) / 2)
        assert np.allclose(out, np.diag([0.0, 0.5, 0.5, 0.0]), atol=1e-15)

    def test_decayed_coherence_family(self):
        for t in (0.0, 0.5, 2.0):
            block = restrict_23(decayed_coherence_state(t))
            kappa = 0.5 * np.exp(-t)
            assert np.allclose(block, [[0.5, kappa], [kappa, 0.5]], atol=1e-15)

    def test_embed_then_restrict_round_trip(self):
        rng = np.random.default_rng(25)
        rho = random_density(rng, 2)
        assert np.array_equal(restrict_23(embed_23(rho)), rho)

    def test_restrict_rejects_leaky(self):
        with pytest.raises(LeakyStateError):
            restrict_23(np.diag([0.1, 0.45, 0.45, 0.0]).astype(complex))


class TestPurity:
    def test_pure_states(self):
        rng = np.random.default_rng(26)
        for n in (2, 4):
            rho = density_from_pure(random_pure(rng, n))
            assert abs(purity(rho) - 1.0) <= 1e-12

    def test_maximally_mixed(self):
        assert abs(purity(np.eye(2) / 2) - 0.5) <= 1e-15
        assert abs(purity(np.eye(4) / 4) - 0.25) <= 1e-15

    def test_balanced_coherence_value(self):
        # diagonal (1/2, 1/2) with off-diagonal i/3: trace of the square is
        # 1/2 + 2/9 = 13/18
        rho = np.array([[0.5, 1j / 3], [-1j / 3, 0.5]])
        assert abs(purity(rho) - 13.0 / 18.0) <= 1e-12


class TestConcurrence:
    def test_bell_state_is_one(self):
        assert abs(concurrence(density_from_pure(bell_state())) - 1.0) <= 1e-12

    def test_product_states_are_zero(self):
        for k in range(4):
            v = np.zeros(4, dtype=complex)
            v[k] = 1.0
            assert concurrence(density_from_pure(v)) <= 1e-10
        rng = np.random.default_rng(27)
        for _ in range(100):
            v = kron(random_unitary(rng, 2), random_unitary(rng, 2)) @ np.array(
                [1, 0, 0, 0], dtype=complex
            )
            assert concurrence(density_from_pure(v.reshape(-1))) <= 1e-10

    def test_rotation_family(self):
        for theta in np.linspace(0.0, np.pi, 41):
            v = np.array([0, np.cos(theta), 1j * np.sin(theta), 0])
            c = concurrence(density_from_pure(v))
            assert abs(c - abs(np.sin(2 * theta))) <= 1e-12

    def test_decayed_coherence_family(self):
        for t in np.linspace(0.0, 5.0, 21):
            assert abs(concurrence(decayed_coherence_state(t)) - np.exp(-t)) <= 1e-12

    def test_pure_block_states(self):
        rng = np.random.default_rng(28)
        for _ in range(500):
            w = random_pure(rng, 2)
            rho = density_from_pure(np.array([0, w[0], w[1], 0]))
            assert abs(concurrence(rho) - 2 * abs(w[0] * np.conj(w[1]))) <= 1e-10

    def test_range_on_random_mixed_states(self):
        rng = np.random.default_rng(29)
        for _ in range(10_000):
            c = concurrence(random_density(rng, 4))
            assert 0.0 <= c <= 1.0 + 1e-12

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(30)
        for _ in range(300):
            rho = random_density(rng, 4)
            u = kron(random_unitary(rng, 2), random_unitary(rng, 2))
            rotated = u @ rho @ u.conj().T
            assert abs(concurrence(rotated) - concurrence(rho)) <= 1e-9

    def test_isotropic_mixture_threshold(self):
        # mixing the Bell state with weight p into white noise gives
        # concurrence max(0, (3p - 1) / 2)
        bell = density_from_pure(bell_state())
        for p in (0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0):
            rho = p * bell + (1 - p) * np.eye(4) / 4
            assert abs(concurrence(rho) - max(0.0, (3 * p - 1) / 2)) <= 1e-12

    def test_rejects_non_hermitian(self):
        rho = np.eye(4, dtype=complex) / 4
        rho[0, 1] = 1e-3
        with pytest.raises(NotHermitianError):
            concurrence(rho)

    def test_rejects_wrong_shape(self):
        with pytest.raises(DimensionMismatchError):
            concurrence(np.eye(2) / 2)


class TestEmbeddedConcurrence:
    def test_maximally_mixed_block(self):
        assert concurrence_2x2_embedded(np.eye(2) / 2) == 0.0

    def test_bell_block(self):
        assert abs(concurrence_2x2_embedded(0.5 * np.ones((2, 2))) - 1.0) <= 1e-12

    def test_balanced_coherence_value(self):
        rho = np.array([[0.5, 1j / 3], [-1j / 3, 0.5]])
        assert abs(concurrence_2x2_embedded(rho) - 2.0 / 3.0) <= 1e-12

    def test_matches_full_computation_on_supported_states(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            rho = random_density(rng, 2)
            full = concurrence(embed_23(rho))
            assert abs(concurrence_2x2_embedded(rho) - full) <= 1e-10
            assert abs(concurrence_2x2_embedded(restrict_23(embed_23(rho))) - full) <= 1e-10
