import numpy as np
import pytest

from ddpc.lti import (
    GenerationError,
    LtiSystem,
    extended_observability,
    impulse_response,
    input_output_map,
    noise_factor,
    noise_output_map,
    noise_output_variance,
    random_system,
    satisfies_rank_conditions,
    simulate,
)


def scalar_system(a=0.5, b=1.0, c=1.0, omega=0.0):
    return LtiSystem(A=[[a]], B=[[b]], C=[[c]], omega_w=[[omega]])


class TestLtiSystem:
    def test_scalar_system_valid(self):
        sys = scalar_system()
        assert sys.order == 1
        assert satisfies_rank_conditions(sys)

    def test_uncontrollable_rejected_by_check(self):
        sys = LtiSystem(A=np.eye(2), B=np.zeros((2, 1)), C=[[1.0, 0.0]])
        assert not satisfies_rank_conditions(sys)

    def test_asymmetric_noise_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            LtiSystem(A=np.eye(2), B=[[1], [0]], C=[[1, 0]], omega_w=[[1, 2], [0, 1]])

    def test_immutable(self):
        sys = scalar_system()
        with pytest.raises(ValueError):
            sys.A[0, 0] = 2.0


class TestRandomSystem:
    def test_seeded_draw_passes_rank_checks(self):
        rng = np.random.default_rng(0)
        sys = random_system(3, rng)
        assert sys.order == 3
        assert satisfies_rank_conditions(sys)
        np.testing.assert_allclose(sys.omega_w, np.zeros((3, 3)))

    def test_deterministic_per_seed(self):
        s1 = random_system(3, np.random.default_rng(5))
        s2 = random_system(3, np.random.default_rng(5))
        np.testing.assert_array_equal(s1.A, s2.A)
        np.testing.assert_array_equal(s1.B, s2.B)
        np.testing.assert_array_equal(s1.C, s2.C)

    def test_exhausted_attempts_raise(self):
        rng = np.random.default_rng(1)
        with pytest.raises(GenerationError):
            random_system(2, rng, max_attempts=0)

    def test_spectral_radius_rescale(self):
        sys = random_system(4, np.random.default_rng(2), spectral_radius=0.9)
        assert np.max(np.abs(np.linalg.eigvals(sys.A))) == pytest.approx(0.9)

    def test_with_noise(self):
        sys = random_system(2, np.random.default_rng(3)).with_noise(0.75 * np.eye(2))
        np.testing.assert_allclose(sys.omega_w, 0.75 * np.eye(2))


class TestSimulate:
    def test_scalar_noise_free(self):
        # hand iteration: x1 = 1, y1 = 1; x2 = 0.5, y2 = 0.5
        traj = simulate(scalar_system(), [1.0, 0.0], np.random.default_rng(0))
        np.testing.assert_allclose(traj.y, [1.0, 0.5])
        np.testing.assert_allclose(traj.v, 0.0, atol=1e-14)

    def test_zero_input_zero_noise(self):
        sys = random_system(3, np.random.default_rng(4))
        traj = simulate(sys, np.zeros(6), np.random.default_rng(0))
        np.testing.assert_allclose(traj.y, 0.0, atol=1e-14)

    def test_noise_matches_recorded_draws(self):
        # mirror the documented draw order: a (T, n) standard-normal block
        sys = scalar_system(omega=1.0)
        u = np.array([1.0, -2.0, 0.5])
        traj = simulate(sys, u, np.random.default_rng(99))
        w = np.random.default_rng(99).standard_normal((3, 1)) @ noise_factor(
            sys.omega_w
        ).T
        gprime = noise_output_map(sys, 3)
        np.testing.assert_allclose(traj.v, gprime @ w.ravel(), atol=1e-12)

    def test_simulation_consistency_random(self):
        # y = G u + G' w for the recorded draws, 100 random triples
        rng = np.random.default_rng(11)
        for k in range(100):
            n = int(rng.integers(1, 5))
            T = int(rng.integers(1, 9))
            sys = random_system(n, rng).with_noise(0.5 * np.eye(n))
            u = rng.normal(size=T)
            seed = 1000 + k
            traj = simulate(sys, u, np.random.default_rng(seed))
            w = np.random.default_rng(seed).standard_normal((T, n)) @ noise_factor(
                sys.omega_w
            ).T
            y_rebuilt = input_output_map(sys, T) @ u + noise_output_map(sys, T) @ w.ravel()
            err = np.linalg.norm(traj.y - y_rebuilt)
            assert err <= 1e-10 * max(1.0, np.linalg.norm(traj.y))

    def test_noise_free_v_is_zero(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            sys = random_system(int(rng.integers(1, 4)), rng)
            traj = simulate(sys, rng.normal(size=5), rng)
            np.testing.assert_allclose(traj.v, 0.0, atol=1e-12)


class TestOperators:
    def test_input_output_map_scalar(self):
        g = input_output_map(scalar_system(), 3)
        np.testing.assert_allclose(g[:, 0], [1.0, 0.5, 0.25])
        np.testing.assert_allclose(g, [[1, 0, 0], [0.5, 1, 0], [0.25, 0.5, 1]])

    def test_zero_input_matrix(self):
        sys = LtiSystem(A=np.eye(2), B=np.zeros((2, 1)), C=[[1.0, 1.0]])
        np.testing.assert_allclose(input_output_map(sys, 4), np.zeros((4, 4)))

    def test_horizon_one(self):
        sys = scalar_system(b=2.0, c=3.0)
        np.testing.assert_allclose(input_output_map(sys, 1), [[6.0]])

    def test_leading_block_consistency(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            sys = random_system(int(rng.integers(1, 5)), rng)
            T, L = 7, int(rng.integers(1, 8))
            np.testing.assert_allclose(
                input_output_map(sys, T)[:L, :L], input_output_map(sys, L)
            )

    def test_noise_output_map_scalar(self):
        np.testing.assert_allclose(
            noise_output_map(scalar_system(), 2), [[1, 0], [0.5, 1]]
        )

    def test_noise_output_map_zero_c(self):
        sys = LtiSystem(A=np.eye(2), B=[[1], [0]], C=[[0.0, 0.0]])
        np.testing.assert_allclose(noise_output_map(sys, 3), np.zeros((3, 6)))

    def test_noise_output_map_horizon_one(self):
        sys = LtiSystem(A=np.eye(2), B=[[1], [0]], C=[[1.0, 2.0]])
        np.testing.assert_allclose(noise_output_map(sys, 1), [[1.0, 2.0]])

    def test_extended_observability_scalar(self):
        np.testing.assert_allclose(
            extended_observability(scalar_system(), 3), [[1.0], [0.5], [0.25]]
        )

    def test_extended_observability_depth_one(self):
        sys = LtiSystem(A=np.eye(2), B=[[1], [0]], C=[[1.0, -1.0]])
        np.testing.assert_allclose(extended_observability(sys, 1), [[1.0, -1.0]])

    def test_impulse_response_matches_map(self):
        sys = random_system(3, np.random.default_rng(14))
        np.testing.assert_allclose(
            impulse_response(sys, 5), input_output_map(sys, 5)[:, 0]
        )


class TestNoiseOutputVariance:
    def test_scalar_two_steps(self):
        # 1 + 0.25 for a = 0.5, c = 1, omega = 1
        assert noise_output_variance(scalar_system(omega=1.0), 2) == pytest.approx(1.25)

    def test_noise_free(self):
        assert noise_output_variance(scalar_system(), 4) == 0.0

    def test_single_step(self):
        sys = LtiSystem(A=np.eye(2), B=[[1], [0]], C=[[1.0, 2.0]], omega_w=np.eye(2))
        assert noise_output_variance(sys, 1) == pytest.approx(5.0)

    def test_monotone_in_horizon(self):
        rng = np.random.default_rng(15)
        for _ in range(10):
            n = int(rng.integers(1, 4))
            sys = random_system(n, rng).with_noise(0.3 * np.eye(n))
            values = [noise_output_variance(sys, T) for T in range(1, 8)]
            assert np.all(np.diff(values) >= -1e-12)


class TestNoiseFactor:
    def test_psd_singular_handled(self):
        omega = np.array([[1.0, 1.0], [1.0, 1.0]])
        F = noise_factor(omega)
        np.testing.assert_allclose(F @ F.T, omega, atol=1e-12)

    def test_indefinite_rejected(self):
        with pytest.raises(ValueError, match="PSD"):
            noise_factor(np.array([[1.0, 0.0], [0.0, -1.0]]))

    def test_zero_is_zero(self):
        np.testing.assert_allclose(noise_factor(np.zeros((3, 3))), np.zeros((3, 3)))
