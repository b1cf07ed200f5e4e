import math

import numpy as np
import pytest

from components.core.exceptions import SimulationError
from components.billiard.boundary import completely_rough, parse_condition, specular
from components.billiard.tables import BoxTable
from components.experiments.measure import (
    angle_histogram,
    first_return_angle,
    ks_statistic,
    return_angle_experiment,
    sampler_check,
)
from components.experiments.sampling import (
    angle_cdf,
    angle_density,
    inverse_cdf_angle,
    sample_billiard_measure,
    sample_to_state,
    scaled_velocity,
    state_angle,
)
from components.mechanics.inertia import ball_body
from components.mechanics.metric import energy


@pytest.fixture
def box():
    return BoxTable(n=2, sides=[2.0, 1.0])


@pytest.fixture
def ball():
    return ball_body(0.2, 2)


class TestAngleLaw:
    @pytest.mark.parametrize("d", [3, 6, 10])
    def test_cdf_endpoints(self, d):
        assert angle_cdf(0.0, d) == pytest.approx(0.0)
        assert angle_cdf(math.pi / 2, d) == pytest.approx(1.0)

    def test_density_for_three_dimensions(self):
        phi = np.linspace(0.0, math.pi / 2, 11)
        np.testing.assert_allclose(angle_density(phi, 3), np.sin(2.0 * phi), atol=1e-12)

    @pytest.mark.parametrize("d", [3, 6])
    def test_inverse_cdf(self, d):
        u = np.linspace(0.01, 0.99, 25)
        np.testing.assert_allclose(angle_cdf(inverse_cdf_angle(u, d), d), u, atol=1e-12)

    def test_quantiles_have_small_ks_distance(self):
        count = 1000
        angles = inverse_cdf_angle((np.arange(count) + 0.5) / count, 3)
        assert ks_statistic(angles, 3).statistic <= 1.0 / count

    def test_histogram_counts(self):
        histogram = angle_histogram([0.1, 0.2, 1.5, 2.0], bins=4)
        assert histogram.total == 4
        assert len(histogram.edges) == 5
        assert histogram.counts[-1] == 2


class TestSampler:
    def test_samples_point_inward_with_the_right_energy(self, box, ball, rng):
        samples = sample_billiard_measure(box, 2, ball, 0.5, 50, rng)
        lam = ball.scalar_inertia
        for sample in samples:
            assert sample.cos_angle > 0
            state = sample_to_state(sample, box, ball, 0.5)
            assert energy(ball, state.xi) == pytest.approx(0.5)
            assert np.linalg.norm(scaled_velocity(state, lam)) == pytest.approx(1.0)
            assert state_angle(state, box, lam) == pytest.approx(sample.angle)

    def test_cosine_law(self, box, ball):
        report = sampler_check(box, ball, 20000, seed=5, face=2)
        assert report.statistics["ks_distance"] < 2.0 / math.sqrt(20000)
        assert report.statistics["mean_cos"] == pytest.approx(2.0 / 3.0, abs=0.01)

    def test_uniform_control_differs(self, box, ball):
        report = sampler_check(box, ball, 20000, seed=5, sampler="uniform", face=2)
        assert report.statistics["ks_distance"] > 0.08
        assert not report.passed

    def test_bad_face(self, box, ball, rng):
        with pytest.raises(ValueError):
            sample_billiard_measure(box, 4, ball, 0.5, 10, rng)


class TestReturnAngles:
    def test_first_return(self, box, ball, rng):
        sample = sample_billiard_measure(box, 2, ball, 0.5, 1, rng)[0]
        angle = first_return_angle(sample, box, specular(), ball, 0.5, 1000, rng)
        # specular walls keep the angle to the launch face
        assert angle == pytest.approx(sample.angle, abs=1e-9)

    def test_step_cap(self, box, ball, rng):
        sample = sample_billiard_measure(box, 2, ball, 0.5, 1, rng)[0]
        assert first_return_angle(sample, box, completely_rough(), ball, 0.5, 1, rng) is None

    def test_rough_walls_keep_the_cosine_law(self, box, ball):
        report = return_angle_experiment(box, completely_rough(), ball, 2000, seed=7, threshold=0.05)
        assert report.statistics["ks_distance"] < 0.05
        assert report.statistics["dropped_fraction"] <= 0.001
        assert report.histogram.total == report.count
        assert report.details["face"] == "2"

    def test_specular_walls_keep_the_cosine_law(self, box, ball):
        report = return_angle_experiment(box, specular(), ball, 2000, seed=8, threshold=0.05)
        assert report.passed

    def test_uniform_control_is_rejected(self, box, ball):
        report = return_angle_experiment(box, specular(), ball, 5000, seed=9, sampler="uniform")
        assert report.statistics["ks_distance"] > 0.08
        assert not report.passed

    def test_same_seed_same_report(self, box, ball):
        bc = parse_condition("random:0.5", 2)
        first = return_angle_experiment(box, bc, ball, 200, seed=3, chunk_size=50)
        second = return_angle_experiment(box, bc, ball, 200, seed=3, chunk_size=70)
        assert first.statistics == second.statistics

    def test_nothing_returns(self, box, ball):
        with pytest.raises(SimulationError):
            return_angle_experiment(box, specular(), ball, 5, seed=1, step_cap=1)

    @pytest.mark.slow
    def test_full_size_rectangle(self, box, ball):
        report = return_angle_experiment(
            box, completely_rough(), ball, 100_000, seed=2024, workers=4
        )
        assert report.count + report.statistics["dropped"] == 100_000
        assert report.statistics["ks_distance"] < 0.01
        assert report.passed, report.statistics

    @pytest.mark.slow
    def test_full_size_uniform_control(self, box, ball):
        report = return_angle_experiment(
            box, specular(), ball, 100_000, seed=2025, sampler="uniform", workers=4
        )
        assert report.statistics["ks_distance"] > 0.1
        assert not report.passed

    @pytest.mark.slow
    def test_full_size_three_dimensional_box(self):
        table = BoxTable(n=3, sides=[2.0, 1.0, 1.0])
        report = return_angle_experiment(
            table, completely_rough(), ball_body(0.2, 3), 100_000, seed=2024, workers=4
        )
        assert report.passed, report.statistics
