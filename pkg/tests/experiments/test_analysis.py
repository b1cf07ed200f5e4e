import numpy as np
import pytest

from components.core.exceptions import SimulationError, TooFewSegmentsError
from components.core.rng import make_rng
from components.billiard.boundary import completely_rough, parse_condition, specular
from components.billiard.dynamics import launch, simulate
from components.billiard.tables import BoxTable, CircleTable, PlatesTable
from components.experiments.analysis import (
    boundedness_report,
    caustic_analysis,
    diffusion_exponent,
    mean_square_displacement,
    parallelism_check,
    recurrence_report,
)
from components.experiments import ensembles
from components.experiments.ensembles import (
    boundedness_experiment,
    run_chunks,
    strip_diffusion_experiment,
)
from components.mechanics.inertia import ball_body


def circle_trajectory(bc, steps=1000, spin=None):
    table = CircleTable(n=2, radius=2.0)
    ball = ball_body(0.5, 2)
    state = launch(table, ball, [0.75, 0.0], [0.3, 1.0], spin=spin)
    return simulate(state, table, bc, ball, steps)


def square(value):
    return value * value


class TestCaustics:
    def test_rough_disc_has_two_caustics(self):
        report = caustic_analysis(circle_trajectory(completely_rough(), spin=[0.7]))
        assert report.passed, report.statistics
        assert report.statistics["radius_gap"] > 1e-3
        assert report.count == 999

    def test_specular_disc_has_one_caustic(self):
        report = caustic_analysis(circle_trajectory(specular()))
        assert report.passed
        assert report.statistics["radius_gap"] < 1e-9

    def test_too_short(self):
        with pytest.raises(TooFewSegmentsError):
            caustic_analysis(circle_trajectory(completely_rough(), steps=3))


class TestBoundedness:
    def test_no_horizontal_motion(self):
        table = PlatesTable(gap=1.0)
        ball = ball_body(0.25, 3)
        state = launch(table, ball, [0.0, 0.0, 0.5], [0.0, 0.0, 1.0])
        report = boundedness_report(simulate(state, table, completely_rough(), ball, 100))
        assert report.statistics["max_excursion"] == pytest.approx(0.0, abs=1e-12)

    def test_rough_plates_bound_and_mixed_plates_drift(self):
        report = boundedness_experiment(steps=2000, seed=1)
        assert report.details["bounded_0"] == "true"
        assert report.details["bounded_1"] == "false"
        assert report.passed
        assert report.statistics["max_excursion_1"] > report.statistics["max_excursion_0"]


class TestRecurrence:
    def test_needs_two_collisions(self):
        with pytest.raises(TooFewSegmentsError):
            recurrence_report(circle_trajectory(completely_rough(), steps=1))

    def test_rough_disc_returns_after_two_collisions_in_velocity(self):
        report = recurrence_report(circle_trajectory(completely_rough(), steps=50))
        assert report.statistics["min_distance"] > 0.0
        assert report.passed is None


class TestDiffusion:
    def test_ballistic_paths(self):
        paths = np.tile(np.arange(1001, dtype=float), (5, 1)) * np.arange(1, 6)[:, None]
        assert diffusion_exponent(paths) == pytest.approx(2.0, abs=1e-9)

    def test_random_walks(self):
        rng = make_rng(4)
        steps = rng.choice([-1.0, 1.0], size=(400, 4000))
        paths = np.hstack([np.zeros((400, 1)), np.cumsum(steps, axis=1)])
        assert diffusion_exponent(paths) == pytest.approx(1.0, abs=0.15)

    def test_msd_starts_at_zero(self):
        paths = np.array([[1.0, 2.0, 4.0], [1.0, 0.0, -1.0]])
        np.testing.assert_allclose(mean_square_displacement(paths), [0.0, 1.0, 6.5])

    def test_paths_too_short(self):
        with pytest.raises(TooFewSegmentsError):
            diffusion_exponent(np.zeros((3, 5)))

    def test_strip_with_every_trajectory_dropped(self, monkeypatch):
        monkeypatch.setattr(ensembles, "_strip_worker", lambda task: None)
        with pytest.raises(SimulationError, match="all 3 strip trajectories"):
            strip_diffusion_experiment(seeds=3, steps=10, seed=1, workers=1)

    def test_strip_defaults_to_rough_or_specular_coin(self, monkeypatch):
        conditions = []
        monkeypatch.setattr(ensembles, "_strip_worker", lambda task: conditions.append(task[1]))
        with pytest.raises(SimulationError):
            strip_diffusion_experiment(seeds=2, steps=10, seed=1, workers=1)
        assert conditions[0].kind == "random"
        assert list(conditions[0].probabilities) == [0.5, 0.5]

    @pytest.mark.slow
    def test_strip_is_diffusive(self):
        report = strip_diffusion_experiment(seeds=100, steps=10000, seed=2024, workers=4)
        assert report.passed, report.statistics


class TestParallelism:
    @pytest.mark.parametrize("bc", ["full", "rank:1:0.3", "none"])
    def test_constant_conditions_are_parallel(self, bc, rng):
        report = parallelism_check(
            CircleTable(n=3, radius=2.0), parse_condition(bc, 3), ball_body(0.5, 3), rng
        )
        assert report.passed, report.details

    def test_box_faces(self, rng):
        report = parallelism_check(
            BoxTable(n=2, sides=[2.0, 1.0]), completely_rough(), ball_body(0.25, 2), rng
        )
        assert report.passed
        assert set(report.details) == {"face0", "face1", "face2", "face3"}

    def test_hemisphere_condition_is_not_parallel(self):
        report = parallelism_check(
            CircleTable(n=3, radius=2.0), parse_condition("hemisphere", 3), ball_body(0.5, 3),
            make_rng(21), samples=16,
        )
        assert not report.passed


class TestChunks:
    def test_serial_order(self):
        assert run_chunks(square, [1, 2, 3], workers=1) == [1, 4, 9]

    def test_pool_order(self):
        assert run_chunks(square, list(range(6)), workers=2) == [0, 1, 4, 9, 16, 25]
