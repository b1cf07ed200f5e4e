import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from components.core.exceptions import ContactDistanceError, NotAnInvolutionError
from components.core.rng import make_rng, random_rotation
from components.billiard.boundary import completely_rough, parse_condition, specular
from components.billiard.dynamics import (
    BETA,
    collide,
    collide_2d,
    composite_2d,
    launch,
    reference_contact,
    simulate,
    step,
)
from components.billiard.tables import BoxTable, CircleTable, PlatesTable, StripTable, WedgeTable
from components.experiments.analysis import longitudinal_trace, recurrence_report
from components.lie.models import AlgebraVector, EuclideanElement
from components.lie.operations import vector_to_skew
from components.mechanics.inertia import ball_body
from components.mechanics.metric import energy
from tests.conftest import random_skew

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rough_involution(normal, rank, rng):
    """I - 2 D D^T for `rank` random orthonormal directions orthogonal to `normal`."""
    n = normal.shape[0]
    basis = np.linalg.qr(np.column_stack([normal, rng.standard_normal((n, n - 1))]))[0][:, 1:]
    mixing = np.linalg.qr(rng.standard_normal((n - 1, n - 1)))[0]
    directions = basis @ mixing[:, :rank]
    return np.eye(n) - 2.0 * directions @ directions.T


class TestCollide:
    @given(n=st.sampled_from([2, 3, 4]), seed=seeds, data=st.data())
    @settings(max_examples=40, deadline=None)
    def test_energy_and_involution(self, n, seed, data):
        rank = data.draw(st.integers(min_value=0, max_value=n - 1))
        rng = make_rng(seed)
        R = 0.5
        ball = ball_body(R, n)
        lam = ball.scalar_inertia
        nu = rng.standard_normal(n)
        nu /= np.linalg.norm(nu)
        b_circ = -R * nu
        T = rough_involution(nu, rank, rng)
        xi = AlgebraVector(random_skew(n, rng), rng.standard_normal(n))
        after = collide(xi, b_circ, T, lam, R)
        assert energy(ball, after) == pytest.approx(energy(ball, xi), rel=1e-12)
        # the map is linear and squares to the identity
        back = collide(after, b_circ, T, lam, R)
        np.testing.assert_allclose(back.Z.entries, xi.Z.entries, atol=1e-12)
        np.testing.assert_allclose(back.z, xi.z, atol=1e-12)

    def test_specular_reflection(self, rng):
        R, n = 0.5, 3
        nu = np.array([0.0, 0.0, 1.0])
        xi = AlgebraVector(random_skew(n, rng), rng.standard_normal(n))
        after = collide(xi, -R * nu, np.eye(n), 0.05, R)
        np.testing.assert_allclose(after.Z.entries, xi.Z.entries)
        np.testing.assert_allclose(after.z, xi.z * np.array([1.0, 1.0, -1.0]), atol=1e-15)

    def test_rejects_non_involution(self):
        T = np.diag([2.0, 1.0])
        xi = AlgebraVector(np.zeros((2, 2)), np.array([1.0, -1.0]))
        with pytest.raises(NotAnInvolutionError):
            collide(xi, np.array([0.0, -0.5]), T, 0.0625, 0.5)

    def test_head_on_impact(self):
        # normal incidence without spin: only the normal velocity flips
        xi = AlgebraVector(np.zeros((3, 3)), np.array([0.0, 0.0, -1.0]))
        T = np.diag([-1.0, -1.0, 1.0])
        after = collide(xi, np.array([0.0, 0.0, -0.5]), T, 0.05, 0.5)
        np.testing.assert_allclose(after.z, [0.0, 0.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(after.Z.entries, 0.0, atol=1e-15)

    @given(seed=seeds)
    @settings(max_examples=40, deadline=None)
    def test_planar_formula(self, seed):
        rng = make_rng(seed)
        R = float(rng.uniform(0.2, 2.0))
        lam = R**2 / 4.0
        angle = rng.uniform(0.0, 2.0 * math.pi)
        nu = np.array([math.cos(angle), math.sin(angle)])
        t = np.array([-nu[1], nu[0]])
        omega = float(rng.standard_normal())
        v = rng.standard_normal(2)
        xi = AlgebraVector(vector_to_skew(np.array([omega]), 2), v)
        after = collide(xi, -R * nu, np.eye(2) - 2.0 * np.outer(t, t), lam, R)
        v0, velocity = collide_2d(math.sqrt(2.0 * lam) * omega, v, nu)
        assert math.sqrt(2.0 * lam) * after.Z.entries[1, 0] == pytest.approx(v0, abs=1e-12)
        np.testing.assert_allclose(after.z, velocity, atol=1e-12)

    @given(seed=seeds)
    @settings(max_examples=40, deadline=None)
    def test_composite_form(self, seed):
        rng = make_rng(seed)
        angle = rng.uniform(0.0, 2.0 * math.pi)
        nu = np.array([math.cos(angle), math.sin(angle)])
        v0, v = float(rng.standard_normal()), rng.standard_normal(2)
        first = collide_2d(v0, v, nu)
        second = composite_2d(v0, v, nu)
        assert first[0] == pytest.approx(second[0], abs=1e-12)
        np.testing.assert_allclose(first[1], second[1], atol=1e-12)

    def test_beta(self):
        assert math.cos(BETA) == pytest.approx(1.0 / 3.0)


class TestStep:
    def test_reference_contact(self):
        g = EuclideanElement.identity(2)
        np.testing.assert_allclose(reference_contact(g, np.array([0.0, 0.5]), 0.5), [0.0, 0.5])
        with pytest.raises(ContactDistanceError):
            reference_contact(g, np.array([0.0, 0.6]), 0.5)

    def test_step_keeps_energy_and_contact(self, rng):
        table = BoxTable(n=3, sides=[2.0, 1.0, 1.5])
        ball = ball_body(0.25, 3)
        state = launch(table, ball, [1.0, 0.5, 0.75], [0.3, -0.7, 0.4], spin=[0.5, -1.0, 0.2],
                       rotation=random_rotation(3, rng))
        after = step(state, table, completely_rough(), ball, rng)
        assert energy(ball, after.xi) == pytest.approx(energy(ball, state.xi), rel=1e-12)
        assert np.linalg.norm(after.contact - after.a) == pytest.approx(0.25)
        assert after.rough_rank == 2
        assert after.t > 0

    def test_launch_outside(self):
        with pytest.raises(ValueError):
            launch(CircleTable(n=2, radius=1.0), ball_body(0.5, 2), [0.9, 0.0], [1.0, 0.0])


TABLE_RUNS = [
    (CircleTable(n=2, radius=2.0), "full", [0.5, 0.0], [0.3, 1.0], [0.4]),
    (CircleTable(n=3, radius=2.0), "rank:1:0.4", [0.5, 0.0, 0.1], [0.3, 1.0, 0.2],
     [0.1, 0.2, 0.3]),
    # period-two orbit of a ball of radius 0.25: spin = -2 sin(pi/6) / 0.25
    (WedgeTable(half_angle=math.pi / 6), "full", [3.0, 0.0], [0.0, 1.0], [-4.0]),
    (StripTable(n=2, width=1.0), "random:0.5", [0.0, 0.5], [1.0, 0.7], [1.0]),
    (PlatesTable(gap=1.0), "faces:full/rank:1:0", [0.0, 0.0, 0.5], [0.6, 0.3, 1.0],
     [0.2, -0.1, 0.3]),
    (BoxTable(n=2, sides=[2.0, 1.0]), "random:rank:1:0,0.5", [1.0, 0.5], [1.0, 0.7], [0.3]),
    (BoxTable(n=4, sides=[2.0, 1.0, 1.3, 1.7]), "hemisphere:2", [1.0, 0.5, 0.6, 0.8],
     [1.0, 0.7, 0.3, 0.2], None),
]


def run_table(table, bc, position, velocity, spin, steps):
    ball = ball_body(0.25, table.n)
    state = launch(table, ball, position, velocity, spin=spin)
    trajectory = simulate(state, table, parse_condition(bc, table.n), ball, steps, rng=make_rng(3))
    assert trajectory.completed, trajectory.message
    assert len(trajectory) == steps
    np.testing.assert_allclose(trajectory.energies, energy(ball, state.xi), rtol=1e-9)


class TestSimulate:
    @pytest.mark.parametrize("table, bc, position, velocity, spin", TABLE_RUNS)
    def test_energy_is_conserved(self, table, bc, position, velocity, spin):
        run_table(table, bc, position, velocity, spin, 500)

    @pytest.mark.slow
    @pytest.mark.parametrize("table, bc, position, velocity, spin", TABLE_RUNS)
    def test_energy_is_conserved_over_long_runs(self, table, bc, position, velocity, spin):
        run_table(table, bc, position, velocity, spin, 10_000)

    def test_same_seed_same_trajectory(self):
        table = StripTable(n=2, width=1.0)
        ball = ball_body(0.25, 2)
        state = launch(table, ball, [0.0, 0.5], [1.0, 0.7])
        bc = parse_condition("random:0.5", 2)
        first = simulate(state, table, bc, ball, 200, rng=make_rng(11))
        second = simulate(state, table, bc, ball, 200, rng=make_rng(11))
        np.testing.assert_array_equal(first.centers, second.centers)
        assert [s.rough_rank for s in first.states] == [s.rough_rank for s in second.states]

    def test_single_step_matches_step(self):
        table = CircleTable(n=2, radius=2.0)
        ball = ball_body(0.5, 2)
        state = launch(table, ball, [0.5, 0.0], [0.3, 1.0])
        trajectory = simulate(state, table, completely_rough(), ball, 1, rng=make_rng(1))
        direct = step(state, table, completely_rough(), ball, make_rng(1))
        np.testing.assert_allclose(trajectory.states[0].a, direct.a)
        np.testing.assert_allclose(trajectory.states[0].z, direct.z)

    def test_escape_ends_the_run(self):
        table = WedgeTable(half_angle=math.pi / 6)
        ball = ball_body(0.5, 2)
        state = launch(table, ball, [3.0, 0.0], [1.0, 0.0])
        trajectory = simulate(state, table, completely_rough(), ball, 10)
        assert not trajectory.completed
        assert trajectory.reason == "NoCollision"
        assert trajectory.failed_step == 0
        assert len(trajectory) == 0

    def test_steps_must_be_positive(self):
        table = StripTable(n=2, width=1.0)
        ball = ball_body(0.25, 2)
        with pytest.raises(ValueError):
            simulate(launch(table, ball, [0.0, 0.5], [1.0, 1.0]), table, specular(), ball, 0)

    def test_strip_flight_times_are_constant(self):
        table = StripTable(n=2, width=1.0)
        ball = ball_body(0.25, 2)
        state = launch(table, ball, [0.0, 0.25], [1.0, 1.0], contact=np.zeros(2), face=0)
        trajectory = simulate(state, table, completely_rough(), ball, 300)
        trace = longitudinal_trace(trajectory)
        assert trace.flight_times[0] == pytest.approx(0.5)
        assert trace.flight_time_spread < 1e-12

    def test_symmetric_wedge_orbit_has_period_two(self):
        # vertical bounces at x = 3: the spin is reversed at every impact
        theta, R, speed = math.pi / 6, 0.5, 1.0
        table = WedgeTable(half_angle=theta)
        ball = ball_body(R, 2)
        spin = -2.0 * math.sin(theta) * speed / R
        state = launch(table, ball, [3.0, 0.0], [0.0, speed], spin=[spin])
        trajectory = simulate(state, table, completely_rough(), ball, 10)
        assert trajectory.completed
        assert [s.face for s in trajectory.states] == [0, 1] * 5
        np.testing.assert_allclose(trajectory.centers[:, 0], 3.0, atol=1e-12)
        np.testing.assert_allclose(
            trajectory.states[2].center_velocity, trajectory.states[0].center_velocity, atol=1e-12
        )
        report = recurrence_report(trajectory)
        assert report.statistics["period"] == 2.0
        assert report.statistics["min_distance"] < 1e-10
