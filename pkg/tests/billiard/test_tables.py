import math

import numpy as np
import pytest

from components.core.exceptions import CornerHitError, GrazingError, NoCollisionError
from components.billiard.boundary import (
    ConstantCondition,
    FacesCondition,
    HemisphereCondition,
    RandomCondition,
    involution_rank,
    parse_condition,
    rough_directions,
)
from components.billiard.tables import (
    BoxTable,
    CircleTable,
    PlatesTable,
    StripTable,
    WedgeTable,
    build_table,
)


class TestNextCollision:
    def test_circle_from_center(self):
        hit = CircleTable(n=2, radius=2.0).next_collision(np.zeros(2), np.array([1.0, 0.0]), 1.0)
        assert hit.tau == pytest.approx(1.0)
        np.testing.assert_allclose(hit.point, [2.0, 0.0])
        np.testing.assert_allclose(hit.normal, [-1.0, 0.0])
        assert hit.face == 0

    def test_circle_from_boundary_skips_current_contact(self):
        table = CircleTable(n=3, radius=2.0)
        hit = table.next_collision(np.array([1.5, 0.0, 0.0]), np.array([-1.0, 0.0, 0.0]), 0.5)
        assert hit.tau == pytest.approx(3.0)
        np.testing.assert_allclose(hit.point, [-2.0, 0.0, 0.0], atol=1e-12)

    def test_strip(self):
        hit = StripTable(n=2, width=1.0).next_collision(
            np.array([0.0, 0.5]), np.array([1.0, 1.0]), 0.25
        )
        assert hit.tau == pytest.approx(0.25)
        np.testing.assert_allclose(hit.point, [0.25, 1.0])
        assert hit.face == 1

    def test_plates_normal_points_inward(self):
        table = PlatesTable(gap=1.0)
        hit = table.next_collision(np.array([0.0, 0.0, 0.5]), np.array([0.0, 0.0, -1.0]), 0.25)
        assert hit.face == 0
        np.testing.assert_allclose(hit.normal, [0.0, 0.0, 1.0])

    def test_wedge_faces(self):
        table = WedgeTable(half_angle=math.pi / 6)
        up = table.next_collision(np.array([3.0, 0.0]), np.array([0.0, 1.0]), 0.5)
        down = table.next_collision(np.array([3.0, 0.0]), np.array([0.0, -1.0]), 0.5)
        assert (up.face, down.face) == (0, 1)
        assert up.tau == pytest.approx(down.tau)
        assert up.tau == pytest.approx((3.0 * 0.5 - 0.5) / math.cos(math.pi / 6))

    def test_wedge_escape(self):
        with pytest.raises(NoCollisionError):
            WedgeTable(half_angle=math.pi / 6).next_collision(
                np.array([3.0, 0.0]), np.array([1.0, 0.0]), 0.5
            )

    def test_box_corner(self):
        with pytest.raises(CornerHitError):
            BoxTable(n=2, sides=[2.0, 2.0]).next_collision(
                np.array([1.0, 1.0]), np.array([1.0, 1.0]), 0.25
            )

    def test_wedge_apex(self):
        table = WedgeTable(half_angle=math.pi / 4)
        R = 0.5
        apex = R / math.sin(math.pi / 4)
        with pytest.raises(CornerHitError):
            table.next_collision(np.array([apex + 1.0, 0.0]), np.array([-1.0, 0.0]), R)

    def test_grazing(self):
        with pytest.raises(GrazingError):
            StripTable(n=2, width=1.0).next_collision(
                np.array([0.0, 0.5]), np.array([1.0, 1e-14]), 0.25
            )

    def test_at_rest(self):
        with pytest.raises(NoCollisionError):
            BoxTable(n=2, sides=[2.0, 1.0]).next_collision(np.array([1.0, 0.5]), np.zeros(2), 0.25)


class TestTables:
    def test_build_table(self):
        assert isinstance(build_table("circle", 3, 2.0), CircleTable)
        assert build_table("box", 2, sides=[2.0, 1.0]).face_count == 4
        assert build_table("plates3d", 3, 1.5).gap == 1.5

    def test_wedge_is_planar(self):
        with pytest.raises(ValueError):
            WedgeTable(n=3, half_angle=0.5)

    def test_box_sides_match_dimension(self):
        with pytest.raises(ValueError):
            BoxTable(n=3, sides=[1.0, 1.0])

    def test_ball_must_fit(self):
        with pytest.raises(ValueError):
            StripTable(n=2, width=1.0).check_ball(0.5)

    @pytest.mark.parametrize(
        "table",
        [
            CircleTable(n=3, radius=2.0),
            WedgeTable(half_angle=0.4),
            StripTable(n=2, width=1.0),
            BoxTable(n=3, sides=[2.0, 1.0, 1.5]),
        ],
    )
    def test_sampled_contacts_lie_on_their_face(self, table, rng):
        R = 0.25
        for face in range(table.face_count):
            point, normal = table.sample_contact(face, R, rng)
            center = point + R * normal
            assert table.contains(center, R)
            np.testing.assert_allclose(table.normal(center, face), normal, atol=1e-12)


class TestBoundaryConditions:
    def test_grammar(self):
        assert parse_condition("none", 3) == ConstantCondition()
        assert parse_condition("full", 3).rank_for(3) == 2
        assert parse_condition("rank:1:0.3", 3) == ConstantCondition(rank=1, angle=0.3)
        assert isinstance(parse_condition("hemisphere:1", 3), HemisphereCondition)
        assert isinstance(parse_condition("random:0.5", 2), RandomCondition)
        random_rank = parse_condition("random:rank:1:0,1.5", 3)
        assert [outcome.angle for outcome in random_rank.outcomes] == [0.0, 1.5]
        faces = parse_condition("faces:full/rank:1:0", 3)
        assert isinstance(faces, FacesCondition)
        assert len(faces.conditions) == 2

    @pytest.mark.parametrize(
        "text", ["rank:3", "hemisphere:5", "random:1.5", "bogus", "faces:full//none", "random:rank:1:"]
    )
    def test_rejected(self, text):
        with pytest.raises(ValueError):
            parse_condition(text, 3)

    @pytest.mark.parametrize("n, rank", [(2, 1), (3, 1), (3, 2), (4, 2)])
    def test_involution_of_tangent_plane(self, n, rank, rng):
        normal = rng.standard_normal(n)
        normal /= np.linalg.norm(normal)
        directions = rough_directions(normal, rank, angle=0.7)
        T = np.eye(n) - 2.0 * directions @ directions.T
        np.testing.assert_allclose(T @ T, np.eye(n), atol=1e-12)
        np.testing.assert_allclose(T @ normal, normal, atol=1e-12)
        assert involution_rank(T) == rank
