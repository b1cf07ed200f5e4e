import pandas as pd
import pytest

from components.run.parser import build_config
from components.run.runner import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_SIMULATION,
    default_position,
    run,
)
from components.billiard.tables import WedgeTable


@pytest.fixture
def blocked(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    return blocker / "out.csv"


class TestSimulate:
    def test_writes_one_row_per_collision(self, tmp_path):
        out = tmp_path / "trajectory.csv"
        assert run(build_config({"steps": 25, "out": out})) == EXIT_OK
        assert len(pd.read_csv(out)) == 25

    def test_svg(self, tmp_path):
        config = build_config({"steps": 10, "out": tmp_path / "t.csv", "svg": tmp_path / "t.svg"})
        assert run(config) == EXIT_OK
        assert (tmp_path / "t.svg").exists()

    def test_escape_from_wedge(self, tmp_path):
        config = build_config({
            "table": "wedge", "position": "3,0", "velocity": "1,0", "steps": 5,
            "out": tmp_path / "escape.csv",
        })
        assert run(config) == EXIT_SIMULATION
        assert len(pd.read_csv(tmp_path / "escape.csv")) == 0

    def test_unwritable_output(self, blocked):
        assert run(build_config({"steps": 5, "out": blocked})) == EXIT_IO

    def test_default_wedge_position_is_inside(self):
        table = WedgeTable(half_angle=0.5)
        assert table.contains(default_position(table, 0.5), 0.5)


class TestExperiments:
    def test_caustics(self, tmp_path, capsys):
        out = tmp_path / "caustics.txt"
        assert run(build_config({"command": "caustics", "steps": 50, "spin": "0.7", "out": out})) == EXIT_OK
        assert out.read_text().startswith("experiment=caustics\ncount=49\n")
        assert "passed=true" in capsys.readouterr().out

    def test_caustics_needs_a_circle(self):
        config = build_config({"command": "caustics", "table": "box", "R": 0.25})
        assert run(config) == EXIT_CONFIG

    def test_strip_is_planar(self):
        assert run(build_config({"command": "strip", "n": 3})) == EXIT_CONFIG

    def test_recurrence(self, tmp_path):
        out = tmp_path / "recurrence.txt"
        assert run(build_config({"command": "recurrence", "steps": 20, "out": out})) == EXIT_OK
        assert "period=" in out.read_text()

    def test_bounded(self, tmp_path):
        out = tmp_path / "bounded.txt"
        config = build_config({"command": "bounded", "table": "plates3d", "n": 3, "R": 0.25,
                               "steps": 200, "out": out})
        assert run(config) == EXIT_OK
        assert "bounded_0=" in out.read_text()

    def test_return_angle_writes_histogram(self, tmp_path):
        out = tmp_path / "angles.txt"
        config = build_config({"command": "return-angle", "table": "box", "R": 0.2,
                               "count": 200, "out": out})
        assert run(config) == EXIT_OK
        assert (tmp_path / "angles.csv").exists()
        assert (tmp_path / "angles.svg").exists()


class TestVerification:
    def test_strict(self, capsys):
        assert run(build_config({"command": "strict", "n": 3, "trials": 5})) == EXIT_OK
        out = capsys.readouterr().out
        assert "failures=0" in out
        assert "passed=true" in out

    def test_orthogonality(self, tmp_path):
        out = tmp_path / "orth.txt"
        assert run(build_config({"command": "orthogonality", "n": 4, "trials": 3, "out": out})) == EXIT_OK
        assert out.read_text().splitlines()[0] == "check=orthogonality-n4"

    def test_dims(self, capsys):
        assert run(build_config({"command": "dims"})) == EXIT_OK
        out = capsys.readouterr().out
        assert "grassmannian_n5=0,3,4,3,0" in out
        assert "subspaces_n3=nonslip:9,rolling:8,diagonal:6,impulse:3" in out
