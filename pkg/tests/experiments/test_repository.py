import pandas as pd
import pytest

from components.core.exceptions import ArtifactError
from components.experiments.measure import angle_histogram
from components.experiments.repository import ReportRepository, report_lines
from components.experiments.sampling import angle_density
from components.experiments.schemas import ExperimentReport, LongitudinalTrace


@pytest.fixture
def report():
    histogram = angle_histogram([0.1, 0.4, 0.5, 1.2], bins=4)
    return ExperimentReport(
        name="return_angles",
        count=4,
        statistics={"ks_distance": 0.125},
        histogram=histogram,
        tolerance=0.01,
        passed=True,
        details={"face": "2"},
    )


class TestReportLines:
    def test_format(self, report):
        assert report_lines(report) == [
            "experiment=return_angles",
            "count=4",
            "ks_distance=0.125",
            "face=2",
            "tolerance=0.01",
            "passed=true",
        ]

    def test_informational_report_has_no_verdict(self):
        lines = report_lines(ExperimentReport(name="recurrence", count=3))
        assert lines == ["experiment=recurrence", "count=3"]


class TestReportRepository:
    def test_save_report(self, report, tmp_path):
        path = ReportRepository(tmp_path).save_report(report, "report.txt")
        assert path.read_text().splitlines()[-1] == "passed=true"

    def test_histogram_csv(self, report, tmp_path):
        path = ReportRepository(tmp_path).save_histogram_csv(report, "hist/angles.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["lower", "upper", "count"]
        assert frame["count"].sum() == 4

    def test_histogram_svg(self, report, tmp_path):
        path = ReportRepository(tmp_path).save_histogram_svg(
            report, "angles.svg", density=lambda phi: angle_density(phi, 3)
        )
        assert path.read_text().lstrip().startswith("<?xml")

    def test_report_without_histogram(self, tmp_path):
        with pytest.raises(ValueError):
            ReportRepository(tmp_path).save_histogram_csv(ExperimentReport(name="x"), "x.csv")

    def test_trace_csv(self, tmp_path):
        trace = LongitudinalTrace(steps=[1, 2], positions=[0.5, 1.0], flight_times=[0.5, 0.5])
        frame = pd.read_csv(ReportRepository(tmp_path).save_trace_csv(trace, "trace.csv"))
        assert frame["position"].tolist() == [0.5, 1.0]

    def test_unwritable_path(self, report, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        with pytest.raises(ArtifactError) as error:
            ReportRepository(tmp_path).save_report(report, "blocker/report.txt")
        assert error.value.path.endswith("report.txt")
