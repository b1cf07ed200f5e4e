"""Repository for experiment reports and histograms."""

import logging
from pathlib import Path
from typing import Callable, Optional

import matplotlib
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from components.core.config import get_settings
from components.core.exceptions import ArtifactError
from components.experiments.schemas import ExperimentReport, LongitudinalTrace

matplotlib.use("Agg")
logger = logging.getLogger(__name__)


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return get_settings().FLOAT_FORMAT % value
    return str(value)


def report_lines(report: ExperimentReport) -> list:
    """key=value lines of a report, statistics and details in insertion order."""
    lines = [f"experiment={report.name}", f"count={report.count}"]
    lines += [f"{key}={format_value(value)}" for key, value in report.statistics.items()]
    lines += [f"{key}={value}" for key, value in report.details.items()]
    if report.tolerance is not None:
        lines.append(f"tolerance={format_value(report.tolerance)}")
    if report.passed is not None:
        lines.append(f"passed={format_value(report.passed)}")
    return lines


class ReportRepository:
    """Repository for report text, histogram CSV and plot artifacts."""

    def __init__(self, directory: Optional[Path] = None):
        """Initialize repository with an output directory."""
        self.directory = Path(directory or get_settings().OUTPUT_DIR)

    def _path(self, name: str) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.directory / path

    def _write(self, path: Path, writer: Callable[[Path], None], what: str) -> Path:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            writer(path)
        except OSError as error:
            raise ArtifactError(f"cannot write {what} ({error.strerror})", str(path)) from error
        logger.info("wrote %s to %s", what, path)
        return path

    def save_report(self, report: ExperimentReport, name: str) -> Path:
        text = "\n".join(report_lines(report)) + "\n"
        return self._write(self._path(name), lambda path: path.write_text(text), "report")

    def histogram_frame(self, report: ExperimentReport) -> pd.DataFrame:
        if report.histogram is None:
            raise ValueError(f"report {report.name!r} has no histogram")
        edges = np.asarray(report.histogram.edges)
        return pd.DataFrame({
            "lower": edges[:-1],
            "upper": edges[1:],
            "count": report.histogram.counts,
        })

    def save_histogram_csv(self, report: ExperimentReport, name: str) -> Path:
        frame = self.histogram_frame(report)
        float_format = get_settings().FLOAT_FORMAT
        return self._write(
            self._path(name),
            lambda path: frame.to_csv(path, index=False, float_format=float_format),
            "histogram CSV",
        )

    def save_histogram_svg(
        self,
        report: ExperimentReport,
        name: str,
        density: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> Path:
        """Normalized histogram with an optional density curve on top."""
        frame = self.histogram_frame(report)
        widths = frame["upper"] - frame["lower"]
        heights = frame["count"] / (report.histogram.total * widths)
        figure, plot = plt.subplots(figsize=(6, 4))
        plot.bar(frame["lower"], heights, width=widths, align="edge", alpha=0.6)
        if density is not None:
            phi = np.linspace(frame["lower"].iloc[0], frame["upper"].iloc[-1], 400)
            plot.plot(phi, density(phi), color="black", linewidth=1.0)
        plot.set_xlabel("angle to normal")
        plot.set_ylabel("density")
        try:
            return self._write(self._path(name), lambda path: figure.savefig(path, format="svg"),
                               "histogram plot")
        finally:
            plt.close(figure)

    def save_trace_csv(self, trace: LongitudinalTrace, name: str) -> Path:
        frame = pd.DataFrame({
            "step": trace.steps,
            "position": trace.positions,
            "tau": trace.flight_times,
        })
        float_format = get_settings().FLOAT_FORMAT
        return self._write(
            self._path(name),
            lambda path: frame.to_csv(path, index=False, float_format=float_format),
            "trace CSV",
        )
