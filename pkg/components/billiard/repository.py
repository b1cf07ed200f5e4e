"""Repository for trajectory artifacts."""

import logging
import math
from pathlib import Path
from typing import Optional, Sequence

import matplotlib
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from components.core.config import get_settings
from components.core.exceptions import ArtifactError
from components.billiard.dynamics import ball_parameters
from components.billiard.models import Trajectory
from components.billiard.tables import CircleTable, StripTable, Table
from components.lie.models import SkewMatrix
from components.lie.operations import skew_to_vector
from components.mechanics.models import RigidBody

matplotlib.use("Agg")
logger = logging.getLogger(__name__)


def trajectory_columns(n: int) -> list:
    """
    CSV header for dimension n.

    bx*, ax*, vx* are the contact point, center and center velocity; omega_jk
    (j > k) the world angular velocity; for n = 2 also v0 = sqrt(2 lambda) omega.
    """
    columns = ["step", "t", "tau"]
    columns += [f"bx{i}" for i in range(n)] + [f"ax{i}" for i in range(n)]
    columns += [f"vx{i}" for i in range(n)]
    if n == 2:
        columns.append("v0")
    rows, cols = np.tril_indices(n, -1)
    columns += [f"omega{j}{k}" for j, k in zip(rows, cols)]
    return columns + ["energy", "rough_rank", "face"]


class TrajectoryRepository:
    """Repository for trajectory CSV and SVG artifacts."""

    def __init__(self, directory: Optional[Path] = None):
        """Initialize repository with an output directory."""
        self.directory = Path(directory or get_settings().OUTPUT_DIR)

    def _path(self, name: str) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.directory / path

    def to_frame(self, trajectory: Trajectory, ball: RigidBody) -> pd.DataFrame:
        """One row per post-collision state."""
        _, lam = ball_parameters(ball)
        n = trajectory.initial.n
        records = []
        for index, (state, tau, energy) in enumerate(
            zip(trajectory.states, trajectory.flight_times, trajectory.energies), start=1
        ):
            omega = skew_to_vector(SkewMatrix(state.angular_velocity))
            row = [index, state.t, tau, *state.contact, *state.a, *state.center_velocity]
            if n == 2:
                row.append(math.sqrt(2.0 * lam) * omega[0])
            row += [*omega, energy, state.rough_rank, state.face]
            records.append(row)
        frame = pd.DataFrame.from_records(records, columns=trajectory_columns(n))
        return frame.astype({"step": int, "rough_rank": int, "face": int})

    def save_csv(self, trajectory: Trajectory, ball: RigidBody, name: str) -> Path:
        """Write the trajectory CSV with FLOAT_FORMAT precision."""
        path = self._path(name)
        frame = self.to_frame(trajectory, ball)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, float_format=get_settings().FLOAT_FORMAT)
        except OSError as error:
            raise ArtifactError(f"cannot write trajectory CSV ({error.strerror})", str(path)) from error
        logger.info("wrote %d trajectory rows to %s", len(frame), path)
        return path

    def load_csv(self, name: str) -> pd.DataFrame:
        path = self._path(name)
        try:
            return pd.read_csv(path)
        except OSError as error:
            raise ArtifactError(f"cannot read trajectory CSV ({error.strerror})", str(path)) from error

    def save_svg(
        self,
        trajectory: Trajectory,
        table: Table,
        ball: RigidBody,
        name: str,
        axes: Sequence[int] = (0, 1),
    ) -> Path:
        """Polyline of the center of mass projected on two coordinate axes."""
        path = self._path(name)
        R, _ = ball_parameters(ball)
        centers = trajectory.centers[:, list(axes)]
        figure, plot = plt.subplots(figsize=(6, 6))
        plot.plot(centers[:, 0], centers[:, 1], linewidth=0.5)
        if isinstance(table, CircleTable):
            plot.add_patch(plt.Circle((0.0, 0.0), table.radius - R, fill=False, linestyle="--"))
        elif isinstance(table, StripTable) and axes[1] == table.n - 1:
            for level in (R, table.gap - R):
                plot.axhline(level, linestyle="--", linewidth=0.8)
        plot.set_aspect("equal", adjustable="datalim")
        plot.set_xlabel(f"x{axes[0]}")
        plot.set_ylabel(f"x{axes[1]}")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            figure.savefig(path, format="svg")
        except OSError as error:
            raise ArtifactError(f"cannot write trajectory SVG ({error.strerror})", str(path)) from error
        finally:
            plt.close(figure)
        logger.info("wrote trajectory plot to %s", path)
        return path

