"""Script to render the standard trajectory and histogram figures."""

import logging
import sys
from pathlib import Path

import numpy as np

from components.core.config import get_settings
from components.core.log import configure_logging
from components.core.rng import make_rng
from components.billiard.boundary import parse_condition
from components.billiard.dynamics import launch, simulate
from components.billiard.repository import TrajectoryRepository
from components.billiard.tables import BoxTable, CircleTable, PlatesTable, StripTable
from components.experiments.measure import return_angle_experiment
from components.experiments.repository import ReportRepository
from components.experiments.sampling import angle_density
from components.lie.operations import se_dim
from components.mechanics.inertia import ball_body

logger = logging.getLogger(__name__)


def render_figures(directory: Path) -> None:
    """Render the trajectory plots and the return-angle histogram into `directory`."""
    seed = get_settings().DEFAULT_SEED
    trajectories = TrajectoryRepository(directory)

    circle = CircleTable(n=2, radius=2.0)
    disc = ball_body(0.5, 2)
    for name, rough in (("circle-specular", "none"), ("circle-rough", "full")):
        state = launch(circle, disc, [0.75, 0.0], [0.3, 1.0], spin=[0.7])
        trajectory = simulate(state, circle, parse_condition(rough, 2), disc, 200)
        trajectories.save_svg(trajectory, circle, disc, f"{name}.svg")

    strip = StripTable(n=2, width=1.0)
    small = ball_body(0.25, 2)
    state = launch(strip, small, [0.0, 0.25], [1.0, 1.0], contact=np.zeros(2), face=0)
    trajectory = simulate(state, strip, parse_condition("random:0.5", 2), small, 400, rng=make_rng(seed))
    trajectories.save_svg(trajectory, strip, small, "strip-random.svg")

    plates = PlatesTable(gap=1.0)
    ball = ball_body(0.25, 3)
    for name, rough in (("plates-rough", "full"), ("plates-mixed", "faces:full/rank:1:0")):
        state = launch(plates, ball, [0.0, 0.0, 0.25], [0.6, 0.3, 1.0], spin=[0.2, -0.1, 0.3],
                       contact=np.zeros(3), face=0)
        trajectory = simulate(state, plates, parse_condition(rough, 3), ball, 2000, rng=make_rng(seed))
        trajectories.save_svg(trajectory, plates, ball, f"{name}.svg")

    box = BoxTable(n=3, sides=[2.0, 1.0, 1.0])
    report = return_angle_experiment(box, parse_condition("full", 3), ball_body(0.2, 3), 20_000, seed=seed)
    d = se_dim(3)
    reports = ReportRepository(directory)
    reports.save_histogram_svg(report, "return-angle.svg", density=lambda phi: angle_density(phi, d))
    reports.save_histogram_csv(report, "return-angle.csv")
    logger.info(
        "return-angle KS distance %.4f over %d samples", report.statistics["ks_distance"], report.count
    )


if __name__ == "__main__":
    configure_logging()
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else get_settings().OUTPUT_DIR / "figures"
    render_figures(target)
