"""Exception hierarchy shared by all components."""

from typing import Dict, List, Optional, Tuple


class RoughBilliardError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatchError(RoughBilliardError, ValueError):
    """Operands live in spaces of different dimension."""


class NotARotationError(RoughBilliardError, ValueError):
    """Matrix is not in SO(n) within tolerance."""


class NonUnitVectorError(RoughBilliardError, ValueError):
    """A normal or direction vector does not have unit length."""


class SingularInertiaError(RoughBilliardError):
    """The operator Z -> LZ + ZL cannot be inverted."""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None,
                 eigenvalue_sum: Optional[float] = None):
        super().__init__(message)
        self.pair = pair
        self.eigenvalue_sum = eigenvalue_sum


class InvalidStepError(RoughBilliardError, ValueError):
    """Integrator step size or horizon is not positive."""


class ConfigurationError(RoughBilliardError, ValueError):
    """Contact configuration is inconsistent or degenerate."""


class SubspaceMembershipError(RoughBilliardError, ValueError):
    """A vector does not lie in the subspace it was declared to belong to."""


class NotAnInvolutionError(RoughBilliardError, ValueError):
    """A boundary involution does not square to the identity on the tangent plane."""


class SimulationError(RoughBilliardError):
    """Base class for conditions that abort a billiard step."""

    reason = "SimulationError"

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class NoCollisionError(SimulationError):
    """The ball escapes the table."""

    reason = "NoCollision"


class GrazingError(SimulationError):
    """Impact with vanishing normal velocity."""

    reason = "Grazing"


class CornerHitError(SimulationError):
    """Impact at a junction of boundary pieces."""

    reason = "CornerHit"


class ContactDistanceError(SimulationError):
    """Contact point is not at distance R from the center."""

    reason = "ContactDistance"


class EnergyDriftError(SimulationError):
    """Kinetic energy changed beyond tolerance along a trajectory."""

    reason = "EnergyDrift"


class TooFewSegmentsError(RoughBilliardError, ValueError):
    """A trajectory is too short for the requested analysis."""


class ConfigError(RoughBilliardError, ValueError):
    """Run configuration failed validation; carries every error found."""

    def __init__(self, errors: List[Dict[str, str]]):
        self.errors = errors
        lines = [f"{error['key']}: {error['message']}" for error in errors]
        super().__init__("invalid configuration: " + "; ".join(lines))


class ArtifactError(RoughBilliardError, OSError):
    """An output artifact could not be written or read."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(f"{message}: {path}" if path else message)
        self.path = path
