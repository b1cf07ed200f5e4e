"""Random contact configurations and bodies for verification runs."""

from typing import Tuple

import numpy as np

from components.core.rng import random_rotation
from components.contact.models import Bodies, ContactConfiguration
from components.lie.models import EuclideanElement
from components.mechanics.models import RigidBody


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    vector = rng.standard_normal(n)
    return vector / np.linalg.norm(vector)


def random_body(n: int, rng: np.random.Generator) -> RigidBody:
    """Body with mass in [0.5, 2] and inertia eigenvalues in [0.1, 1]."""
    rotation = random_rotation(n, rng)
    eigenvalues = rng.uniform(0.1, 1.0, size=n)
    inertia = rotation @ np.diag(eigenvalues) @ rotation.T
    return RigidBody(mass=float(rng.uniform(0.5, 2.0)), inertia=inertia)


def random_shape_operator(n: int, rng: np.random.Generator) -> np.ndarray:
    """Symmetric positive semidefinite (n-1)x(n-1) matrix."""
    factor = rng.standard_normal((n - 1, n - 1))
    return factor @ factor.T / max(n - 1, 1)


def random_configuration(
    n: int, rng: np.random.Generator
) -> Tuple[ContactConfiguration, Bodies]:
    """
    Random contact configuration of two random bodies.

    Body 1 gets a Haar-random placement, a contact point in the unit ball and a
    random outward normal; body 2 gets a random rotation and contact point and is
    translated so that the two contact points coincide.

    Returns:
        (configuration, (body1, body2))
    """
    if n < 2:
        raise ValueError(f"contact configurations need n >= 2, got {n}")
    g1 = EuclideanElement(random_rotation(n, rng), rng.standard_normal(n))
    q = ContactConfiguration.from_contact(
        g1,
        rng.uniform(-1.0, 1.0, size=n),
        random_unit_vector(n, rng),
        random_rotation(n, rng),
        rng.uniform(-1.0, 1.0, size=n),
        S1=random_shape_operator(n, rng),
        S2=random_shape_operator(n, rng),
    )
    return q, (random_body(n, rng), random_body(n, rng))
