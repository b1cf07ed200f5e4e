"""Adapted frames at contact points."""

import numpy as np

from components.core.config import get_settings
from components.core.exceptions import DimensionMismatchError, NonUnitVectorError


def check_unit(vector: np.ndarray, name: str = "normal") -> np.ndarray:
    """Return `vector` as a float array, raising if it is not a unit vector."""
    vector = np.asarray(vector, dtype=float)
    if abs(np.linalg.norm(vector) - 1.0) > get_settings().CONTACT_TOLERANCE:
        raise NonUnitVectorError(f"{name} must have unit length, got norm {np.linalg.norm(vector):.12g}")
    return vector


def adapted_frame(nu: np.ndarray, sign: int = 1) -> np.ndarray:
    """
    Rotation sigma with sigma e_n = sign * nu.

    The first n-1 columns complete sign*nu by Gram-Schmidt over the standard
    basis in index order, skipping the basis vector most parallel to nu. The
    first column is flipped when needed to make det sigma = +1.

    Args:
        nu: unit n-vector, n >= 2
        sign: +1 or -1

    Returns:
        n x n rotation matrix
    """
    nu = check_unit(nu)
    n = nu.shape[0]
    if n < 2:
        raise DimensionMismatchError("adapted frames need n >= 2")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    last = sign * nu / np.linalg.norm(nu)
    skip = int(np.argmax(np.abs(last)))

    columns = []
    for index in range(n):
        if index == skip:
            continue
        vector = np.eye(n)[index]
        # two passes keep the columns orthogonal to machine precision
        for _ in range(2):
            vector = vector - (vector @ last) * last
            for column in columns:
                vector = vector - (vector @ column) * column
        columns.append(vector / np.linalg.norm(vector))

    frame = np.column_stack(columns + [last])
    if np.linalg.det(frame) < 0:
        frame[:, 0] = -frame[:, 0]
    return frame


def tangent_basis(nu: np.ndarray) -> np.ndarray:
    """n x (n-1) orthonormal basis of the plane orthogonal to nu (from adapted_frame)."""
    return adapted_frame(nu, 1)[:, :-1]
