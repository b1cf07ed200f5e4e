"""Wedge products, exponentials, adjoints and brackets on SO(n) and SE(n)."""

import numpy as np
from scipy import linalg

from components.core.exceptions import DimensionMismatchError
from components.lie.models import AlgebraVector, EuclideanElement, SkewMatrix

# below this angle the closed forms switch to their Taylor series
_SMALL_ANGLE = 1e-6


def so_dim(n: int) -> int:
    """Dimension n(n-1)/2 of so(n)."""
    return n * (n - 1) // 2


def se_dim(n: int) -> int:
    """Dimension n(n+1)/2 of se(n)."""
    return n * (n + 1) // 2


def wedge(a: np.ndarray, b: np.ndarray) -> SkewMatrix:
    """
    Wedge product of two vectors.

    Args:
        a: first n-vector
        b: second n-vector

    Returns:
        The skew matrix with entries (a^b)_ij = a_j b_i - a_i b_j, so that
        (a^b)u = (a.u)b - (b.u)a.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatchError(f"cannot wedge vectors of shapes {a.shape} and {b.shape}")
    return SkewMatrix(np.outer(b, a) - np.outer(a, b))


def hat3(omega: np.ndarray) -> SkewMatrix:
    """Cross-product matrix of a 3-vector: hat3(w) @ b = w x b."""
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (3,):
        raise DimensionMismatchError(f"hat3 needs a 3-vector, got shape {omega.shape}")
    x, y, z = omega
    return SkewMatrix(np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]]))


def skew_to_vector(Z: SkewMatrix) -> np.ndarray:
    """Lower-triangle coordinates Z[j, i], j > i, in row-major order."""
    rows, cols = np.tril_indices(Z.n, -1)
    return Z.entries[rows, cols].copy()


def vector_to_skew(values: np.ndarray, n: int) -> SkewMatrix:
    """Inverse of skew_to_vector."""
    values = np.asarray(values, dtype=float)
    if values.shape != (so_dim(n),):
        raise DimensionMismatchError(f"so({n}) has {so_dim(n)} coordinates, got {values.shape}")
    rows, cols = np.tril_indices(n, -1)
    matrix = np.zeros((n, n))
    matrix[rows, cols] = values
    return SkewMatrix(matrix - matrix.T)


def group_mul(g2: EuclideanElement, g1: EuclideanElement) -> EuclideanElement:
    """Product (A2 A1, A2 a1 + a2)."""
    if g1.n != g2.n:
        raise DimensionMismatchError(f"cannot multiply SE({g2.n}) by SE({g1.n})")
    return EuclideanElement(g2.A @ g1.A, g2.A @ g1.a + g2.a)


def group_inv(g: EuclideanElement) -> EuclideanElement:
    """Inverse (A^T, -A^T a)."""
    return EuclideanElement(g.A.T, -g.A.T @ g.a)


def so_exp(X: SkewMatrix) -> np.ndarray:
    """
    Matrix exponential of a skew matrix.

    Closed forms in dimensions 2 and 3, Pade scaling-and-squaring otherwise.
    """
    n = X.n
    M = X.entries
    if n == 1:
        return np.eye(1)
    if n == 2:
        theta = M[1, 0]
        c, s = np.cos(theta), np.sin(theta)
        return np.array([[c, -s], [s, c]])
    if n == 3:
        theta = np.sqrt(M[2, 1] ** 2 + M[0, 2] ** 2 + M[1, 0] ** 2)
        M2 = M @ M
        if theta < _SMALL_ANGLE:
            return np.eye(3) + (1.0 - theta**2 / 6.0) * M + (0.5 - theta**2 / 24.0) * M2
        return (
            np.eye(3)
            + (np.sin(theta) / theta) * M
            + ((1.0 - np.cos(theta)) / theta**2) * M2
        )
    return linalg.expm(M)


def _plane_integral(theta: float, t: float) -> np.ndarray:
    """Integral over [0, t] of the planar rotation by s*theta."""
    phi = t * theta
    if abs(phi) < _SMALL_ANGLE:
        # series of sin(phi)/theta and (1 - cos(phi))/theta
        sin_term = t * (1.0 - phi**2 / 6.0)
        cos_term = t * (phi / 2.0 - phi**3 / 24.0)
    else:
        sin_term = np.sin(phi) / theta
        cos_term = (1.0 - np.cos(phi)) / theta
    return np.array([[sin_term, -cos_term], [cos_term, sin_term]])


def _translation_integral(X: SkewMatrix, t: float) -> np.ndarray:
    """The matrix V(t) = integral over [0, t] of exp(sX) ds."""
    n = X.n
    M = X.entries
    if n == 1:
        return np.array([[t]])
    if n == 2:
        return _plane_integral(M[1, 0], t)
    if n == 3:
        theta = np.sqrt(M[2, 1] ** 2 + M[0, 2] ** 2 + M[1, 0] ** 2)
        phi = t * theta
        if abs(phi) < _SMALL_ANGLE:
            return t * np.eye(3) + (t**2 / 2.0) * M + (t**3 / 6.0) * (M @ M)
        return (
            t * np.eye(3)
            + ((1.0 - np.cos(phi)) / theta**2) * M
            + ((phi - np.sin(phi)) / theta**3) * (M @ M)
        )
    # invariant planes from the real Schur form: X = Q T Q^T with 2x2 rotation blocks
    T, Q = linalg.schur(M, output="real")
    blocks = np.zeros((n, n))
    scale = max(np.max(np.abs(T)), 1.0)
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-14 * scale:
            theta = 0.5 * (T[i + 1, i] - T[i, i + 1])
            blocks[i : i + 2, i : i + 2] = _plane_integral(theta, t)
            i += 2
        else:
            blocks[i, i] = t
            i += 1
    return Q @ blocks @ Q.T


def se_exp(X: SkewMatrix, w: np.ndarray, t: float) -> EuclideanElement:
    """
    One-parameter subgroup of SE(n).

    Args:
        X: angular part of the generator
        w: linear part of the generator
        t: parameter value

    Returns:
        (exp(tX), integral over [0, t] of exp(sX) w ds)
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (X.n,):
        raise DimensionMismatchError(f"generator parts disagree: so({X.n}) and vector {w.shape}")
    rotation = so_exp(SkewMatrix(t * X.entries))
    return EuclideanElement(rotation, _translation_integral(X, t) @ w)


def adjoint(A: np.ndarray, Z: SkewMatrix) -> SkewMatrix:
    """Ad_A Z = A Z A^T for an orthogonal A."""
    return SkewMatrix(A @ Z.entries @ A.T)


def adjoint_matrix(A: np.ndarray) -> np.ndarray:
    """Matrix of Z -> A Z A^T in lower-triangle coordinates."""
    n = A.shape[0]
    dim = so_dim(n)
    columns = [skew_to_vector(adjoint(A, vector_to_skew(unit, n))) for unit in np.eye(dim)]
    return np.array(columns).T.reshape(dim, dim)


def bracket(xi1: AlgebraVector, xi2: AlgebraVector) -> AlgebraVector:
    """Lie bracket [(X, x), (Y, y)] = (XY - YX, Xy - Yx)."""
    X, Y = xi1.Z.entries, xi2.Z.entries
    return AlgebraVector(SkewMatrix(X @ Y - Y @ X), X @ xi2.z - Y @ xi1.z)
