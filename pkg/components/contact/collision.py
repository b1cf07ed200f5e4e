"""Strict collision maps, their verification and classification."""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import linalg

from components.core.config import get_settings
from components.core.exceptions import DimensionMismatchError, SubspaceMembershipError
from components.contact import schemas
from components.contact.frames import tangent_basis
from components.contact.sampling import random_configuration
from components.contact.models import (
    Bodies,
    CollisionMap,
    ContactConfiguration,
    MetricProjection,
    SubspaceBasis,
    flatten,
    gram_matrix,
    metric_norm,
    orthonormalize,
    unflatten,
)
from components.contact.subspaces import (
    boundary_tangent,
    impulse_projection,
    impulse_vector,
    subspace_diag,
    subspace_impulse,
    subspace_nonslip,
    subspace_rolling,
    unit_normal,
)
from components.mechanics.metric import total_momentum
from components.mechanics.models import SystemState

logger = logging.getLogger(__name__)


def rough_subspace(
    q: ContactConfiguration, bodies: Bodies, directions: np.ndarray
) -> SubspaceBasis:
    """
    Roughness subspace generated by tangential impulse directions.

    Args:
        q: contact configuration
        bodies: the two bodies
        directions: n x k matrix of world vectors in the contact plane

    Returns:
        Orthonormal basis of the impulse velocity changes for these directions,
        made orthogonal to the unit normal
    """
    directions = np.asarray(directions, dtype=float)
    if directions.ndim == 1:
        directions = directions[:, None]
    gram = gram_matrix(bodies)
    normal = flatten(unit_normal(q, bodies))
    columns = []
    for direction in directions.T:
        vector = flatten(impulse_vector(q, bodies, q.g2.A.T @ direction))
        columns.append(vector - (normal @ gram @ vector) * normal)
    matrix = np.column_stack(columns) if columns else np.zeros((gram.shape[0], 0))
    return SubspaceBasis(orthonormalize(matrix, gram), q.n, orthonormal=True)


def random_rough_subspace(
    q: ContactConfiguration, bodies: Bodies, k: int, rng: np.random.Generator
) -> SubspaceBasis:
    """Roughness subspace of rank k from k random orthonormal tangent directions."""
    if not 0 <= k <= q.n - 1:
        raise ValueError(f"roughness rank must lie in [0, {q.n - 1}], got {k}")
    tangents = tangent_basis(q.world_normal)
    mixing, _ = np.linalg.qr(rng.standard_normal((q.n - 1, q.n - 1)))
    return rough_subspace(q, bodies, tangents @ mixing[:, :k])


def build_collision_map(
    q: ContactConfiguration, bodies: Bodies, roughness_basis: SubspaceBasis
) -> CollisionMap:
    """
    Strict collision map with the given roughness subspace.

    The map is the identity on the non-slipping subspace, -1 on the normal and
    on the roughness subspace and +1 on the rest of the impulse subspace.

    Raises:
        SubspaceMembershipError: if the roughness subspace is not inside the
            impulse subspace or is not orthogonal to the normal
    """
    n = q.n
    if roughness_basis.n != n:
        raise DimensionMismatchError(f"roughness basis is for n={roughness_basis.n}, not {n}")
    if roughness_basis.dim > n - 1:
        raise SubspaceMembershipError(f"roughness rank {roughness_basis.dim} exceeds n-1={n - 1}")

    tolerance = get_settings().SUBSPACE_TOLERANCE
    gram = gram_matrix(bodies)
    normal = flatten(unit_normal(q, bodies))
    impulse = impulse_projection(q, bodies)
    roughness = orthonormalize(roughness_basis.matrix, gram)
    for column in roughness.T:
        outside = impulse.residual(column)
        if outside > tolerance:
            raise SubspaceMembershipError(f"roughness vector leaves the impulse subspace by {outside:.3e}")
        along_normal = abs(normal @ gram @ column)
        if along_normal > tolerance:
            raise SubspaceMembershipError(f"roughness vector has normal component {along_normal:.3e}")

    flipped = np.column_stack([normal, roughness])
    matrix = np.eye(gram.shape[0]) - 2.0 * flipped @ flipped.T @ gram
    return CollisionMap(n=n, roughness=roughness, normal=normal, matrix=matrix, gram=gram)


def specular_map(q: ContactConfiguration, bodies: Bodies) -> CollisionMap:
    return build_collision_map(q, bodies, rough_subspace(q, bodies, np.zeros((q.n, 0))))


def completely_rough_map(q: ContactConfiguration, bodies: Bodies) -> CollisionMap:
    return build_collision_map(q, bodies, rough_subspace(q, bodies, tangent_basis(q.world_normal)))


def _random_unit_vectors(gram: np.ndarray, count: int, rng: np.random.Generator) -> List[np.ndarray]:
    vectors = []
    for _ in range(count):
        vector = rng.standard_normal(gram.shape[0])
        vectors.append(vector / metric_norm(vector, gram))
    return vectors


def verify_strict(
    C: CollisionMap,
    q: ContactConfiguration,
    bodies: Bodies,
    rng: Optional[np.random.Generator] = None,
    samples: int = 8,
) -> schemas.StrictnessReport:
    """
    Check the defining properties of a strict collision map.

    Args:
        C: collision map to check
        q: contact configuration it was built for
        bodies: the two bodies
        rng: generator for the random test vectors
        samples: number of random test vectors

    Returns:
        StrictnessReport with one flag and one residual per property
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    tolerance = get_settings().SUBSPACE_TOLERANCE
    gram = C.gram
    size = gram.shape[0]
    identity = np.eye(size)

    # Euclidean coordinates for the metric: y = F^T x
    factor = linalg.cholesky(gram, lower=True)
    euclidean = factor.T @ C.matrix @ linalg.inv(factor.T)
    isometry = float(np.max(np.abs(euclidean.T @ euclidean - identity)))
    involution = float(np.max(np.abs(C.matrix @ C.matrix - identity)))

    nonslip = orthonormalize(subspace_nonslip(q).matrix, gram)
    nonslip_residual = max(
        (metric_norm(C.matrix @ s - s, gram) for s in nonslip.T), default=0.0
    )

    impulse = MetricProjection(subspace_impulse(q, bodies).matrix, gram)
    vectors = _random_unit_vectors(gram, samples, rng)
    impulse_residual = max(impulse.residual(C.matrix @ v - v) for v in vectors)

    diagonal = orthonormalize(subspace_diag(q).matrix, gram)
    diagonal_residual = max(
        (metric_norm(C.matrix @ d - d, gram) for d in diagonal.T), default=0.0
    )
    momentum_residual = 0.0
    for v in vectors:
        before = total_momentum(bodies, SystemState((q.g1, q.g2), unflatten(v, q.n)))
        after = total_momentum(bodies, SystemState((q.g1, q.g2), unflatten(C.matrix @ v, q.n)))
        difference = after - before
        momentum_residual = max(
            momentum_residual,
            float(np.max(np.abs(difference.Z.entries), initial=0.0)),
            float(np.max(np.abs(difference.z))),
        )
    momentum_residual = max(momentum_residual, diagonal_residual)

    return schemas.StrictnessReport(
        n=q.n,
        rank=C.rank,
        isometry=isometry < tolerance,
        involution=involution < tolerance,
        identity_on_nonslip=nonslip_residual < tolerance,
        impulse_membership=impulse_residual < tolerance,
        momentum=momentum_residual < tolerance,
        residuals={
            "isometry": isometry,
            "involution": involution,
            "identity_on_nonslip": nonslip_residual,
            "impulse_membership": impulse_residual,
            "momentum": momentum_residual,
        },
    )


def verify_orthogonality(q: ContactConfiguration, bodies: Bodies) -> schemas.OrthogonalityReport:
    """Check that T_q M splits orthogonally into non-slipping, impulse-minus-normal and normal parts."""
    tolerance = get_settings().SUBSPACE_TOLERANCE
    gram = gram_matrix(bodies)
    nonslip = subspace_nonslip(q, bodies).matrix
    impulse = subspace_impulse(q, bodies).matrix
    normal = flatten(unit_normal(q, bodies))

    cross = float(np.max(np.abs(nonslip.T @ gram @ impulse)))
    normal_residual = MetricProjection(impulse, gram).residual(normal)
    tangent = boundary_tangent(q).matrix
    cross = max(cross, float(np.max(np.abs(tangent.T @ gram @ normal))))
    total_rank = int(np.linalg.matrix_rank(np.column_stack([nonslip, impulse])))
    expected = gram.shape[0]
    return schemas.OrthogonalityReport(
        n=q.n,
        nonslip_dim=nonslip.shape[1],
        impulse_dim=impulse.shape[1],
        total_rank=total_rank,
        max_cross_inner=cross,
        normal_residual=normal_residual,
        passed=(total_rank == expected and cross < tolerance and normal_residual < tolerance
                and impulse.shape[1] == q.n),
    )


def grassmannian_dim(n: int, k: int) -> int:
    """Dimension k(n-k-1) of the family of strict collision maps of roughness rank k."""
    if n < 1 or not 0 <= k <= n - 1:
        raise ValueError(f"roughness rank must lie in [0, {n - 1}], got k={k}")
    return k * (n - k - 1)


def grassmannian_table(max_n: int) -> List[List[int]]:
    """Rows n = 1..max_n of grassmannian_dim over k = 0..n-1."""
    return [[grassmannian_dim(n, k) for k in range(n)] for n in range(1, max_n + 1)]


def regularity_check(S1: np.ndarray, S2: np.ndarray, s: float = 0.0) -> schemas.RegularityResult:
    """
    Check that S1 + S2 - s S1 S2 is nonsingular.

    With s = 0 this is the condition S1 + S2 nonsingular on the relative
    curvature of the two boundaries at the contact point.
    """
    S1 = np.atleast_2d(np.asarray(S1, dtype=float))
    S2 = np.atleast_2d(np.asarray(S2, dtype=float))
    if S1.shape != S2.shape or S1.shape[0] != S1.shape[1]:
        raise DimensionMismatchError(f"shape operators of shapes {S1.shape} and {S2.shape}")
    singular = np.linalg.svd(S1 + S2 - s * S1 @ S2, compute_uv=False)
    smallest = float(singular[-1]) if singular.size else np.inf
    condition = float(singular[0] / smallest) if smallest > 0 else np.inf
    return schemas.RegularityResult(
        regular=smallest > get_settings().SUBSPACE_TOLERANCE,
        min_singular_value=smallest,
        condition_number=condition,
    )


def _merge_residuals(target: Dict[str, float], residuals: Dict[str, float]) -> None:
    for key, value in residuals.items():
        target[key] = max(target.get(key, 0.0), value)


def verify_strict_batch(
    n: int, trials: int, rng: np.random.Generator, k: Optional[int] = None
) -> schemas.VerificationSummary:
    """
    verify_strict on `trials` random configurations.

    Each trial builds a map of roughness rank k on a fresh configuration; a
    random rank in [0, n-1] is drawn per trial when k is None.
    """
    failures = 0
    worst: Dict[str, float] = {}
    for trial in range(trials):
        q, bodies = random_configuration(n, rng)
        rank = int(rng.integers(0, n)) if k is None else k
        C = build_collision_map(q, bodies, random_rough_subspace(q, bodies, rank, rng))
        report = verify_strict(C, q, bodies, rng)
        _merge_residuals(worst, report.residuals)
        if not report.passed:
            failures += 1
            logger.warning("strictness trial %d (n=%d, k=%d) failed: %s", trial, n, rank, report.residuals)
    logger.info("strictness: %d of %d trials failed for n=%d", failures, trials, n)
    return schemas.VerificationSummary(name=f"strict-n{n}", trials=trials, failures=failures,
                                       max_residuals=worst)


def verify_orthogonality_batch(
    n: int, trials: int, rng: np.random.Generator
) -> schemas.VerificationSummary:
    failures = 0
    worst: Dict[str, float] = {}
    for trial in range(trials):
        q, bodies = random_configuration(n, rng)
        report = verify_orthogonality(q, bodies)
        _merge_residuals(worst, {"cross_inner": report.max_cross_inner,
                                 "normal_residual": report.normal_residual})
        if not report.passed:
            failures += 1
            logger.warning("orthogonality trial %d (n=%d) failed: %s", trial, n, report)
    return schemas.VerificationSummary(name=f"orthogonality-n{n}", trials=trials, failures=failures,
                                       max_residuals=worst)


def dimension_rows(dimensions: Sequence[int], rng: np.random.Generator) -> List[schemas.DimensionRow]:
    """Grassmannian dimensions and subspace dimensions at a random configuration, per n."""
    rows = []
    for n in dimensions:
        q, bodies = random_configuration(n, rng)
        rows.append(schemas.DimensionRow(
            n=n,
            grassmannian=[grassmannian_dim(n, k) for k in range(n)],
            nonslip=subspace_nonslip(q).dim,
            rolling=subspace_rolling(q).dim,
            diagonal=subspace_diag(q).dim,
            impulse=subspace_impulse(q, bodies).dim,
        ))
    return rows
