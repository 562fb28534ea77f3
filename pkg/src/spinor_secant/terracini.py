"""Secant variety dimensions via Terracini's lemma.

The affine tangent space of the spinor embedding at a chart point U is
the row span of one (p+1) x 2^(h-1) matrix, p = h(h-1)/2: the
coordinate vector of U on top of the Jacobian of all sub-Pfaffians with
respect to the strict upper entries.  By Terracini, the span of the k
tangent spaces at generic points computes the dimension of the k-th
secant variety: stacked rank = affine dimension, projective dimension =
rank - 1.

Ranks are taken over F_p for a large prime.  A random specialization
can only lose rank, never gain it, so every dimension reported by the
estimator is a certified lower bound; it equals the true generic
dimension unless the random points hit a measure-zero locus (probability
on the order of deg/p per trial).  Hitting the expected dimension
therefore certifies non-defectivity outright; strict shortfalls are
labelled as lower bounds unless a deterministic certificate upgrades
them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import exact
from . import spinor
from .spinor import SkewMatrix

if TYPE_CHECKING:  # pragma: no cover
    from .orthogonal import CertificateVerdict

__all__ = [
    "SecantStatus",
    "TangentMatrix",
    "SecantReport",
    "DimensionExceedsExpectedError",
    "DEFAULT_TABLE_RANGES",
    "affine_tangent_matrix",
    "tangent_block",
    "stacked_rank",
    "expected_dimension",
    "secant_dimension_estimate",
    "defect",
    "reproduce_tables",
]


class SecantStatus(str, enum.Enum):
    """How much the reported dimension is backed by."""

    CERTIFIED_NONDEFECTIVE = "CERTIFIED_NONDEFECTIVE"
    LOWER_BOUND_ONLY = "LOWER_BOUND_ONLY"
    CERTIFIED_DEFECTIVE = "CERTIFIED_DEFECTIVE"


# Default h ranges for the standard tables, keyed by k.
DEFAULT_TABLE_RANGES = {2: (6, 11), 3: (7, 12), 4: (7, 10), 5: (8, 9)}


class DimensionExceedsExpectedError(ValueError):
    """Raised when a claimed dimension exceeds the expected dimension."""


@dataclass(frozen=True, eq=False)
class TangentMatrix:
    """Affine tangent matrix at one chart point.

    Row 0 is the coordinate vector of the point itself (the affine cone
    direction), rows 1..p are the sub-Pfaffian Jacobian rows in
    pair_index order.
    """

    h: int
    base: SkewMatrix
    matrix: np.ndarray


def tangent_block(u: SkewMatrix, p: int = exact.DEFAULT_PRIME) -> np.ndarray:
    """The (h(h-1)/2 + 1) x 2^(h-1) tangent matrix as a plain array."""
    coords, jac = spinor.coordinates_and_jacobian(u, p)
    return np.vstack([coords[None, :], jac])


def affine_tangent_matrix(u: SkewMatrix,
                          p: int = exact.DEFAULT_PRIME) -> TangentMatrix:
    return TangentMatrix(u.h, u, tangent_block(u, p))


def stacked_rank(points, p: int = exact.DEFAULT_PRIME) -> int:
    """Rank of the vertically stacked tangent matrices of the points."""
    blocks = [tangent_block(u, p) for u in points]
    return exact.rank(np.vstack(blocks), p)


def expected_dimension(h: int, k: int) -> int:
    """min(k p + k - 1, N): the dimension count with no defect.

    p = h(h-1)/2 is the spinor variety dimension and N = 2^(h-1) - 1
    the ambient projective dimension.
    """
    h = int(h)
    k = int(k)
    if k < 1:
        raise ValueError("k must be positive, got %d" % k)
    p_dim = spinor.n_pairs(h)
    ambient = (1 << (h - 1)) - 1
    return min(k * p_dim + k - 1, ambient)


def defect(h: int, k: int, dimension: int) -> int:
    """expected - actual; raises if the claimed dimension is too large."""
    exp = expected_dimension(h, k)
    if dimension > exp:
        raise DimensionExceedsExpectedError(
            "dimension %d exceeds expected %d for (h, k) = (%d, %d)"
            % (dimension, exp, h, k))
    return exp - dimension


@dataclass(frozen=True)
class SecantReport:
    """Result of one secant dimension computation."""

    h: int
    k: int
    prime: int
    seed: int
    trials: int
    affine_rank: int
    dimension: int
    expected: int
    defect_lower_bound: int
    status: SecantStatus
    certificate: "CertificateVerdict | None" = None

    @property
    def n_pairs(self) -> int:
        return spinor.n_pairs(self.h)

    @property
    def ambient(self) -> int:
        return (1 << (self.h - 1)) - 1


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))


def _trial_points(h: int, k: int, seed: int, trial: int,
                  prime: int) -> list[SkewMatrix]:
    rng = _trial_rng(seed, trial)
    return [SkewMatrix.random(h, rng, prime) for _ in range(k)]


def trial_stack(h: int, k: int, seed: int = 0, trial: int = 0,
                prime: int = exact.DEFAULT_PRIME) -> np.ndarray:
    """The stacked k(p+1) x 2^(h-1) tangent matrix of one trial's points.

    Exposed so callers can rerun other eliminations (rational lift,
    alternative backends) on exactly the matrix the estimator ranked.
    """
    points = _trial_points(h, k, seed, trial, prime)
    return np.vstack([tangent_block(u, prime) for u in points])


def secant_dimension_estimate(h: int, k: int, seed: int = 0, trials: int = 1,
                              prime: int = exact.DEFAULT_PRIME) -> SecantReport:
    """Terracini rank at k random points, maximized over trials.

    Each trial draws its k points from an independent stream spawned
    from (seed, trial), so reports are reproducible and the point sets
    for k and k+1 at the same seed share their first k points.
    """
    h = int(h)
    k = int(k)
    spinor._check_h(h)
    if k < 1:
        raise ValueError("k must be positive, got %d" % k)
    if trials < 1:
        raise ValueError("trials must be positive, got %d" % trials)
    best = 0
    for trial in range(trials):
        points = _trial_points(h, k, seed, trial, prime)
        best = max(best, stacked_rank(points, prime))
    dimension = best - 1
    exp = expected_dimension(h, k)
    status = (SecantStatus.CERTIFIED_NONDEFECTIVE if dimension == exp
              else SecantStatus.LOWER_BOUND_ONLY)
    return SecantReport(
        h=h, k=k, prime=int(prime), seed=int(seed), trials=int(trials),
        affine_rank=best, dimension=dimension, expected=exp,
        defect_lower_bound=exp - dimension, status=status,
    )


def reproduce_tables(k: int, h_min: int | None = None, h_max: int | None = None,
                     seed: int = 0, trials: int = 1,
                     prime: int = exact.DEFAULT_PRIME,
                     certify: bool = True,
                     max_workers: int = 1) -> list[SecantReport]:
    """Reports for h in [h_min, h_max] at fixed k, in h order.

    With certify=True the known deterministic certificates are attached
    where available, upgrading the status of the defective cases.
    Rows are independent, so max_workers > 1 computes them in a thread
    pool; the returned order is by h either way.
    """
    k = int(k)
    if h_min is None or h_max is None:
        if k not in DEFAULT_TABLE_RANGES:
            raise ValueError(
                "no default h range for k=%d; pass h_min and h_max" % k)
        lo, hi = DEFAULT_TABLE_RANGES[k]
        h_min = lo if h_min is None else h_min
        h_max = hi if h_max is None else h_max
    if h_min > h_max:
        raise ValueError("h_min %d exceeds h_max %d" % (h_min, h_max))

    def one_row(h: int) -> SecantReport:
        rep = secant_dimension_estimate(h, k, seed=seed, trials=trials,
                                        prime=prime)
        if certify:
            # Imported here: orthogonal builds on this module.
            from .orthogonal import upgrade_report
            rep = upgrade_report(rep)
        return rep

    hs = range(int(h_min), int(h_max) + 1)
    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(one_row, hs))
    return [one_row(h) for h in hs]
