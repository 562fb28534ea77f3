"""Skew-symmetric charts and principal sub-Pfaffian coordinates.

A point of the even pure spinor variety, in the affine chart where the
first h x h block of the row span [I_h | U] is the identity, is a skew
h x h matrix U stored by its strict upper triangle.  Its projective
coordinates are the principal sub-Pfaffians Pf_K(U) over the even-size
index subsets K of {0, ..., h-1}, giving 2^(h-1) coordinates; Pf of the
empty subset is 1, so the chart is genuinely affine.

Subsets are bitmasks (bit t set means index t is in K) and are listed in
the canonical order: cardinality ascending, lexicographic on the sorted
index tuple within each cardinality.

Sign conventions.  Pf([[0, a], [-a, 0]]) = a, and for 4 x 4,
Pf = u01 u23 - u02 u13 + u03 u12 (0-based indices).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import exact
from ._backend import kernels
from . import _kernels_numpy

MAX_H = 24

__all__ = [
    "MAX_H",
    "SizeOutOfRangeError",
    "BadIndexError",
    "SkewMatrix",
    "SpinorPoint",
    "n_pairs",
    "pair_index",
    "pair_arrays",
    "enumerate_even_subsets",
    "pfaffian",
    "sub_pfaffian",
    "spinor_coordinates",
    "pfaffian_partial",
    "jacobian",
    "coordinates_and_jacobian",
]


class SizeOutOfRangeError(ValueError):
    """Raised when the matrix size h leaves the supported range."""


class BadIndexError(ValueError):
    """Raised for index pairs outside the strict upper triangle."""


def _check_h(h: int) -> int:
    h = int(h)
    if not 1 <= h <= MAX_H:
        raise SizeOutOfRangeError("h must lie in [1, %d], got %d" % (MAX_H, h))
    return h


def n_pairs(h: int) -> int:
    """Number of strict upper-triangle positions, h(h-1)/2."""
    return h * (h - 1) // 2


def pair_index(h: int, i: int, j: int) -> int:
    """Position of (i, j), i < j, in row-major upper-triangle order."""
    if not 0 <= i < j < h:
        raise BadIndexError("need 0 <= i < j < h, got (%d, %d)" % (i, j))
    return i * (2 * h - i - 1) // 2 + (j - i - 1)


def pair_arrays(h: int) -> tuple[np.ndarray, np.ndarray]:
    """All (i, j) with i < j in pair_index order, as two int64 arrays."""
    idx = [(i, j) for i in range(h) for j in range(i + 1, h)]
    pi = np.array([i for i, _ in idx], dtype=np.int64)
    pj = np.array([j for _, j in idx], dtype=np.int64)
    return pi, pj


@dataclass(frozen=True, eq=False)
class SkewMatrix:
    """Skew h x h matrix over F_p stored by its strict upper triangle.

    `upper` is a uint64 vector of length h(h-1)/2 in pair_index order;
    entries are residues in [0, p).  Instances are treated as immutable.
    """

    h: int
    upper: np.ndarray

    def __post_init__(self):
        _check_h(self.h)
        if self.upper.shape != (n_pairs(self.h),):
            raise ValueError("upper triangle has wrong length %r"
                             % (self.upper.shape,))

    @classmethod
    def zero(cls, h: int) -> "SkewMatrix":
        return cls(_check_h(h), np.zeros(n_pairs(h), dtype=np.uint64))

    @classmethod
    def from_upper(cls, h: int, values, p: int) -> "SkewMatrix":
        vals = exact.normalize(np.asarray(values).reshape(-1), p)
        return cls(_check_h(h), vals)

    @classmethod
    def from_full(cls, full, p: int) -> "SkewMatrix":
        """Build from a full matrix, checking skew-symmetry mod p."""
        a = exact.normalize(full, p)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix, got %r" % (a.shape,))
        h = _check_h(a.shape[0])
        if np.any(exact.mat_add(a, a.T, p)):
            raise ValueError("matrix is not skew-symmetric mod %d" % p)
        pi, pj = pair_arrays(h)
        return cls(h, a[pi, pj].astype(np.uint64))

    @classmethod
    def random(cls, h: int, rng: np.random.Generator, p: int) -> "SkewMatrix":
        """Uniform upper-triangle entries in [0, p)."""
        _check_h(h)
        vals = rng.integers(0, int(p), size=n_pairs(h), dtype=np.uint64)
        return cls(h, vals)

    def full(self, p: int) -> np.ndarray:
        """Expand to the full h x h uint64 matrix mod p."""
        h = self.h
        out = np.zeros((h, h), dtype=np.uint64)
        pi, pj = pair_arrays(h)
        out[pi, pj] = self.upper
        low = (np.uint64(p) - self.upper) % np.uint64(p)
        out[pj, pi] = low
        return out

    def scale(self, c: int, p: int) -> "SkewMatrix":
        return SkewMatrix(self.h, exact.scalar_mul(c, self.upper, p))

    def entry(self, i: int, j: int, p: int) -> int:
        """Entry (i, j) of the full matrix, any i != j."""
        if i == j:
            return 0
        if i < j:
            return int(self.upper[pair_index(self.h, i, j)])
        return (int(p) - int(self.upper[pair_index(self.h, j, i)])) % int(p)


@dataclass(frozen=True, eq=False)
class SpinorPoint:
    """All 2^(h-1) sub-Pfaffian coordinates of one chart point."""

    h: int
    coords: np.ndarray


def enumerate_even_subsets(h: int) -> np.ndarray:
    """Bitmasks of the even-cardinality subsets of {0, ..., h-1}.

    Canonical coordinate order: cardinality ascending, lexicographic on
    the sorted index tuple within a cardinality.  Length is 2^(h-1).
    """
    _check_h(h)
    masks = []
    for card in range(0, h + 1, 2):
        for combo in itertools.combinations(range(h), card):
            m = 0
            for t in combo:
                m |= 1 << t
            masks.append(m)
    return np.array(masks, dtype=np.int64)


def _table_for(full: np.ndarray, p: int, max_card: int) -> np.ndarray:
    """Sub-Pfaffian table via the fast kernels when the modulus allows."""
    if exact.is_fast_prime(p):
        return kernels.pf_table(full, np.uint64(p), max_card)
    return _kernels_numpy.pf_table(full, p, max_card)


def pfaffian(u: SkewMatrix, p: int = exact.DEFAULT_PRIME) -> int:
    """Pfaffian of u mod p; 0 when h is odd."""
    if u.h % 2:
        return 0
    table = _table_for(u.full(p), p, u.h)
    return int(table[(1 << u.h) - 1])


def _check_mask(h: int, mask: int) -> int:
    mask = int(mask)
    if not 0 <= mask < (1 << h):
        raise BadIndexError("subset mask %d out of range for h=%d" % (mask, h))
    return mask


def sub_pfaffian(u: SkewMatrix, mask: int, p: int = exact.DEFAULT_PRIME) -> int:
    """Pfaffian of the principal submatrix on the set bits of mask.

    Odd-cardinality subsets give 0; the empty subset gives 1.  Computed
    on the compressed submatrix, so the cost depends only on |K|.
    """
    mask = _check_mask(u.h, mask)
    card = mask.bit_count()
    if card % 2:
        return 0
    if card == 0:
        return 1
    idx = [t for t in range(u.h) if (mask >> t) & 1]
    sub = u.full(p)[np.ix_(idx, idx)]
    table = _table_for(sub, p, card)
    return int(table[(1 << card) - 1])


def spinor_coordinates(u: SkewMatrix, p: int = exact.DEFAULT_PRIME) -> SpinorPoint:
    """All sub-Pfaffian coordinates of u in canonical subset order."""
    masks = enumerate_even_subsets(u.h)
    table = _table_for(u.full(p), p, u.h)
    return SpinorPoint(u.h, table[masks])


def pfaffian_partial(u: SkewMatrix, mask: int, i: int, j: int,
                     p: int = exact.DEFAULT_PRIME) -> int:
    """d Pf_K / d u[i, j] at u, for the strict upper pair i < j.

    Zero unless both i and j lie in K; otherwise +-Pf(K - {i, j}) where
    the sign is +1 exactly when #(K below i) + #(K below j) is odd.
    Pf_K is multilinear in the u[i, j], so this equals the exact finite
    difference Pf_K(u + E_ij) - Pf_K(u).
    """
    mask = _check_mask(u.h, mask)
    if not 0 <= i < j < u.h:
        raise BadIndexError("need 0 <= i < j < h, got (%d, %d)" % (i, j))
    bij = (1 << i) | (1 << j)
    if mask & bij != bij:
        return 0
    val = sub_pfaffian(u, mask ^ bij, p)
    below = (mask & ((1 << i) - 1)).bit_count() \
        + (mask & ((1 << j) - 1)).bit_count()
    if below % 2 == 1:
        return val
    return (int(p) - val) % int(p)


def _as_pair_arrays(h: int, pairs) -> tuple[np.ndarray, np.ndarray]:
    if pairs is None:
        return pair_arrays(h)
    pi = np.array([i for i, _ in pairs], dtype=np.int64)
    pj = np.array([j for _, j in pairs], dtype=np.int64)
    for i, j in zip(pi, pj):
        if not 0 <= i < j < h:
            raise BadIndexError("need 0 <= i < j < h, got (%d, %d)" % (i, j))
    return pi, pj


def jacobian(u: SkewMatrix, p: int = exact.DEFAULT_PRIME,
             masks=None, pairs=None) -> np.ndarray:
    """Matrix of d Pf_K / d u[i, j] over pairs (rows) and subsets (cols).

    Defaults cover every strict upper pair and every even subset in
    canonical order.  Restricting `masks`/`pairs` restricts the table
    work accordingly (only cardinalities up to the largest requested
    subset are expanded).
    """
    if masks is None:
        masks = enumerate_even_subsets(u.h)
    else:
        masks = np.asarray(masks, dtype=np.int64)
        for m in masks:
            _check_mask(u.h, int(m))
    pi, pj = _as_pair_arrays(u.h, pairs)
    max_card = 0
    if masks.size:
        max_card = max(int(m).bit_count() for m in masks) - 2
    table = _table_for(u.full(p), p, max(max_card, 0))
    if exact.is_fast_prime(p):
        return kernels.jacobian_fill(table, masks, pi, pj, np.uint64(p))
    return _kernels_numpy.jacobian_fill(table, masks, pi, pj, p)


def coordinates_and_jacobian(u: SkewMatrix, p: int = exact.DEFAULT_PRIME
                             ) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates and full Jacobian sharing one sub-Pfaffian table."""
    masks = enumerate_even_subsets(u.h)
    pi, pj = pair_arrays(u.h)
    table = _table_for(u.full(p), p, u.h)
    coords = table[masks]
    if exact.is_fast_prime(p):
        jac = kernels.jacobian_fill(table, masks, pi, pj, np.uint64(p))
    else:
        jac = _kernels_numpy.jacobian_fill(table, masks, pi, pj, p)
    return coords, jac
