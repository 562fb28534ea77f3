"""Exact linear algebra over a prime field.

Matrices are dense numpy uint64 arrays with entries reduced into [0, p).
For the default modulus 2^61 - 1 (and any prime below 2^31) elimination
runs through the selected kernel backend in 64-bit words; other primes
below 2^62 fall back to arbitrary-precision Python integers, which stay
exact at any size but are slow.

A rank computed here is the rank over F_p.  For a matrix with integer
entries that is a lower bound on the rank over the rationals, with
equality away from finitely many primes; `rank_rational` runs
fraction-free (Bareiss) elimination over the integers when the exact
rational rank is wanted.
"""

from __future__ import annotations

import numpy as np

from ._backend import kernels

MERSENNE61 = (1 << 61) - 1
DEFAULT_PRIME = MERSENNE61

# Entries must fit a 64-bit word with headroom for one modular add.
MAX_PRIME = 1 << 62

__all__ = [
    "MERSENNE61",
    "DEFAULT_PRIME",
    "NonSquareError",
    "SingularMatrixError",
    "is_prime",
    "is_fast_prime",
    "normalize",
    "rank",
    "kernel_dimension",
    "determinant",
    "inverse",
    "mat_mul",
    "mat_add",
    "mat_sub",
    "scalar_mul",
    "rank_rational",
]


class NonSquareError(ValueError):
    """Raised when a square-only operation receives a rectangular matrix."""


class SingularMatrixError(ValueError):
    """Raised when inverting a matrix with zero determinant mod p."""


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test.

    The witness set 2..37 decides correctly for every n below 3.3e24,
    which covers the full uint64 range used here.
    """
    n = int(n)
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_fast_prime(p: int) -> bool:
    """Whether modulus p is handled by the 64-bit kernels."""
    p = int(p)
    return p == MERSENNE61 or p < (1 << 31)


def _check_prime_size(p: int) -> int:
    p = int(p)
    if not 1 < p < MAX_PRIME:
        raise ValueError("modulus must lie in (1, 2^62), got %d" % p)
    return p


def normalize(mat, p: int) -> np.ndarray:
    """Reduce an integer matrix (any dtype, any sign) into [0, p) uint64."""
    p = _check_prime_size(p)
    a = np.asarray(mat)
    if a.dtype == np.uint64:
        return a % np.uint64(p)
    # Route through object dtype so negative and arbitrarily large
    # entries reduce exactly.
    return (np.asarray(a, dtype=object) % p).astype(np.uint64)


def rank(mat, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p.  Deterministic for a given input."""
    a = normalize(mat, p)
    if a.ndim != 2:
        raise ValueError("rank expects a 2-d matrix")
    if a.size == 0:
        return 0
    if is_fast_prime(p):
        return int(kernels.rank_elim(np.ascontiguousarray(a), np.uint64(p)))
    return _rank_object(a, int(p))


def _rank_object(a: np.ndarray, p: int) -> int:
    rows = [[int(x) for x in row] for row in a]
    m = len(rows)
    n = len(rows[0])
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        top = rows[r]
        for i in range(r + 1, m):
            f = rows[i][c]
            if f:
                f = f * inv % p
                ri = rows[i]
                ri[c] = 0
                for j in range(c + 1, n):
                    if top[j]:
                        ri[j] = (ri[j] - f * top[j]) % p
        r += 1
    return r


def kernel_dimension(mat, p: int = DEFAULT_PRIME) -> int:
    """Dimension over F_p of the right null space: columns minus rank."""
    a = np.asarray(mat)
    if a.ndim != 2:
        raise ValueError("kernel_dimension expects a 2-d matrix")
    return a.shape[1] - rank(a, p)


def determinant(mat, p: int = DEFAULT_PRIME) -> int:
    """Determinant over F_p via elimination with pivot-sign tracking."""
    a = normalize(mat, p)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError("determinant needs a square matrix, got %r"
                             % (a.shape,))
    p = int(p)
    n = a.shape[0]
    rows = [[int(x) for x in row] for row in a]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c] % p
        inv = pow(rows[c][c], -1, p)
        top = rows[c]
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv % p
                ri = rows[i]
                for j in range(c, n):
                    if top[j]:
                        ri[j] = (ri[j] - f * top[j]) % p
        # pivot row kept unscaled; det already collected the pivot
    return det % p


def inverse(mat, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Matrix inverse over F_p by Gauss-Jordan elimination.

    Raises SingularMatrixError when no inverse exists.
    """
    a = normalize(mat, p)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError("inverse needs a square matrix, got %r"
                             % (a.shape,))
    p = int(p)
    n = a.shape[0]
    left = [[int(x) for x in row] for row in a]
    right = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if left[i][c]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular mod %d" % p)
        if piv != c:
            left[c], left[piv] = left[piv], left[c]
            right[c], right[piv] = right[piv], right[c]
        inv = pow(left[c][c], -1, p)
        left[c] = [x * inv % p for x in left[c]]
        right[c] = [x * inv % p for x in right[c]]
        lc, rc = left[c], right[c]
        for i in range(n):
            if i != c and left[i][c]:
                f = left[i][c]
                left[i] = [(x - f * y) % p for x, y in zip(left[i], lc)]
                right[i] = [(x - f * y) % p for x, y in zip(right[i], rc)]
    return np.array(right, dtype=np.uint64)


def mat_mul(a, b, p: int = DEFAULT_PRIME) -> np.ndarray:
    """(a @ b) mod p, exact for any supported modulus."""
    prod = np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)
    return (prod % int(p)).astype(np.uint64)


def mat_add(a, b, p: int = DEFAULT_PRIME) -> np.ndarray:
    """(a + b) mod p on reduced uint64 arrays."""
    return (np.asarray(a, dtype=np.uint64)
            + np.asarray(b, dtype=np.uint64)) % np.uint64(p)


def mat_sub(a, b, p: int = DEFAULT_PRIME) -> np.ndarray:
    """(a - b) mod p on reduced uint64 arrays."""
    bb = np.asarray(b, dtype=np.uint64)
    return (np.asarray(a, dtype=np.uint64)
            + (np.uint64(p) - bb)) % np.uint64(p)


def scalar_mul(c: int, mat, p: int = DEFAULT_PRIME) -> np.ndarray:
    """(c * mat) mod p, exact via object arithmetic."""
    return (int(c) * np.asarray(mat, dtype=object) % int(p)).astype(np.uint64)


def symmetric_lift(mat, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Lift residues to the symmetric range (-p/2, p/2] as Python ints.

    Any lift reduces back to the same matrix mod p, so the modular rank
    is a lower bound for the rational rank of the result; when the
    residues encode integers of absolute value below p/2 the symmetric
    lift recovers them exactly.
    """
    p = int(p)
    a = np.asarray(mat, dtype=object)
    half = p // 2
    return np.where(a % p > half, a % p - p, a % p)


def rank_rational(mat) -> int:
    """Rank over the rationals of an integer matrix.

    Fraction-free (Bareiss) elimination: every intermediate entry is a
    minor of the input, divisions are exact integer divisions.  Slow on
    large matrices; meant as an opt-in cross-check of the modular rank.
    """
    a = np.asarray(mat, dtype=object)
    if a.ndim != 2:
        raise ValueError("rank_rational expects a 2-d matrix")
    if a.size == 0:
        return 0
    rows = [[int(x) for x in row] for row in a]
    m = len(rows)
    n = len(rows[0])
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        top = rows[r]
        for i in range(r + 1, m):
            ri = rows[i]
            f = ri[c]
            for j in range(c + 1, n):
                q, rem = divmod(top[c] * ri[j] - f * top[j], prev)
                if rem:
                    raise ArithmeticError("inexact division in Bareiss step")
                ri[j] = q
            ri[c] = 0
        prev = top[c]
        r += 1
    return r
