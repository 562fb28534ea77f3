"""Numba builds of the hot kernels.

Every kernel here assumes the modulus p is one of the two fast classes:
the Mersenne prime 2^61 - 1 (reduced by shift/fold, no division) or a
prime below 2^31 (a product of two residues fits one 64-bit word, so a
plain % works).  Callers route any other modulus to the
arbitrary-precision paths in `exact` / `_kernels_numpy`.

All matrices are uint64 arrays with entries already reduced into [0, p).
"""

from __future__ import annotations

import numpy as np
from numba import njit

M61 = (1 << 61) - 1

_M = np.uint64(M61)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)


@njit(cache=True, nogil=True, inline="always")
def _mulmod(a, b, p):
    """(a * b) mod p for residues a, b < p, p in a fast class."""
    if p == _M:
        # Split into 32-bit halves; 2^64 = 8 mod p, 2^61 = 1 mod p.
        a1 = a >> np.uint64(32)
        a0 = a & np.uint64(0xFFFFFFFF)
        b1 = b >> np.uint64(32)
        b0 = b & np.uint64(0xFFFFFFFF)
        mid = a1 * b0 + a0 * b1
        lo = a0 * b0
        t = ((a1 * b1) << np.uint64(3)) \
            + (mid >> np.uint64(29)) \
            + ((mid & np.uint64((1 << 29) - 1)) << np.uint64(32))
        t += (lo >> np.uint64(61)) + (lo & _M)
        t = (t >> np.uint64(61)) + (t & _M)
        t = (t >> np.uint64(61)) + (t & _M)
        if t >= _M:
            t -= _M
        return t
    return (a * b) % p


@njit(cache=True, nogil=True, inline="always")
def _submod(a, b, p):
    """(a - b) mod p for residues a, b < p."""
    t = a + (p - b)
    if t >= p:
        t -= p
    return t


@njit(cache=True, nogil=True, inline="always")
def _addmod(a, b, p):
    t = a + b
    if t >= p:
        t -= p
    return t


@njit(cache=True, nogil=True)
def _powmod(a, e, p):
    r = _ONE
    b = a
    while e > _ZERO:
        if e & _ONE:
            r = _mulmod(r, b, p)
        b = _mulmod(b, b, p)
        e >>= _ONE
    return r


@njit(cache=True, nogil=True)
def rank_elim(A, p):
    """Rank of A over F_p by in-place row elimination.

    A is a C-contiguous uint64 matrix with entries in [0, p); it is
    destroyed.  Pivots are the first nonzero entry in each column.
    """
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if A[i, c] != _ZERO:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _powmod(A[r, c], p - np.uint64(2), p)
        for i in range(r + 1, m):
            f = A[i, c]
            if f == _ZERO:
                continue
            f = _mulmod(f, inv, p)
            A[i, c] = _ZERO
            for j in range(c + 1, n):
                v = A[r, j]
                if v != _ZERO:
                    A[i, j] = _submod(A[i, j], _mulmod(f, v, p), p)
        r += 1
    return r


@njit(cache=True, nogil=True)
def pf_table(u, p, max_card):
    """Sub-Pfaffian values for every index subset of {0, ..., h-1}.

    u is the full h x h skew matrix mod p.  Entry `mask` of the returned
    array is the Pfaffian of the principal submatrix picked out by the
    set bits of mask; odd-cardinality masks and masks with more than
    max_card bits are left at 0 (the empty mask gets 1).

    Recursion: expand along the lowest set bit i0,
        Pf(S) = sum_{j in S, j > i0} (-1)^{pos(j)} u[i0, j] Pf(S - {i0, j})
    where pos(j) counts the position of j among the other elements.
    """
    h = u.shape[0]
    size = 1 << h
    table = np.zeros(size, dtype=np.uint64)
    table[0] = _ONE
    for mask in range(1, size):
        pc = 0
        mm = mask
        while mm:
            pc += mm & 1
            mm >>= 1
        if pc & 1 or pc > max_card:
            continue
        i0 = 0
        while not (mask >> i0) & 1:
            i0 += 1
        acc = _ZERO
        positive = True
        for j in range(i0 + 1, h):
            if (mask >> j) & 1:
                v = u[i0, j]
                if v != _ZERO:
                    term = _mulmod(v, table[mask ^ (1 << i0) ^ (1 << j)], p)
                    if positive:
                        acc = _addmod(acc, term, p)
                    else:
                        acc = _submod(acc, term, p)
                positive = not positive
        table[mask] = acc
    return table


@njit(cache=True, nogil=True, inline="always")
def _popcount(x):
    c = 0
    while x:
        c += x & 1
        x >>= 1
    return c


@njit(cache=True, nogil=True)
def jacobian_fill(table, masks, pair_i, pair_j, p):
    """Partial derivatives of sub-Pfaffians with respect to u[i, j].

    Row r corresponds to the pair (pair_i[r], pair_j[r]), column c to
    masks[c].  The derivative is 0 unless both indices lie in the mask,
    otherwise +-Pf(mask - {i, j}) with sign +1 exactly when the number
    of mask elements below i plus the number below j is odd.
    """
    n_rows = pair_i.shape[0]
    n_cols = masks.shape[0]
    out = np.zeros((n_rows, n_cols), dtype=np.uint64)
    for r in range(n_rows):
        i = pair_i[r]
        j = pair_j[r]
        bi = np.int64(1) << i
        bj = np.int64(1) << j
        bij = bi | bj
        below_i = bi - 1
        below_j = bj - 1
        for c in range(n_cols):
            m = masks[c]
            if (m & bij) == bij:
                val = table[m ^ bij]
                if val != _ZERO:
                    par = (_popcount(m & below_i) + _popcount(m & below_j)) & 1
                    if par == 1:
                        out[r, c] = val
                    else:
                        out[r, c] = p - val
    return out
