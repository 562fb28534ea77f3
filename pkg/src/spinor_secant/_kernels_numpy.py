"""Pure-numpy builds of the hot kernels.

Same call signatures and same outputs as _kernels_numba.  rank_elim and
jacobian_fill are vectorized across rows/columns; pf_table runs the
subset recursion in Python integers, which keeps it exact for any odd
prime modulus below 2^63 (the numba build only accepts the fast prime
classes).
"""

from __future__ import annotations

import numpy as np

M61 = (1 << 61) - 1

_M = np.uint64(M61)


def _mul_vec(a, b, p):
    """Elementwise (a * b) mod p on uint64 arrays with entries < p."""
    if int(p) == M61:
        mask32 = np.uint64(0xFFFFFFFF)
        a1 = a >> np.uint64(32)
        a0 = a & mask32
        b1 = b >> np.uint64(32)
        b0 = b & mask32
        mid = a1 * b0 + a0 * b1
        lo = a0 * b0
        t = ((a1 * b1) << np.uint64(3)) \
            + (mid >> np.uint64(29)) \
            + ((mid & np.uint64((1 << 29) - 1)) << np.uint64(32))
        t += (lo >> np.uint64(61)) + (lo & _M)
        t = (t >> np.uint64(61)) + (t & _M)
        t = (t >> np.uint64(61)) + (t & _M)
        # masked subtract instead of np.where: never wraps below zero
        return t - _M * (t >= _M).astype(np.uint64)
    # p < 2^31: the product fits in 64 bits
    return (a * b) % np.uint64(p)


def _sub_vec(a, b, p):
    """Elementwise (a - b) mod p on uint64 arrays with entries < p."""
    pp = np.uint64(p)
    t = a + (pp - b)
    return t - pp * (t >= pp).astype(np.uint64)


def rank_elim(A, p):
    """Rank of A over F_p by in-place row elimination (A is destroyed)."""
    m, n = A.shape
    pint = int(p)
    r = 0
    for c in range(n):
        if r == m:
            break
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv], c:] = A[[piv, r], c:]
        inv = np.uint64(pow(int(A[r, c]), -1, pint))
        if r + 1 < m:
            factors = _mul_vec(A[r + 1:, c], inv, p)
            live = factors != np.uint64(0)
            if live.any():
                f = factors[live]
                block = A[r + 1:, c + 1:]
                row = A[r, c + 1:]
                block[live] = _sub_vec(
                    block[live], _mul_vec(f[:, None], row[None, :], p), p
                )
            A[r + 1:, c] = np.uint64(0)
        r += 1
    return r


def pf_table(u, p, max_card):
    """Sub-Pfaffian values for every index subset of {0, ..., h-1}.

    Mirrors the numba build: entry `mask` holds the Pfaffian of the
    principal submatrix on the set bits of mask, via expansion along the
    lowest set bit; odd masks and masks above max_card stay 0.
    """
    h = u.shape[0]
    pint = int(p)
    uu = [[int(x) for x in row] for row in u]
    size = 1 << h
    table = [0] * size
    table[0] = 1
    for mask in range(1, size):
        pc = mask.bit_count()
        if pc & 1 or pc > max_card:
            continue
        i0 = (mask & -mask).bit_length() - 1
        acc = 0
        positive = True
        row = uu[i0]
        for j in range(i0 + 1, h):
            if (mask >> j) & 1:
                v = row[j]
                if v:
                    term = v * table[mask ^ (1 << i0) ^ (1 << j)] % pint
                    acc = acc + term if positive else acc - term
                positive = not positive
        table[mask] = acc % pint
    return np.array(table, dtype=np.uint64)


def jacobian_fill(table, masks, pair_i, pair_j, p):
    """Partial derivatives of sub-Pfaffians with respect to u[i, j].

    Sign is +1 exactly when the number of mask elements below i plus the
    number below j is odd, matching the numba build.
    """
    n_rows = pair_i.shape[0]
    out = np.zeros((n_rows, masks.shape[0]), dtype=np.uint64)
    pp = np.uint64(p)
    for r in range(n_rows):
        i = int(pair_i[r])
        j = int(pair_j[r])
        bij = (1 << i) | (1 << j)
        sel = (masks & bij) == bij
        if not sel.any():
            continue
        msel = masks[sel]
        vals = table[msel ^ bij]
        par = (np.bitwise_count(msel & ((1 << i) - 1))
               + np.bitwise_count(msel & ((1 << j) - 1))) & 1
        neg = np.where(vals == np.uint64(0), np.uint64(0), pp - vals)
        out[r, sel] = np.where(par.astype(bool), vals, neg)
    return out
