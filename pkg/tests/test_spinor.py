"""Tests for Pfaffian coordinates and their derivatives.

The independent oracle for sub-Pfaffians is the perfect-matching sum
with the inversion-count sign.  Derivatives are checked against exact
finite differences, which are exact here because each coordinate is
multilinear in the independent entries u[i, j].
"""

import itertools

import numpy as np
import pytest

from spinor_secant import exact, spinor

P = exact.DEFAULT_PRIME


def pfaffian_matchings(full, rows, p):
    """Sum over perfect matchings of the index set `rows`.

    Sign of a matching {(a1,b1),...,(am,bm)} with a_t < b_t and
    a1 < a2 < ...: parity of the inversion count of the word
    (a1 b1 a2 b2 ...) as a permutation of the sorted index set.
    """
    rows = list(rows)
    if len(rows) % 2:
        return 0
    if not rows:
        return 1

    def matchings(elems):
        if not elems:
            yield []
            return
        first = elems[0]
        for j in range(1, len(elems)):
            partner = elems[j]
            rest = elems[1:j] + elems[j + 1:]
            for rest_match in matchings(rest):
                yield [(first, partner)] + rest_match

    total = 0
    for match in matchings(rows):
        word = [x for pair in match for x in pair]
        inversions = sum(
            1
            for a, b in itertools.combinations(range(len(word)), 2)
            if word[a] > word[b]
        )
        term = 1
        for a, b in match:
            term = term * int(full[a, b]) % p
        total += term if inversions % 2 == 0 else -term
    return total % p


def test_pair_index_enumeration():
    h = 6
    idx = 0
    for i in range(h):
        for j in range(i + 1, h):
            assert spinor.pair_index(h, i, j) == idx
            idx += 1
    assert idx == spinor.n_pairs(h)
    ii, jj = spinor.pair_arrays(h)
    assert len(ii) == spinor.n_pairs(h)
    for t, (a, b) in enumerate(zip(ii, jj)):
        assert spinor.pair_index(h, int(a), int(b)) == t


def test_even_subset_order():
    masks = spinor.enumerate_even_subsets(4)
    assert masks[0] == 0
    cards = [int(m).bit_count() for m in masks]
    assert cards == sorted(cards)
    assert len(masks) == 2 ** 3
    # lexicographic on sorted tuples within a cardinality class
    for c in set(cards):
        block = [int(m) for m in masks if int(m).bit_count() == c]
        subsets = [tuple(i for i in range(4) if m >> i & 1) for m in block]
        assert subsets == sorted(subsets)


def test_even_subset_count_matches_ambient():
    for h in range(2, 10):
        assert len(spinor.enumerate_even_subsets(h)) == 2 ** (h - 1)


def test_pfaffian_small_cases():
    two = spinor.SkewMatrix.from_upper(2, [5], P)
    assert spinor.pfaffian(two, P) == 5
    odd = spinor.SkewMatrix.random(3, np.random.default_rng(0), P)
    assert spinor.pfaffian(odd, P) == 0
    # 4x4 closed form: u01 u23 - u02 u13 + u03 u12
    four = spinor.SkewMatrix.from_upper(4, [2, 3, 5, 7, 11, 13], P)
    assert spinor.pfaffian(four, P) == (2 * 13 - 3 * 11 + 5 * 7) % P


def test_pfaffian_squares_to_determinant():
    rng = np.random.default_rng(42)
    for h in (2, 4, 6, 8):
        u = spinor.SkewMatrix.random(h, rng, P)
        pf = spinor.pfaffian(u, P)
        det = exact.determinant(u.full(P), P)
        assert pf * pf % P == det


def test_pfaffian_scaling_law():
    # Pf(lambda U) = lambda^(h/2) Pf(U)
    rng = np.random.default_rng(7)
    for h in (4, 6):
        u = spinor.SkewMatrix.random(h, rng, P)
        lam = 1234567
        lhs = spinor.pfaffian(u.scale(lam, P), P)
        rhs = pow(lam, h // 2, P) * spinor.pfaffian(u, P) % P
        assert lhs == rhs


def test_sub_pfaffian_matches_matching_sum():
    rng = np.random.default_rng(11)
    h = 7
    u = spinor.SkewMatrix.random(h, rng, P)
    full = u.full(P)
    for mask in spinor.enumerate_even_subsets(h):
        rows = [i for i in range(h) if int(mask) >> i & 1]
        if len(rows) > 6:
            continue
        assert spinor.sub_pfaffian(u, int(mask), P) == pfaffian_matchings(full, rows, P)


def test_spinor_coordinates_layout():
    rng = np.random.default_rng(13)
    h = 6
    u = spinor.SkewMatrix.random(h, rng, P)
    point = spinor.spinor_coordinates(u, P)
    masks = spinor.enumerate_even_subsets(h)
    assert point.coords.shape == (2 ** (h - 1),)
    assert point.coords[0] == 1  # empty subset
    for t, mask in enumerate(masks):
        assert point.coords[t] == spinor.sub_pfaffian(u, int(mask), P)
    # the last coordinate in canonical order is the full Pfaffian
    assert point.coords[-1] == spinor.pfaffian(u, P)


def test_partial_derivative_by_finite_difference():
    """d Pf_K / d u_ij via a unit step: coordinates are multilinear."""
    rng = np.random.default_rng(17)
    h = 6
    u = spinor.SkewMatrix.random(h, rng, P)
    masks = spinor.enumerate_even_subsets(h)
    for _ in range(40):
        i, j = sorted(int(x) for x in rng.choice(h, size=2, replace=False))
        mask = int(masks[rng.integers(0, len(masks))])
        bumped_upper = u.upper.copy()
        t = spinor.pair_index(h, i, j)
        bumped_upper[t] = np.uint64((int(bumped_upper[t]) + 1) % P)
        bumped = spinor.SkewMatrix(h, bumped_upper)
        diff = (spinor.sub_pfaffian(bumped, mask, P)
                - spinor.sub_pfaffian(u, mask, P)) % P
        assert spinor.pfaffian_partial(u, mask, i, j, P) == diff


def test_partial_derivative_outside_support_is_zero():
    rng = np.random.default_rng(19)
    u = spinor.SkewMatrix.random(5, rng, P)
    mask = 0b0011  # {0, 1}
    assert spinor.pfaffian_partial(u, mask, 2, 3, P) == 0
    assert spinor.pfaffian_partial(u, mask, 0, 2, P) == 0
    assert spinor.pfaffian_partial(u, mask, 0, 1, P) == 1


def test_partial_rejects_bad_pair():
    u = spinor.SkewMatrix.random(4, np.random.default_rng(0), P)
    with pytest.raises(spinor.BadIndexError):
        spinor.pfaffian_partial(u, 0b1111, 2, 2, P)
    with pytest.raises(spinor.BadIndexError):
        spinor.pfaffian_partial(u, 0b1111, 3, 1, P)
    with pytest.raises(spinor.BadIndexError):
        spinor.sub_pfaffian(u, 1 << 4, P)


def test_jacobian_matches_partials():
    rng = np.random.default_rng(23)
    for h in (4, 5, 6, 7):
        u = spinor.SkewMatrix.random(h, rng, P)
        jac = spinor.jacobian(u, P)
        masks = spinor.enumerate_even_subsets(h)
        ii, jj = spinor.pair_arrays(h)
        assert jac.shape == (spinor.n_pairs(h), len(masks))
        for t in range(spinor.n_pairs(h)):
            for c, mask in enumerate(masks):
                want = spinor.pfaffian_partial(u, int(mask), int(ii[t]),
                                               int(jj[t]), P)
                assert jac[t, c] == want


def test_jacobian_restriction_matches_full():
    rng = np.random.default_rng(27)
    h = 6
    u = spinor.SkewMatrix.random(h, rng, P)
    full_jac = spinor.jacobian(u, P)
    masks = spinor.enumerate_even_subsets(h)
    pick_masks = [int(masks[3]), int(masks[10]), int(masks[17])]
    pick_pairs = [(0, 3), (2, 5)]
    small = spinor.jacobian(u, P, masks=pick_masks, pairs=pick_pairs)
    assert small.shape == (2, 3)
    for r, (i, j) in enumerate(pick_pairs):
        t = spinor.pair_index(h, i, j)
        for c, m in enumerate(pick_masks):
            col = list(masks).index(m)
            assert small[r, c] == full_jac[t, col]


def test_coordinates_and_jacobian_consistent():
    rng = np.random.default_rng(29)
    u = spinor.SkewMatrix.random(7, rng, P)
    coords, jac = spinor.coordinates_and_jacobian(u, P)
    assert np.array_equal(coords, spinor.spinor_coordinates(u, P).coords)
    assert np.array_equal(jac, spinor.jacobian(u, P))


def test_from_full_requires_skew():
    u = spinor.SkewMatrix.random(4, np.random.default_rng(1), P)
    good = u.full(P)
    round_trip = spinor.SkewMatrix.from_full(good, P)
    assert np.array_equal(round_trip.upper, u.upper)
    bad = good.copy()
    bad[0, 1] = np.uint64((int(bad[0, 1]) + 1) % P)
    with pytest.raises(ValueError):
        spinor.SkewMatrix.from_full(bad, P)


def test_entry_accessor():
    u = spinor.SkewMatrix.from_upper(3, [1, 2, 3], P)
    assert u.entry(0, 1, P) == 1
    assert u.entry(1, 0, P) == P - 1
    assert u.entry(2, 2, P) == 0
    assert u.entry(1, 2, P) == 3


def test_size_limits():
    with pytest.raises(spinor.SizeOutOfRangeError):
        spinor.SkewMatrix.zero(0)
    with pytest.raises(spinor.SizeOutOfRangeError):
        spinor.SkewMatrix.zero(spinor.MAX_H + 1)
    spinor.SkewMatrix.zero(1)  # a single row is allowed


def test_big_prime_path_agrees_on_small_entries():
    # entries small enough that nothing wraps at either modulus: the
    # lifted coordinates must be identical integers
    rng = np.random.default_rng(31)
    h = 6
    flat = rng.integers(0, 100, size=spinor.n_pairs(h), dtype=np.uint64)
    p_other = 2305843009213693967
    assert not exact.is_fast_prime(p_other)
    u1 = spinor.SkewMatrix.from_upper(h, flat, P)
    u2 = spinor.SkewMatrix.from_upper(h, flat, p_other)
    c1 = spinor.spinor_coordinates(u1, P).coords
    c2 = spinor.spinor_coordinates(u2, p_other).coords
    lift1 = exact.symmetric_lift(c1[None, :], P)
    lift2 = exact.symmetric_lift(c2[None, :], p_other)
    assert np.array_equal(lift1, lift2)
