"""The split orthogonal group, its Lie algebra, and the deterministic
defectivity certificates.

The quadratic form is represented by B = [[0, I/2], [I/2, 0]] in h + h
block coordinates, so a group element g satisfies g^T B g = B and an
algebra element H satisfies H^T B = -B H, equivalently H11^T = -H22 with
H12, H21 skew.  The group acts on the skew chart by

    g(U) = (g11^T + U g12^T)^(-1) (g21^T + U g22^T),

and the first-order displacement of U along H is the skew matrix

    A = H21^T + U H22^T - H11^T U - U H12^T U.

Stacking the displacements at a triple of chart points over the algebra
basis gives the differential of the orbit map at the identity; full
column rank 3p means the orbit of the triple is open, i.e. the three
points are general.  That observation turns random tangent ranks into
exact dimensions: the certificates below are deterministic computations
whose success pins down the defective secant dimensions.

Rank conventions: a rank over F_p bounds the rational rank from below,
and a full-row or full-column rank mod p forces equality.  The one
certificate whose key rank is neither (s7, 59 of 66 rows and 64
columns) samples points small enough that the tangent stack carries
exact integer entries and recomputes that rank with fraction-free
elimination over the integers, so its verdict is a statement about the
rationals, not about one prime.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from . import exact
from . import spinor
from . import terracini
from .spinor import SkewMatrix

__all__ = [
    "ChartSingularError",
    "OddSizeError",
    "HypothesisFailed",
    "UnluckySampleError",
    "FormMatrix",
    "OrthogonalElement",
    "AlgebraElement",
    "StandardTriple",
    "CertificateVerdict",
    "block_diagonal_skew",
    "j_matrix",
    "k6_matrix",
    "so_basis",
    "act_on_chart",
    "compose",
    "element_inverse",
    "random_orthogonal",
    "first_order_displacement",
    "triple_differential_rank",
    "orbit_kernel_dimension",
    "curve_monomial_profile",
    "rnc_certificate",
    "s7_certificate",
    "base12_certificate",
    "stability_matrix",
    "stability_rank_check",
    "orbit_certificate",
    "stability_certificate",
    "upgrade_report",
]


class ChartSingularError(ValueError):
    """The group element moves the point out of the skew chart."""


class OddSizeError(ValueError):
    """Raised by operations that need an even matrix size."""


class HypothesisFailed(Exception):
    """A certificate hypothesis does not hold; .condition names it."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__("(%s) %s" % (condition, message))


class UnluckySampleError(Exception):
    """A randomized certificate drew a degenerate sample; retry with a
    different seed (the failure probability is on the order of deg/p)."""


def _half(p: int) -> int:
    p = int(p)
    if p % 2 == 0:
        raise ValueError("modulus must be odd, got %d" % p)
    return (p + 1) // 2


@dataclass(frozen=True)
class FormMatrix:
    """The symmetric form B = [[0, I/2], [I/2, 0]] on 2h coordinates."""

    h: int

    def dense(self, p: int = exact.DEFAULT_PRIME) -> np.ndarray:
        h = self.h
        out = np.zeros((2 * h, 2 * h), dtype=np.uint64)
        half = np.uint64(_half(p))
        for a in range(h):
            out[a, h + a] = half
            out[h + a, a] = half
        return out


@dataclass(frozen=True, eq=False)
class OrthogonalElement:
    """A 2h x 2h matrix over F_p satisfying g^T B g = B."""

    h: int
    matrix: np.ndarray

    @property
    def g11(self) -> np.ndarray:
        return self.matrix[:self.h, :self.h]

    @property
    def g12(self) -> np.ndarray:
        return self.matrix[:self.h, self.h:]

    @property
    def g21(self) -> np.ndarray:
        return self.matrix[self.h:, :self.h]

    @property
    def g22(self) -> np.ndarray:
        return self.matrix[self.h:, self.h:]

    @classmethod
    def identity(cls, h: int) -> "OrthogonalElement":
        return cls(h, np.eye(2 * h, dtype=np.uint64))

    def is_orthogonal(self, p: int = exact.DEFAULT_PRIME) -> bool:
        b = FormMatrix(self.h).dense(p)
        lhs = exact.mat_mul(self.matrix.T, exact.mat_mul(b, self.matrix, p), p)
        return np.array_equal(lhs, b)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A 2h x 2h matrix over F_p satisfying H^T B = -B H."""

    h: int
    matrix: np.ndarray

    @property
    def h11(self) -> np.ndarray:
        return self.matrix[:self.h, :self.h]

    @property
    def h12(self) -> np.ndarray:
        return self.matrix[:self.h, self.h:]

    @property
    def h21(self) -> np.ndarray:
        return self.matrix[self.h:, :self.h]

    @property
    def h22(self) -> np.ndarray:
        return self.matrix[self.h:, self.h:]

    def satisfies_algebra(self, p: int = exact.DEFAULT_PRIME) -> bool:
        b = FormMatrix(self.h).dense(p)
        lhs = exact.mat_mul(self.matrix.T, b, p)
        rhs = exact.mat_sub(np.zeros_like(b), exact.mat_mul(b, self.matrix, p), p)
        return np.array_equal(lhs, rhs)


def block_diagonal_skew(values, p: int = exact.DEFAULT_PRIME) -> SkewMatrix:
    """Skew matrix with 2x2 blocks [[0, v], [-v, 0]] down the diagonal."""
    values = [int(v) for v in values]
    h = 2 * len(values)
    full = np.zeros((h, h), dtype=object)
    for i, v in enumerate(values):
        full[2 * i, 2 * i + 1] = v
        full[2 * i + 1, 2 * i] = -v
    return SkewMatrix.from_full(full, p)


def j_matrix(h: int, p: int = exact.DEFAULT_PRIME) -> SkewMatrix:
    """J_m: m = h/2 diagonal blocks [[0, 1], [-1, 0]]."""
    if h % 2:
        raise OddSizeError("j_matrix needs even h, got %d" % h)
    return block_diagonal_skew([1] * (h // 2), p)


def k6_matrix(p: int = exact.DEFAULT_PRIME) -> SkewMatrix:
    """K_6: six diagonal blocks [[0, t], [-t, 0]], t = 2..7 ascending."""
    return block_diagonal_skew(range(2, 8), p)


@dataclass(frozen=True, eq=False)
class StandardTriple:
    """The distinguished chart triples used by the certificates."""

    h: int
    u0: SkewMatrix
    u1: SkewMatrix
    u2: SkewMatrix

    @classmethod
    def standard(cls, h: int, p: int = exact.DEFAULT_PRIME) -> "StandardTriple":
        """(O_h, J_m, -J_m) for even h."""
        if h % 2:
            raise OddSizeError("standard triple needs even h, got %d" % h)
        j = j_matrix(h, p)
        return cls(h, SkewMatrix.zero(h), j, j.scale(int(p) - 1, p))

    @classmethod
    def base12(cls, p: int = exact.DEFAULT_PRIME) -> "StandardTriple":
        """(O_12, J_6, K_6), the deterministic h = 12 witness."""
        return cls(12, SkewMatrix.zero(12), j_matrix(12, p), k6_matrix(p))


def so_basis(h: int, p: int = exact.DEFAULT_PRIME) -> list[AlgebraElement]:
    """Basis of the orthogonal Lie algebra, h(2h - 1) elements.

    Order: the h^2 elements with H11 = E_ab (H22 = -E_ba) for a, b row
    major; then H12 = E_ab - E_ba over pairs a < b; then H21 likewise.
    """
    h = int(h)
    if h < 1:
        raise ValueError("h must be positive, got %d" % h)
    p = int(p)
    neg = np.uint64(p - 1)
    one = np.uint64(1)
    out = []
    for a in range(h):
        for b in range(h):
            m = np.zeros((2 * h, 2 * h), dtype=np.uint64)
            m[a, b] = one
            m[h + b, h + a] = neg
            out.append(AlgebraElement(h, m))
    for block_off in (h, 0):
        # block_off = h: H12 (rows 0..h-1, cols h..2h-1); 0: H21
        for a in range(h):
            for b in range(a + 1, h):
                m = np.zeros((2 * h, 2 * h), dtype=np.uint64)
                if block_off == h:
                    m[a, h + b] = one
                    m[b, h + a] = neg
                else:
                    m[h + a, b] = one
                    m[h + b, a] = neg
                out.append(AlgebraElement(h, m))
    return out


def act_on_chart(g: OrthogonalElement, u: SkewMatrix,
                 p: int = exact.DEFAULT_PRIME) -> SkewMatrix:
    """Chart coordinate of g applied to [I_h | U].

    Raises ChartSingularError when g11^T + U g12^T is singular (the
    image leaves the chart).  The result is skew whenever g satisfies
    the orthogonality condition; that is re-checked on construction.
    """
    if g.h != u.h:
        raise ValueError("size mismatch: g has h=%d, U has h=%d" % (g.h, u.h))
    ufull = u.full(p)
    m1 = exact.mat_add(g.g11.T, exact.mat_mul(ufull, g.g12.T, p), p)
    m2 = exact.mat_add(g.g21.T, exact.mat_mul(ufull, g.g22.T, p), p)
    try:
        m1_inv = exact.inverse(m1, p)
    except exact.SingularMatrixError as e:
        raise ChartSingularError(
            "group element leaves the chart at this point") from e
    return SkewMatrix.from_full(exact.mat_mul(m1_inv, m2, p), p)


def compose(g: OrthogonalElement, g2: OrthogonalElement,
            p: int = exact.DEFAULT_PRIME) -> OrthogonalElement:
    if g.h != g2.h:
        raise ValueError("size mismatch")
    return OrthogonalElement(g.h, exact.mat_mul(g.matrix, g2.matrix, p))


def element_inverse(g: OrthogonalElement,
                    p: int = exact.DEFAULT_PRIME) -> OrthogonalElement:
    return OrthogonalElement(g.h, exact.inverse(g.matrix, p))


def random_orthogonal(h: int, rng: np.random.Generator,
                      p: int = exact.DEFAULT_PRIME,
                      max_tries: int = 32) -> OrthogonalElement:
    """Cayley transform of a random algebra element.

    g = (I - N/2)(I + N/2)^(-1) satisfies g^T B g = B exactly whenever
    I + N/2 is invertible; the rare singular draws are retried.
    """
    basis = so_basis(h, p)
    eye = np.eye(2 * h, dtype=object)
    half = _half(p)
    for _ in range(max_tries):
        coeffs = rng.integers(0, int(p), size=len(basis), dtype=np.uint64)
        n = np.zeros((2 * h, 2 * h), dtype=object)
        for c, elem in zip(coeffs, basis):
            if c:
                n += int(c) * elem.matrix.astype(object)
        nh = (n * half) % int(p)
        try:
            inv = exact.inverse((eye + nh) % int(p), p)
        except exact.SingularMatrixError:
            continue
        gmat = exact.mat_mul((eye - nh) % int(p), inv, p)
        return OrthogonalElement(h, gmat)
    raise RuntimeError("no invertible Cayley denominator in %d tries"
                       % max_tries)


def _displacement_full(hmat: np.ndarray, ufull: np.ndarray,
                       p: int) -> np.ndarray:
    h = ufull.shape[0]
    h11 = hmat[:h, :h]
    h12 = hmat[:h, h:]
    h21 = hmat[h:, :h]
    h22 = hmat[h:, h:]
    t1 = exact.mat_add(h21.T, exact.mat_mul(ufull, h22.T, p), p)
    t2 = exact.mat_add(
        exact.mat_mul(h11.T, ufull, p),
        exact.mat_mul(exact.mat_mul(ufull, h12.T, p), ufull, p), p)
    return exact.mat_sub(t1, t2, p)


def first_order_displacement(h_elem: AlgebraElement, u: SkewMatrix,
                             p: int = exact.DEFAULT_PRIME) -> SkewMatrix:
    """Derivative of the chart action at the identity along H.

    A = H21^T + U H22^T - H11^T U - U H12^T U, the first-order term of
    act_on_chart(I + eps H, U) in eps.  Skewness of the result is
    checked on construction (it holds for every algebra element).
    """
    if h_elem.h != u.h:
        raise ValueError("size mismatch: H has h=%d, U has h=%d"
                         % (h_elem.h, u.h))
    return SkewMatrix.from_full(
        _displacement_full(h_elem.matrix, u.full(p), p), p)


def triple_differential_rank(h: int, u1: SkewMatrix, u2: SkewMatrix,
                             u3: SkewMatrix,
                             p: int = exact.DEFAULT_PRIME) -> int:
    """Rank of the orbit-map differential at the identity.

    Rows are indexed by so_basis(h) (h(2h-1) rows), columns by the 3p
    strict upper entries of the three displacements.  Rank 3p means the
    orbit of (U1, U2, U3) is open, so the triple is general.
    """
    for u in (u1, u2, u3):
        if u.h != h:
            raise ValueError("triple has mixed sizes")
    pi, pj = spinor.pair_arrays(h)
    fulls = [u.full(p) for u in (u1, u2, u3)]
    basis = so_basis(h, p)
    rows = np.empty((len(basis), 3 * spinor.n_pairs(h)), dtype=np.uint64)
    for r, elem in enumerate(basis):
        parts = [
            _displacement_full(elem.matrix, uf, p)[pi, pj] for uf in fulls
        ]
        rows[r] = np.concatenate(parts)
    return exact.rank(rows, p)


def orbit_kernel_dimension(h: int, p: int = exact.DEFAULT_PRIME) -> int:
    """Kernel dimension of the triple differential at (O, J_m, -J_m).

    Computed two independent ways that must agree: as
    h(2h-1) - triple_differential_rank, and as the kernel dimension of
    the linear map A -> J_m A - (J_m A)^T on h x h matrices (the
    H21 = H12 = 0 reduction identifies the kernel with
    {A : J_m A symmetric}).  The common value is h(h+1)/2.
    """
    if h % 2:
        raise OddSizeError("orbit_kernel_dimension needs even h, got %d" % h)
    tri = StandardTriple.standard(h, p)
    r3 = triple_differential_rank(h, tri.u0, tri.u1, tri.u2, p)
    via_orbit = h * (2 * h - 1) - r3

    jfull = tri.u1.full(p)
    # columns of the map indexed by E_ab: J E_ab has column b equal to
    # column a of J and zeros elsewhere
    lin = np.zeros((h * h, h * h), dtype=np.uint64)
    for a in range(h):
        for b in range(h):
            x = np.zeros((h, h), dtype=np.uint64)
            x[:, b] = jfull[:, a]
            m = exact.mat_sub(x, x.T, p)
            lin[a * h + b] = m.reshape(-1)
    via_map = h * h - exact.rank(lin, p)
    if via_orbit != via_map:
        raise ArithmeticError(
            "kernel dimension mismatch: orbit route %d, map route %d"
            % (via_orbit, via_map))
    return via_orbit


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class CertificateVerdict:
    """Outcome of one deterministic certificate."""

    name: str
    verdict: str
    passed: bool
    details: dict = field(default_factory=dict)
    notes: str = ""
    dimension: int | None = None
    defect: int | None = None


def curve_monomial_profile(h: int, p: int = exact.DEFAULT_PRIME) -> dict:
    """Coordinate profile of the curve C(t) = [I_h | t J_m].

    Interpolates every spinor coordinate from m+2 sample values of t
    (enough for degree m+1, one above the claimed bound) and reports
    whether each is a monomial c t^d with d <= m, the largest degree
    seen, and the rank of the coordinate vectors at m+1 sample points.
    """
    if h % 2:
        raise OddSizeError("the curve construction needs even h, got %d" % h)
    m = h // 2
    p = int(p)
    if p <= m + 2:
        raise ValueError("modulus too small for %d interpolation nodes"
                         % (m + 2))
    j = j_matrix(h, p)
    ts = list(range(1, m + 3))
    values = np.vstack([
        spinor.spinor_coordinates(j.scale(t, p), p).coords for t in ts
    ])
    vand = np.array([[pow(t, d, p) for d in range(m + 2)] for t in ts],
                    dtype=np.uint64)
    coeffs = exact.mat_mul(exact.inverse(vand, p), values, p)
    nonzero = coeffs != np.uint64(0)
    monomial = bool(nonzero.sum(axis=0).max() <= 1) \
        and not nonzero[m + 1].any()
    degrees = np.nonzero(nonzero.any(axis=1))[0]
    max_degree = int(degrees.max()) if degrees.size else 0
    span_rank = exact.rank(values[:m + 1], p)
    return {
        "monomial": monomial,
        "max_degree": max_degree,
        "span_rank": span_rank,
    }


def rnc_certificate(h: int, k: int,
                    p: int = exact.DEFAULT_PRIME) -> CertificateVerdict:
    """Defectivity of the k-th secant via a rational normal curve.

    The curve C(t) = [I_h | t J_m], m = h/2, is checked to be a degree-m
    rational normal curve in the spinor embedding whose points are
    general; k tangent lines of such a curve span m+1 < 2k homogeneous
    dimensions, which forces the k tangent spaces to overlap and yields
    defect at least 2k - m - 1.  Conditions, in order:

      (a) every coordinate of C(t) is a monomial c t^d with d <= m;
      (b) coordinate vectors at m+1 values of t have rank m+1;
      (c) the expected dimension kp + k - 1 fits in the ambient space;
      (d) m <= 2k - 2, so the overlap count 2k - m - 1 is positive;
      (e) the k curve points are general.  This is certifiable exactly
          for k = 3, by openness of the orbit of (C(0), C(1), C(-1));
          any other k fails here rather than risk an unsound verdict.

    Raises HypothesisFailed naming the first failing condition.
    """
    if h % 2:
        raise OddSizeError("rnc_certificate needs even h, got %d" % h)
    k = int(k)
    if k < 2:
        raise ValueError("k must be at least 2, got %d" % k)
    m = h // 2
    p_dim = spinor.n_pairs(h)
    ambient = (1 << (h - 1)) - 1

    profile = curve_monomial_profile(h, p)
    if not profile["monomial"]:
        raise HypothesisFailed(
            "a", "some coordinate of C(t) is not a monomial of degree <= %d"
            % m)
    if profile["span_rank"] != m + 1:
        raise HypothesisFailed(
            "b", "curve spans rank %d, expected %d"
            % (profile["span_rank"], m + 1))
    if k * p_dim + k - 1 > ambient:
        raise HypothesisFailed(
            "c", "expected dimension %d exceeds ambient %d"
            % (k * p_dim + k - 1, ambient))
    if m > 2 * k - 2:
        raise HypothesisFailed(
            "d", "m=%d > 2k-2=%d: the curve does not force an overlap"
            % (m, 2 * k - 2))
    details = {
        "h": h,
        "k": k,
        "m": m,
        "curve_span_rank": profile["span_rank"],
        "max_coordinate_degree": profile["max_degree"],
    }
    if k == 3:
        tri = StandardTriple.standard(h, p)
        r3 = triple_differential_rank(h, tri.u0, tri.u1, tri.u2, p)
        if r3 != 3 * p_dim:
            raise HypothesisFailed(
                "e", "triple differential rank %d < %d: curve points not "
                "certified general" % (r3, 3 * p_dim))
        details["triple_differential_rank"] = r3
    else:
        raise HypothesisFailed(
            "e", "generality of %d curve points is only certifiable for k=3"
            % k)
    defect_at_least = 2 * k - m - 1
    expected = terracini.expected_dimension(h, k)
    details["defect_at_least"] = defect_at_least
    details["dimension_upper_bound"] = expected - defect_at_least
    return CertificateVerdict(
        name="rnc",
        verdict="DEFECTIVE_CERTIFIED",
        passed=True,
        details=details,
    )


# Entry bound for the s7 sample.  A 6 x 6 sub-Pfaffian is a sum of 15
# triple products, so every tangent-stack entry stays below 15 * 2^48;
# any modulus above that leaves the integer values unreduced.
_S7_ENTRY_BOUND = 1 << 16
_S7_VALUE_BOUND = 15 * _S7_ENTRY_BOUND ** 3


def s7_certificate(seed: int = 0,
                   p: int = exact.DEFAULT_PRIME) -> CertificateVerdict:
    """Exact dimension 58 (defect 5) for the third secant at h = 7.

    With U1 = O_7 and U2, U3 drawn from the seed: (a) the triple
    differential rank must be 63 = 3p, the maximum, so the orbit of the
    sampled triple is open and the triple is general; (b) the stacked
    tangent rank at the triple is 59.

    The sample entries stay below 2^16, so every entry of the 66 x 64
    tangent stack is the exact integer value of the sub-Pfaffian (no
    wrap at the default modulus); step (b) then recomputes the rank by
    fraction-free elimination over the integers, making it the true
    rational rank.  By (a) the triple is general, so that rank equals
    the generic rank and the secant dimension is 58 exactly, not just
    bounded.

    Raises UnluckySampleError when (a) fails for the drawn sample.
    """
    if int(p) <= _S7_VALUE_BOUND:
        raise ValueError(
            "modulus below %d would wrap the integer tangent entries"
            % _S7_VALUE_BOUND)
    rng = np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(entropy=int(seed), spawn_key=(101, 7))))
    u1 = SkewMatrix.zero(7)
    u2 = SkewMatrix(7, rng.integers(0, _S7_ENTRY_BOUND,
                                    size=spinor.n_pairs(7), dtype=np.uint64))
    u3 = SkewMatrix(7, rng.integers(0, _S7_ENTRY_BOUND,
                                    size=spinor.n_pairs(7), dtype=np.uint64))
    r3 = triple_differential_rank(7, u1, u2, u3, p)
    if r3 != 63:
        raise UnluckySampleError(
            "triple differential rank %d < 63; redraw with a new seed" % r3)
    stack = np.vstack([terracini.tangent_block(u, p) for u in (u1, u2, u3)])
    rank_p = exact.rank(stack, p)
    # negative sub-Pfaffian values sit near p; the symmetric lift
    # recovers the exact integers because all magnitudes are < p/2
    rank_q = exact.rank_rational(exact.symmetric_lift(stack, p))
    if rank_q != 59:
        raise ArithmeticError(
            "tangent stack has rational rank %d, certified value is 59"
            % rank_q)
    expected = terracini.expected_dimension(7, 3)
    dimension = rank_q - 1
    return CertificateVerdict(
        name="s7",
        verdict="DEFECTIVE_CERTIFIED",
        passed=True,
        details={
            "triple_differential_rank": r3,
            "tangent_rank": rank_q,
            "tangent_rank_mod_p": rank_p,
            "rows": stack.shape[0],
            "columns": stack.shape[1],
            "seed": int(seed),
        },
        dimension=dimension,
        defect=expected - dimension,
    )


def base12_certificate(p: int = exact.DEFAULT_PRIME) -> CertificateVerdict:
    """Independence of the three tangent spaces at (O_12, J_6, K_6).

    The 201 x 2048 stacked tangent matrix has full row rank 201 =
    3(p+1); full row rank mod p forces the same over the rationals, so
    the verdict needs no randomness and no rational elimination.  This
    is the induction base for non-defectivity of the third secant at
    every h >= 12.
    """
    tri = StandardTriple.base12(p)
    base_rank = exact.rank(terracini.tangent_block(tri.u0, p), p)
    stack = np.vstack([
        terracini.tangent_block(u, p) for u in (tri.u0, tri.u1, tri.u2)
    ])
    rank = exact.rank(stack, p)
    passed = rank == stack.shape[0] and base_rank == 67
    return CertificateVerdict(
        name="base12",
        verdict="CERTIFIED" if passed else "FAILED",
        passed=passed,
        details={
            "rank": rank,
            "rows": stack.shape[0],
            "columns": stack.shape[1],
            "base_point_rank": base_rank,
        },
    )


def _padded_point(base: SkewMatrix, s: int, p: int) -> SkewMatrix:
    """Embed a 12 x 12 chart point into size s+1 with zero padding."""
    full = np.zeros((s + 1, s + 1), dtype=np.uint64)
    full[:12, :12] = base.full(p)
    return SkewMatrix.from_full(full, p)


def stability_matrix(s: int, p: int = exact.DEFAULT_PRIME) -> np.ndarray:
    """The 2s x C(s,3) matrix of the size-stability rank condition.

    Under the embedding [I_s | U] -> [I_{s+1} | U padded], the new
    chart variables are the last-column entries y_i = u[i, s].  Each
    block is the Jacobian of the size-4 sub-Pfaffians that involve the
    new index, with respect to the y_i, evaluated at the padded J block
    point and at the padded K block point.
    """
    s = int(s)
    if s < 12:
        raise ValueError("stability check starts at s=12, got %d" % s)
    masks = [
        (1 << a) | (1 << b) | (1 << c) | (1 << s)
        for a, b, c in itertools.combinations(range(s), 3)
    ]
    pairs = [(i, s) for i in range(s)]
    blocks = []
    for base in (j_matrix(12, p), k6_matrix(p)):
        u = _padded_point(base, s, p)
        blocks.append(spinor.jacobian(u, p, masks=masks, pairs=pairs))
    return np.vstack(blocks)


def stability_rank_check(s: int, p: int = exact.DEFAULT_PRIME) -> bool:
    """Whether the stacked stability matrix has full row rank 2s.

    Full row rank mod p is exact (it forces rational full rank), and it
    is what propagates tangent-space independence from size s to s+1.
    """
    mat = stability_matrix(s, p)
    return exact.rank(mat, p) == 2 * s


def orbit_certificate(h_values=(2, 4, 6, 8),
                      p: int = exact.DEFAULT_PRIME) -> CertificateVerdict:
    """orbit_kernel_dimension == h(h+1)/2 across the given sizes."""
    details = {}
    ok = True
    for h in h_values:
        got = orbit_kernel_dimension(h, p)
        want = h * (h + 1) // 2
        details["h=%d" % h] = got
        details["h=%d_expected" % h] = want
        ok = ok and got == want
    return CertificateVerdict(
        name="orbit",
        verdict="CERTIFIED" if ok else "FAILED",
        passed=ok,
        details=details,
    )


def stability_certificate(s_values=(12, 13, 14),
                          p: int = exact.DEFAULT_PRIME) -> CertificateVerdict:
    """stability_rank_check over a range of sizes, one verdict."""
    details = {}
    ok = True
    for s in s_values:
        mat = stability_matrix(s, p)
        rank = exact.rank(mat, p)
        details["s=%d_rank" % s] = rank
        details["s=%d_required" % s] = 2 * s
        ok = ok and rank == 2 * s
    return CertificateVerdict(
        name="stability",
        verdict="CERTIFIED" if ok else "FAILED",
        passed=ok,
        details=details,
    )


def upgrade_report(report: "terracini.SecantReport") -> "terracini.SecantReport":
    """Attach a deterministic certificate to an estimate when one exists.

    (7,3): the s7 certificate pins dimension 58 exactly.  (8,3): the
    rnc certificate bounds the dimension above by 85; when the estimate
    reaches 85 the two bounds meet.  (8,4): defectivity follows from
    the (8,3) certificate, since the dimension can grow by at most p+1
    when one more point is added; the exact value 111 still comes from
    the rank estimate, which the verdict notes.  Estimates that no
    certificate covers are returned unchanged, as are reports whose
    certificate run fails (unlucky sample, small modulus).
    """
    key = (report.h, report.k)
    if key == (7, 3):
        try:
            cert = s7_certificate(seed=report.seed, p=report.prime)
        except (UnluckySampleError, ValueError):
            return report
        return replace(
            report,
            dimension=cert.dimension,
            defect_lower_bound=report.expected - cert.dimension,
            status=terracini.SecantStatus.CERTIFIED_DEFECTIVE,
            certificate=cert,
        )
    if key == (8, 3):
        try:
            cert = rnc_certificate(8, 3, p=report.prime)
        except (HypothesisFailed, ValueError):
            return report
        if report.dimension == cert.details["dimension_upper_bound"]:
            return replace(
                report,
                status=terracini.SecantStatus.CERTIFIED_DEFECTIVE,
                certificate=cert,
            )
        return replace(report, certificate=cert)
    if key == (8, 4):
        try:
            cert = rnc_certificate(8, 3, p=report.prime)
        except (HypothesisFailed, ValueError):
            return report
        if report.defect_lower_bound >= 1:
            cert = replace(
                cert,
                name="rnc+monotone",
                notes="defectivity of (8,4) is inherited from the (8,3) "
                      "certificate: adding one point grows the dimension "
                      "by at most p+1=29, so dim <= 85+29 = 114 < 115. "
                      "The exact value 111 relies on the rank estimate.",
            )
            return replace(
                report,
                status=terracini.SecantStatus.CERTIFIED_DEFECTIVE,
                certificate=cert,
            )
        return report
    return report
