"""Wall divisors and their certificates for Hilbert-scheme-type lattices.

The ambient picture: the rank-23 lattice L_n (signature (3,20)) sits
inside the rank-24 unimodular extension as the orthogonal complement of a
primitive class v with v^2 = 2n - 2.  A numerical wall type is a pair
(square, divisibility) of a primitive negative class D in L_n; whether D
actually supports a wall is decided by rank-2 sublattice conditions on
the extension: either D has square -2, or v +- D has a short isotropic
part, or the saturated rank-2 lattice spanned by v and D contains one of
the certifying classes enumerated in `bm_wall_test`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import ceil, floor, gcd, isqrt

from . import _linalg as la
from .errors import InputError
from .lattice import (
    DiscriminantGroup,
    Embedding,
    IntegerLattice,
    LatticeVector,
    disc_class,
    discriminant_group,
    divisibility,
    saturation,
    standard_lattice,
)

__all__ = [
    "NContext",
    "make_context",
    "WallType",
    "WallCondition",
    "WallWitness",
    "RankTwoData",
    "isotropic_pair",
    "markman_wall_test",
    "hyperbolic_T",
    "bm_wall_test",
    "wall_test",
    "ht_bound_ok",
    "wall_type_exists",
    "enumerate_wall_types",
    "certified_wall_types",
    "OrbitInvariants",
    "eichler_invariants",
    "same_orbit",
    "eichler_transvection",
    "dual_ray",
]


@dataclass(frozen=True)
class NContext:
    """Fixed ambient data for one value of n."""

    n: int
    ambient: IntegerLattice  # L_n, rank 23
    mukai: IntegerLattice  # unimodular extension, rank 24
    v: LatticeVector  # distinguished class, v^2 = 2n-2
    embed: Embedding  # L_n -> extension, image = v-perp
    disc: DiscriminantGroup  # of L_n

    @property
    def delta(self) -> LatticeVector:
        """Generator of the rank-1 tail of L_n (square -(2n-2), div 2n-2)."""
        return self.ambient.basis_vector(self.ambient.rank - 1)


@functools.lru_cache(maxsize=None)
def make_context(n: int) -> NContext:
    """Build L_n inside its unimodular extension.

    Basis convention: the extension is ordered U, U, U, E8(-1), E8(-1), U
    with the distinguished hyperbolic plane (e, f) in the last two
    coordinates; v = e + (n-1) f, and L_n maps by the identity on the
    first 22 coordinates with its rank-1 generator going to e - (n-1) f.
    """
    if n < 2:
        raise InputError("context requires n >= 2")
    ambient = standard_lattice("Ln", n)
    mukai = standard_lattice("mukai")
    v = mukai.vector((0,) * 22 + (1, n - 1))
    cols = 23
    rows = []
    for i in range(24):
        row = [0] * cols
        if i < 22:
            row[i] = 1
        elif i == 22:
            row[22] = 1
        else:  # i == 23
            row[22] = -(n - 1)
        rows.append(tuple(row))
    emb = Embedding(source=ambient, target=mukai, matrix=tuple(rows))
    gv = la.mat_vec(mukai.gram, v.coords)
    for j in range(cols):
        if sum(gv[i] * emb.matrix[i][j] for i in range(24)) != 0:
            raise InputError("internal: ambient image is not orthogonal to v")
    if not emb.is_primitive():
        raise InputError("internal: ambient embedding is not primitive")
    return NContext(
        n=n,
        ambient=ambient,
        mukai=mukai,
        v=v,
        embed=emb,
        disc=discriminant_group(ambient),
    )


@dataclass(frozen=True)
class WallType:
    """Numerical type of a wall divisor: (square, divisibility)."""

    square: int
    div: int

    def __post_init__(self):
        if self.square >= 0 or self.square % 2:
            raise InputError("wall type square must be negative and even")
        if self.div < 1:
            raise InputError("wall type divisibility must be >= 1")

    @property
    def ray_square(self) -> Fraction:
        return Fraction(self.square, self.div * self.div)

    def sort_key(self):
        return (self.div, -self.square)


class WallCondition(Enum):
    MK_MINUS2 = "MK_minus2"
    MK_ISOTROPIC = "MK_isotropic"
    BM_ORTH_ROOT = "BM_orth_root"
    BM_ISOTROPIC = "BM_isotropic"
    BM_BOUNDED_ROOT = "BM_bounded_root"
    BM_SUM = "BM_sum_decomposition"


@dataclass(frozen=True)
class WallWitness:
    """A certifying class (or pair) together with the recheck data.

    `vectors` live in the same lattice as `against` (the distinguished
    class v, or its copy inside a rank-2 sublattice).  `pairing_data` is
    (w^2, (w, v)) for single-vector conditions and
    (w^2, t^2, (w, v), (t, v)) for the sum decomposition.
    """

    condition: WallCondition
    vectors: tuple[LatticeVector, ...]
    pairing_data: tuple[int, ...]
    against: LatticeVector

    def check(self) -> bool:
        """Re-verify the defining condition from scratch."""
        v = self.against
        c = self.condition
        if c in (WallCondition.MK_MINUS2, WallCondition.BM_ORTH_ROOT):
            (w,) = self.vectors
            return (
                w.norm() == -2
                and w.inner(v) == 0
                and self.pairing_data == (-2, 0)
            )
        if c in (WallCondition.MK_ISOTROPIC, WallCondition.BM_ISOTROPIC):
            (w,) = self.vectors
            p = w.inner(v)
            return (
                w.norm() == 0
                and p in (1, 2)
                and self.pairing_data == (0, p)
            )
        if c is WallCondition.BM_BOUNDED_ROOT:
            (w,) = self.vectors
            p = w.inner(v)
            return (
                w.norm() == -2
                and 0 < p
                and 2 * p <= v.norm()
                and self.pairing_data == (-2, p)
            )
        if c is WallCondition.BM_SUM:
            w, t = self.vectors
            pw, pt = w.inner(v), t.inner(v)
            return (
                tuple(a + b for a, b in zip(w.coords, t.coords)) == v.coords
                and w.norm() >= 0
                and t.norm() >= 0
                and pw > 0
                and pt > 0
                and self.pairing_data == (w.norm(), t.norm(), pw, pt)
            )
        raise InputError(f"unknown wall condition {c}")


def _as_vector(lattice: IntegerLattice, v) -> LatticeVector:
    if isinstance(v, LatticeVector):
        if v.lattice != lattice:
            raise InputError("vector belongs to a different lattice")
        return v
    return lattice.vector(v)


def isotropic_pair(ctx: NContext, D) -> tuple[LatticeVector, LatticeVector]:
    """Primitive isotropic parts of v + D and v - D (D of square 2 - 2n).

    Both are isotropic because (v +- D)^2 = v^2 + D^2 = 0; the returned
    classes pair positively with v.
    """
    D = _as_vector(ctx.ambient, D)
    if D.norm() != 2 - 2 * ctx.n:
        raise InputError("isotropic pair requires a class of square 2-2n")
    if not D.is_primitive():
        raise InputError("isotropic pair requires a primitive class")
    iD = ctx.embed.apply(D)
    out = []
    for sign in (1, -1):
        raw = tuple(a + sign * b for a, b in zip(ctx.v.coords, iD.coords))
        c = gcd(*raw)
        out.append(LatticeVector(ctx.mukai, tuple(x // c for x in raw)))
    return out[0], out[1]


def markman_wall_test(ctx: NContext, D) -> WallWitness | None:
    """Shortcut wall certificates that avoid rank-2 lattice work.

    Detects: square -2 classes (always walls), and square 2-2n classes
    with (n-1) | div whose isotropic partner pairs 1 or 2 with v.  A None
    result is *not* a proof that D supports no wall; run the rank-2 test.
    """
    D = _as_vector(ctx.ambient, D)
    if not D.is_primitive():
        raise InputError("wall tests take primitive classes")
    s = D.norm()
    if s >= 0:
        raise InputError("wall divisors have negative square")
    if s == -2:
        w = ctx.embed.apply(D)
        return WallWitness(
            WallCondition.MK_MINUS2, (w,), (-2, 0), against=ctx.v
        )
    if s == 2 - 2 * ctx.n and D.div() % (ctx.n - 1) == 0:
        for w in isotropic_pair(ctx, D):
            p = w.inner(ctx.v)
            if p in (1, 2):
                return WallWitness(
                    WallCondition.MK_ISOTROPIC, (w,), (0, p), against=ctx.v
                )
    return None


@dataclass(frozen=True)
class RankTwoData:
    """Saturated rank-2 sublattice spanned by v and a second class."""

    lattice: IntegerLattice
    embed: Embedding  # into the unimodular extension
    v_in_T: LatticeVector
    s_in_T: LatticeVector

    @property
    def is_hyperbolic(self) -> bool:
        return la.bareiss_det(self.lattice.gram) < 0


def hyperbolic_T(ctx: NContext, s) -> RankTwoData:
    """Saturation of span{v, s} in the extension, with v and s rewritten
    in its basis.  InputError when s is proportional to v."""
    s = _as_vector(ctx.mukai, s)
    cols = tuple((a, b) for a, b in zip(ctx.v.coords, s.coords))
    if la.rank(cols) < 2:
        raise InputError("span of v and s is not rank 2")
    emb = saturation(ctx.mukai, cols)
    v_in = emb.preimage(ctx.v)
    s_in = emb.preimage(s)
    if v_in is None or s_in is None:
        raise InputError("internal: saturation lost the spanning classes")
    return RankTwoData(lattice=emb.source, embed=emb, v_in_T=v_in, s_in_T=s_in)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0, deterministic."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _quad_roots(a: int, b: int, c: int) -> list[int]:
    """Integer roots of a k^2 + b k + c = 0 (a != 0), ascending."""
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s = isqrt(disc)
    if s * s != disc:
        return []
    out = set()
    for sgn in (1, -1):
        num = -b + sgn * s
        if num % (2 * a) == 0:
            out.add(num // (2 * a))
    return sorted(out)


def _quad_nonneg_range(a: int, b: int, c: int) -> list[int]:
    """All integer k with a k^2 + b k + c >= 0, for a < 0 (a finite list)."""
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    center = Fraction(-b, 2 * a)
    half = Fraction(disc, 4 * a * a)
    m = isqrt(half.numerator // half.denominator) + 1
    lo = floor(center) - m
    hi = ceil(center) + m
    return [k for k in range(lo, hi + 1) if a * k * k + b * k + c >= 0]


def bm_wall_test(T: IntegerLattice, v_in_T: LatticeVector) -> WallWitness | None:
    """Exhaustive rank-2 wall certificate search, in priority order.

    Given a hyperbolic (det < 0) even rank-2 lattice T containing the
    positive class v, looks for, in this order:

      1. a square -2 class orthogonal to v             (BM_orth_root)
      2. an isotropic class pairing 1 or 2 with v      (BM_isotropic)
      3. a square -2 class w with 0 < (w,v) <= v^2/2   (BM_bounded_root)
      4. a splitting v = w + t with w, t in the closed
         positive cone of v: x^2 >= 0, (x,v) > 0       (BM_sum_decomposition)

    Each search is a complete integer sweep: classes with fixed pairing
    against v form a line w0 + k u0 on which the square is a downward
    parabola in k, so all solution windows are finite and enumerated
    exactly.  A None therefore proves that T contains no certifying
    class at all.
    """
    if T.rank != 2:
        raise InputError("bm_wall_test expects a rank-2 lattice")
    if la.bareiss_det(T.gram) >= 0:
        raise InputError("bm_wall_test expects det(T) < 0")
    v = _as_vector(T, v_in_T)
    vsq = v.norm()
    if vsq <= 0:
        raise InputError("bm_wall_test expects v^2 > 0")

    g = la.mat_vec(T.gram, v.coords)
    dv = gcd(g[0], g[1])
    _, x0, y0 = _xgcd(g[0], g[1])

    u0 = (-g[1] // dv, g[0] // dv)
    if u0[0] < 0 or (u0[0] == 0 and u0[1] < 0):
        u0 = (-u0[0], -u0[1])
    a_coeff = T.norm(u0)  # negative: u0 spans the negative part of T

    def particular(p: int) -> tuple[int, int]:
        f = p // dv
        return (x0 * f, y0 * f)

    def line_quad(w0: tuple[int, int]) -> tuple[int, int, int]:
        # square of w0 + k u0 as a polynomial in k
        return a_coeff, 2 * T.inner(w0, u0), T.norm(w0)

    def vec(w0: tuple[int, int], k: int) -> LatticeVector:
        return T.vector((w0[0] + k * u0[0], w0[1] + k * u0[1]))

    if a_coeff == -2:
        return WallWitness(
            WallCondition.BM_ORTH_ROOT, (T.vector(u0),), (-2, 0), against=v
        )

    for p in (1, 2):
        if p % dv:
            continue
        w0 = particular(p)
        a, b, c = line_quad(w0)
        for k in _quad_roots(a, b, c):
            return WallWitness(
                WallCondition.BM_ISOTROPIC, (vec(w0, k),), (0, p), against=v
            )

    for p in range(1, vsq // 2 + 1):
        if p % dv:
            continue
        w0 = particular(p)
        a, b, c = line_quad(w0)
        for k in _quad_roots(a, b, c + 2):
            return WallWitness(
                WallCondition.BM_BOUNDED_ROOT, (vec(w0, k),), (-2, p), against=v
            )

    for pt in range(1, vsq):
        if pt % dv:
            continue
        t0 = particular(pt)
        a, b, c = line_quad(t0)
        for k in _quad_nonneg_range(a, b, c):
            t = vec(t0, k)
            w = v - t
            if T.norm(w.coords) >= 0:
                return WallWitness(
                    WallCondition.BM_SUM,
                    (w, t),
                    (w.norm(), t.norm(), vsq - pt, pt),
                    against=v,
                )
    return None


def wall_test(ctx: NContext, D) -> WallWitness | None:
    """Full wall decision for a primitive negative class D in L_n.

    Tries the shortcut certificates first, then the exhaustive rank-2
    search on the saturation of span{v, D}.  Witness vectors are always
    reported in extension coordinates.  None means: no certificate
    exists, i.e. D does not support a wall.
    """
    D = _as_vector(ctx.ambient, D)
    mk = markman_wall_test(ctx, D)
    if mk is not None:
        return mk
    data = hyperbolic_T(ctx, ctx.embed.apply(D))
    bm = bm_wall_test(data.lattice, data.v_in_T)
    if bm is None:
        return None
    return WallWitness(
        condition=bm.condition,
        vectors=tuple(data.embed.apply(w) for w in bm.vectors),
        pairing_data=bm.pairing_data,
        against=ctx.v,
    )


def ht_bound_ok(n: int, ray_square) -> bool:
    """Dual-ray square bound: ray^2 >= -(n+3)/2, boundary included."""
    return Fraction(ray_square) >= -Fraction(n + 3, 2)


def wall_type_exists(ctx: NContext, square: int, div: int) -> tuple[bool, LatticeVector | None]:
    """Does L_n contain a primitive class of this (square, div)?

    Criterion: div | 2n-2 and square = -c^2 (2n-2) mod 2 div^2 for some c
    prime to div.  Necessity comes from the discriminant form of the
    class [D/div]; sufficiency from the explicit witness returned here,
    supported on a hyperbolic plane plus the rank-1 tail.
    """
    if square >= 0 or square % 2:
        raise InputError("wall type square must be negative and even")
    if div < 1:
        raise InputError("wall type divisibility must be >= 1")
    n = ctx.n
    period = 2 * n - 2
    if period % div:
        return False, None
    mod = 2 * div * div
    c = _admissible_residues(period, div).get(square % mod)
    if c is None:
        return False, None
    u2 = (square + c * c * period) // mod
    coords = [0] * 23
    coords[0] = div
    coords[1] = div * u2
    coords[22] = c
    D = ctx.ambient.vector(coords)
    if D.norm() != square or not D.is_primitive() or D.div() != div:
        raise InputError("internal: witness construction failed")
    return True, D


@functools.lru_cache(maxsize=None)
def _admissible_residues(period: int, div: int) -> dict[int, int]:
    """Residues of squares realizable at this divisibility: maps
    -c^2 * period mod 2 div^2 to the smallest coefficient c prime to div
    that realizes it."""
    mod = 2 * div * div
    table: dict[int, int] = {}
    for c in range(mod):
        if gcd(c, div) == 1:
            table.setdefault((-c * c * period) % mod, c)
    return table


def enumerate_wall_types(ctx: NContext) -> tuple[WallType, ...]:
    """Candidate wall types at level n, sorted by (div, |square|).

    Combines the divisibility/congruence existence test with the dual-ray
    square bound.  For n <= 4 this list is exactly the set of wall types;
    for n >= 5 it is an upper bound (see `certified_wall_types`).
    """
    n = ctx.n
    period = 2 * n - 2
    out = []
    for m in range(1, period + 1):
        if period % m:
            continue
        s = -2
        while 2 * s + (n + 3) * m * m >= 0:
            exists, _ = wall_type_exists(ctx, s, m)
            if exists:
                out.append(WallType(square=s, div=m))
            s -= 2
    out.sort(key=WallType.sort_key)
    return tuple(out)


def certified_wall_types(ctx: NContext) -> tuple[WallType, ...]:
    """Candidate types whose witness class carries a verified wall
    certificate.  Coincides with `enumerate_wall_types` for n <= 4."""
    out = []
    for t in enumerate_wall_types(ctx):
        _, witness_class = wall_type_exists(ctx, t.square, t.div)
        if witness_class is not None and wall_test(ctx, witness_class) is not None:
            out.append(t)
    return tuple(out)


@dataclass(frozen=True)
class OrbitInvariants:
    """Complete isometry-orbit invariants for primitive classes in lattices
    with two orthogonal hyperbolic planes: square, divisibility, and the
    class of v/div in the discriminant group (exponents over its cyclic
    generators)."""

    square: int
    div: int
    disc: tuple[int, ...]


def eichler_invariants(lattice: IntegerLattice, v) -> OrbitInvariants:
    v = _as_vector(lattice, v)
    if not v.is_primitive():
        raise InputError("orbit invariants take primitive classes")
    d = divisibility(lattice, v.coords)
    return OrbitInvariants(
        square=v.norm(), div=d, disc=disc_class(lattice, v.coords, d)
    )


def _has_two_hyperbolic_blocks(lattice: IntegerLattice) -> bool:
    return sum(1 for b in lattice.blocks if b == "U") >= 2


def same_orbit(lattice: IntegerLattice, v, w, assume_two_u: bool = False) -> bool:
    """Orbit equality test via the invariant triple.

    Valid when the lattice splits off two orthogonal hyperbolic planes;
    this is checked against the constructor block tags unless the caller
    vouches with assume_two_u=True.
    """
    if not assume_two_u and not _has_two_hyperbolic_blocks(lattice):
        raise InputError(
            "orbit comparison needs a lattice with two hyperbolic plane "
            "summands (build via standard_lattice/direct_sum, or pass "
            "assume_two_u=True)"
        )
    return eichler_invariants(lattice, v) == eichler_invariants(lattice, w)


def eichler_transvection(lattice: IntegerLattice, e, a) -> tuple[tuple[int, ...], ...]:
    """Matrix (columns = images of basis vectors) of the transvection

        x  |->  x - (a,x) e + (e,x) a - (a,a)/2 (e,x) e

    for isotropic e and a orthogonal to e.  The result is verified to be
    an isometry before it is returned.
    """
    e = _as_vector(lattice, e)
    a = _as_vector(lattice, a)
    if e.norm() != 0:
        raise InputError("transvection base class must be isotropic")
    if e.inner(a) != 0:
        raise InputError("transvection requires (e, a) = 0")
    half = a.norm() // 2
    nrank = lattice.rank
    cols = []
    for j in range(nrank):
        x = lattice.basis_vector(j)
        ax = a.inner(x)
        ex = e.inner(x)
        img = [
            x.coords[i] - ax * e.coords[i] + ex * a.coords[i] - half * ex * e.coords[i]
            for i in range(nrank)
        ]
        cols.append(tuple(img))
    matrix = la.transpose(cols)
    check = la.mat_mul(la.mat_mul(la.transpose(matrix), lattice.gram), matrix)
    if check != lattice.gram:
        raise InputError("internal: transvection is not an isometry")
    return matrix


def dual_ray(ctx: NContext, D) -> tuple[Fraction, ...]:
    """The ray D / div(D) in L_n x Q; its square is D^2 / div^2."""
    D = _as_vector(ctx.ambient, D)
    if not D.is_primitive():
        raise InputError("dual rays are taken for primitive classes")
    d = D.div()
    return tuple(Fraction(c, d) for c in D.coords)
