"""Chamber geometry in the positive cone of a Picard sublattice.

All questions are reduced to exact finite enumerations:

* Wall crossings between two positive classes use the compact-majorant
  trick: for a positive reference a, q_a(x) = -x^2 + 2 (x,a)^2 / a^2 is
  positive definite, and every wall divisor separating a from b satisfies
  an explicit q_a bound derived from Cauchy-Schwarz for the majorant (see
  `walls_between`).  Enumerating that ball is therefore complete.
* Supporting-wall searches in rank 2 are exact: candidates found inside
  the height box give an angular bracket, and the identity
  q_w(D) = |D^2| (2 mu(D) - 1), where mu(D) is the normalized angle
  between w and the positive ray of D-perp, turns "angularly closer than
  the bracket" into another complete q_w enumeration.  When the Picard
  form splits off a hyperbolic plane over Q, walls are enumerated exactly
  from divisor pairs instead, with no height cap at all.
* In rank >= 3 candidates are truncated at the height box (results are
  labeled inexact), but each candidate is decided exactly: the facet
  test "does D-perp meet the open chamber?" becomes a sup-of-quadratic
  question over a polyhedral cone, solved by double description plus
  stationary-point enumeration over the faces of a compact base.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd, isqrt

from . import _linalg as la
from .errors import ConfigurationError, InputError, OnWallError
from .lattice import (
    IntegerLattice,
    LatticeVector,
    divisibility,
    orthogonal_complement,
    signature,
)
from .shortvec import CellBudget, enumerate_quadratic_leq, short_vectors
from .walls import NContext, WallType

__all__ = [
    "PicardData",
    "Wall",
    "SupportResult",
    "ExtremalRay",
    "is_positive_class",
    "walls_between",
    "same_chamber",
    "supporting_walls",
    "supporting_walls_report",
    "extremal_rays",
    "in_dual_cone",
]

MAX_PICARD_RANK = 5


@dataclass(frozen=True)
class PicardData:
    """A Picard sublattice of L_n with an optional reference class.

    `embed` must be a primitive isometric embedding pic -> L_n and the
    Picard form must have signature (1, rank-1).  `omega_ref` (rational
    coordinates in the pic basis) picks the positive-cone component and
    is required by `is_positive_class` and `in_dual_cone`.
    """

    ctx: NContext
    pic: IntegerLattice
    embed: Embedding
    omega_ref: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if self.pic.rank < 1 or self.pic.rank > MAX_PICARD_RANK:
            raise InputError(f"Picard rank must be 1..{MAX_PICARD_RANK}")
        if self.embed.source != self.pic or self.embed.target != self.ctx.ambient:
            raise InputError("embedding must map the Picard lattice into L_n")
        if not self.embed.is_primitive():
            raise InputError("Picard embedding must be primitive")
        if signature(self.pic) != (1, self.pic.rank - 1):
            raise InputError("Picard lattice must have signature (1, rank-1)")
        if self.omega_ref is not None:
            om = tuple(Fraction(x) for x in self.omega_ref)
            if len(om) != self.pic.rank:
                raise InputError("reference class has wrong length")
            if self.pic.norm(om) <= 0:
                raise InputError("reference class must have positive square")
            object.__setattr__(self, "omega_ref", om)

    def with_reference(self, omega) -> "PicardData":
        return replace(self, omega_ref=tuple(Fraction(x) for x in omega))

    def div_of(self, coords) -> int:
        """Divisibility in L_n (not in pic) of an integral pic class."""
        return divisibility(self.ctx.ambient, self.embed.apply(coords).coords)


@dataclass(frozen=True)
class Wall:
    """An oriented wall divisor in pic coordinates with its numerical type.

    `certificate`, when present, is an integral pic class x with x^2 > 0,
    (D, x) = 0, and (D', x) > 0 for every other wall of the same report:
    it exhibits the wall as an actual chamber facet.
    """

    D: LatticeVector
    wall_type: WallType
    certificate: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SupportResult:
    walls: tuple[Wall, ...]
    exact: bool
    search_bound: int


@dataclass(frozen=True)
class ExtremalRay:
    """Dual ray D / div(D) of a supporting wall, in pic x Q coordinates."""

    coords: tuple[Fraction, ...]
    square: Fraction
    wall: Wall


# ----------------------------------------------------------------- helpers


def _fracs(P: PicardData, x) -> tuple[Fraction, ...]:
    out = tuple(Fraction(c) for c in x)
    if len(out) != P.pic.rank:
        raise InputError("class has wrong coordinate length")
    return out


def _norm(P: PicardData, x) -> Fraction:
    return Fraction(P.pic.norm(x))


def _pair(P: PicardData, x, y) -> Fraction:
    return Fraction(P.pic.inner(x, y))


def _primitive_int(vec) -> tuple[int, ...]:
    """Scale a rational vector to its primitive integer representative,
    preserving direction."""
    fr = [Fraction(x) for x in vec]
    if all(x == 0 for x in fr):
        raise InputError("zero vector has no primitive representative")
    mult = 1
    for x in fr:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    ints = [int(x * mult) for x in fr]
    g = gcd(*ints)
    return tuple(c // g for c in ints)


def _type_lookup(types) -> dict[int, dict[int, WallType]]:
    out: dict[int, dict[int, WallType]] = {}
    for t in types:
        out.setdefault(t.square, {})[t.div] = t
    return out


def _match_type(P: PicardData, coords, lookup) -> WallType | None:
    s = P.pic.norm(coords)
    by_div = lookup.get(s)
    if not by_div:
        return None
    return by_div.get(P.div_of(coords))


def _majorant_gram(P: PicardData, a: tuple[Fraction, ...]):
    """Positive-definite Gram of q_a(x) = -x^2 + 2 (x,a)^2 / a^2."""
    g = P.pic.gram
    ga = la.mat_vec(g, a)
    asq = P.pic.norm(a)
    n = P.pic.rank
    return tuple(
        tuple(Fraction(-g[i][j]) + Fraction(2) * ga[i] * ga[j] / asq for j in range(n))
        for i in range(n)
    )


def is_positive_class(P: PicardData, x) -> bool:
    """x^2 > 0 and x on the same side as the reference class."""
    if P.omega_ref is None:
        raise ConfigurationError("positivity test needs a reference class")
    xf = _fracs(P, x)
    return _norm(P, xf) > 0 and _pair(P, xf, P.omega_ref) > 0


# ----------------------------------------------------- segment wall crossing


def walls_between(P: PicardData, alpha, beta, types, max_cells=None) -> list[Wall]:
    """All wall divisors strictly separating alpha from beta.

    Both classes must be positive and in the same component.  Walls are
    oriented toward alpha ((D, alpha) > 0 > (D, beta)).

    Completeness: a separating D vanishes at some gamma0 on the segment,
    so with s = D^2 the majorant at gamma0 gives q_gamma0(D) = |s|, and
    Cauchy-Schwarz transports that to the left endpoint:
    q_a(D) <= |s| (1 + 2 U / a^2) with
    U = -(a-b)^2 + 2 max((a-b, a), (a-b, b))^2 / min_segment gamma(t)^2.
    The enumeration exhausts that cap (and asserts it per hit).  When the
    cap is disproportionate to the wall squares the segment is bisected
    first -- U shrinks quadratically with the segment -- and candidates
    vanishing anywhere on a closed half are pooled, so a class vanishing
    at a shared midpoint is still caught; the final filter keeps exactly
    the strict separators of the original endpoints.
    """
    a = _fracs(P, alpha)
    b = _fracs(P, beta)
    asq = _norm(P, a)
    bsq = _norm(P, b)
    ab = _pair(P, a, b)
    if asq <= 0 or bsq <= 0 or ab <= 0:
        raise InputError(
            "walls_between needs positive classes in the same component"
        )
    if a == b:
        return []
    types = list(types)
    if not types:
        return []
    lookup = _type_lookup(types)
    max_abs_square = max(abs(t.square) for t in types)
    budget = CellBudget(max_cells)
    pool: dict[tuple[int, ...], WallType] = {}
    _segment_candidates(P, a, b, max_abs_square, lookup, budget, pool, 0)
    hits = []
    for x, t in pool.items():
        pa = _pair(P, x, a)
        if pa < 0:
            x = tuple(-c for c in x)
            pa = -pa
        if pa > 0 and _pair(P, x, b) < 0:
            hits.append((x, t))
    return [Wall(D=P.pic.vector(x), wall_type=t) for x, t in sorted(hits)]


_SPLIT_FACTOR = 16
_MAX_SPLIT_DEPTH = 40


def _segment_candidates(P, a, b, max_abs_square, lookup, budget, pool, depth):
    """Pool primitive typed classes vanishing on the closed segment [a, b],
    bisecting while the enumeration cap is out of scale with the squares."""
    budget.spend()
    asq = _norm(P, a)
    diff = tuple(x - y for x, y in zip(a, b))
    # min of gamma(t)^2 = At^2 + Bt + C on [0, 1]
    A = _norm(P, diff)
    B = 2 * (_pair(P, a, b) - asq)
    m = min(asq, A + B + asq)
    if A > 0:
        tstar = Fraction(-B, 2 * A)
        if 0 < tstar < 1:
            m = min(m, asq - Fraction(B * B, 4 * A))
    assert m > 0, "segment leaves the positive cone"
    pmax = max(abs(_pair(P, diff, a)), abs(_pair(P, diff, b)))
    blowup = 1 + 2 * (-A + 2 * pmax * pmax / m) / asq
    if blowup > _SPLIT_FACTOR and depth < _MAX_SPLIT_DEPTH:
        mid = tuple((x + y) / 2 for x, y in zip(a, b))
        _segment_candidates(P, a, mid, max_abs_square, lookup, budget, pool, depth + 1)
        _segment_candidates(P, mid, b, max_abs_square, lookup, budget, pool, depth + 1)
        return
    gram = _majorant_gram(P, a)
    for x in enumerate_quadratic_leq(gram, max_abs_square * blowup, budget):
        for c in x:
            if c:
                if c < 0:
                    x = tuple(-v for v in x)
                break
        if x in pool or gcd(*x) != 1:
            continue
        if _pair(P, x, a) * _pair(P, x, b) > 0:
            continue
        t = _match_type(P, x, lookup)
        if t is None:
            continue
        qa = la.vec_mat_vec(x, gram, x)
        assert qa <= abs(t.square) * blowup, "majorant bound violated"
        pool[x] = t


def same_chamber(P: PicardData, alpha, beta, types, max_cells=None) -> bool:
    """True when no wall of any given type strictly separates the classes."""
    return not walls_between(P, alpha, beta, types, max_cells=max_cells)


# ------------------------------------------------------- double description


def _dual_description(constraints, dim, budget: CellBudget):
    """Extreme rays and lineality of {x in Q^dim : a . x >= 0 for all a}.

    Incremental double description over exact rationals.  Rays come back
    as primitive integer tuples, lineality as an integer basis.
    """
    lineality: list[tuple[Fraction, ...]] = [
        tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)
    ]
    rays: list[tuple[Fraction, ...]] = []
    seen: list[tuple] = []

    def dot(a, x):
        return sum(Fraction(ai) * xi for ai, xi in zip(a, x))

    for a in constraints:
        budget.spend()
        if all(v == 0 for v in a):
            seen.append(a)
            continue
        l0 = next((l for l in lineality if dot(a, l) != 0), None)
        if l0 is not None:
            if dot(a, l0) < 0:
                l0 = tuple(-x for x in l0)
            d0 = dot(a, l0)
            lineality = [
                tuple(x - dot(a, l) / d0 * y for x, y in zip(l, l0))
                for l in lineality
                if l != l0 and tuple(-x for x in l) != l0
            ]
            rays = [
                tuple(x - dot(a, r) / d0 * y for x, y in zip(r, l0)) for r in rays
            ]
            rays.append(l0)
            seen.append(a)
            continue
        vals = [dot(a, r) for r in rays]
        plus = [r for r, v in zip(rays, vals) if v > 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        minus = [r for r, v in zip(rays, vals) if v < 0]
        if not minus:
            seen.append(a)
            continue
        combos = []
        for rp in plus:
            vp = dot(a, rp)
            for rm in minus:
                budget.spend()
                vm = dot(a, rm)
                comb = tuple(vp * xm - vm * xp for xp, xm in zip(rp, rm))
                combos.append(comb)
        seen.append(a)
        lin_rank = len(lineality)
        keep = {}
        for r in plus + zero + combos:
            key = _primitive_int(r) if any(r) else None
            if key is None or key in keep:
                continue
            active = [c for c in seen if dot(c, r) == 0]
            # extreme iff active constraints cut r down to a single ray
            if la.rank(active) >= dim - lin_rank - 1:
                keep[key] = tuple(Fraction(x) for x in key)
        rays = list(keep.values())
    out_rays = sorted(_primitive_int(r) for r in rays)
    out_lin = sorted(_primitive_int(l) for l in lineality) if lineality else []
    return out_rays, out_lin


# --------------------------------------- sup of a quadratic over a cone > 0?


def _sup_positive_witness(gram, rays, lineality, constraints, budget: CellBudget):
    """A rational x in the cone with x^T gram x > 0, or None if sup <= 0.

    The cone is lineality + cone(rays); `constraints` describe it (used
    only to build a positive functional on the pointed part).  Lineality
    directions are eliminated one at a time (unbounded direction, radical
    drop, or Schur complement); the pointed remainder is decided on a
    compact base polytope via stationary points of all faces.
    """

    def q(x, y=None):
        return la.vec_mat_vec(x, gram, x if y is None else y)

    span = list(rays) + list(lineality)
    if lineality:
        l = lineality[0]
        rest = lineality[1:]
        ql = q(l)
        if ql > 0:
            return tuple(Fraction(x) for x in l)
        if ql == 0:
            partner = next((y for y in span if y != l and q(l, y) != 0), None)
            if partner is not None:
                # x = y + t l is unbounded in q; walk t until positive
                t = Fraction(1)
                sign = 1 if q(l, partner) > 0 else -1
                for _ in range(200):
                    x = tuple(
                        Fraction(a) + sign * t * Fraction(b)
                        for a, b in zip(partner, l)
                    )
                    if q(x) > 0:
                        return x
                    t *= 2
                raise InputError("internal: unbounded direction failed to verify")
            # l is q-orthogonal to the whole cone: drop it
            return _sup_positive_witness(gram, rays, rest, constraints, budget)
        # ql < 0: optimize the l-component away (Schur complement)
        gl = la.mat_vec(gram, l)
        n = len(l)
        schur = tuple(
            tuple(Fraction(gram[i][j]) - gl[i] * gl[j] / ql for j in range(n))
            for i in range(n)
        )
        sub = _sup_positive_witness(schur, rays, rest, constraints, budget)
        if sub is None:
            return None
        tstar = -q(l, sub) / ql
        return tuple(a + tstar * b for a, b in zip(sub, l))

    if not rays:
        return None
    phi = tuple(sum(Fraction(c[i]) for c in constraints) for i in range(len(rays[0])))

    def phival(x):
        return sum(p * Fraction(xi) for p, xi in zip(phi, x))

    verts = []
    for r in rays:
        pv = phival(r)
        if pv <= 0:
            raise InputError("internal: base functional not positive on ray")
        verts.append(tuple(Fraction(x) / pv for x in r))
    best = None
    candidates = list(verts)
    k = len(constraints)
    dim = len(phi)
    for size in range(0, dim):
        for subset in itertools.combinations(range(k), size):
            budget.spend()
            rows = [phi] + [constraints[i] for i in subset]
            rhs = [Fraction(1)] + [Fraction(0)] * size
            x0 = la.solve_rational(rows, rhs)
            if x0 is None:
                continue
            null = la.kernel_basis(
                [_primitive_int_row(row) for row in rows]
            )
            if null:
                gn = [[q(ni, nj) for nj in null] for ni in null]
                rhs2 = [-q(ni, x0) for ni in null]
                mu = la.solve_rational(gn, rhs2)
                if mu is None:
                    continue
                x0 = tuple(
                    x + sum(m * Fraction(nv[i]) for m, nv in zip(mu, null))
                    for i, x in enumerate(x0)
                )
            candidates.append(x0)
    for x in candidates:
        if any(
            sum(Fraction(c[i]) * x[i] for i in range(len(x))) < 0 for c in constraints
        ):
            continue
        val = q(x)
        if best is None or val > best[0]:
            best = (val, x)
    if best is None or best[0] <= 0:
        return None
    return best[1]


def _primitive_int_row(row):
    fr = [Fraction(x) for x in row]
    if all(x == 0 for x in fr):
        return tuple(0 for _ in fr)
    mult = 1
    for x in fr:
        mult = mult * x.denominator // gcd(mult, x.denominator)
    return tuple(int(x * mult) for x in fr)


# ------------------------------------------------------------ wall supports


def _check_on_wall(P: PicardData, omega, lookup):
    """Raise OnWallError when omega is orthogonal to some wall-type class.

    Exact and independent of any height bound: omega-perp in pic is
    negative definite, so each candidate square is a finite short-vector
    enumeration there.
    """
    if P.pic.rank < 2:
        return
    om_int = _primitive_int(omega)
    comp = orthogonal_complement(P.pic, [om_int])
    if comp.source.rank == 0:
        return
    for s in sorted(lookup, key=abs):
        for w in short_vectors(comp.source, s):
            cand = comp.apply(w)
            if not cand.is_primitive():
                continue
            t = lookup[s].get(P.div_of(cand.coords))
            if t is None:
                continue
            wall = Wall(D=cand, wall_type=t)
            raise OnWallError(
                f"reference class lies on the wall D={cand.coords} "
                f"of type (square {t.square}, div {t.div})",
                wall=wall,
            )


def _box_candidates(P: PicardData, omega, lookup, bound, budget):
    """Type-matching primitive classes with coordinates in [-bound, bound],
    oriented toward omega.  Assumes the on-wall check already ran."""
    n = P.pic.rank
    out = {}
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        budget.spend()
        if not any(x) or gcd(*x) != 1:
            continue
        t = _match_type(P, x, lookup)
        if t is None:
            continue
        pw = _pair(P, x, omega)
        if pw < 0:
            x = tuple(-c for c in x)
        elif pw == 0:
            raise OnWallError(
                f"reference class lies on the wall D={x} of type "
                f"(square {t.square}, div {t.div})",
                wall=Wall(D=P.pic.vector(x), wall_type=t),
            )
        out[x] = t
    return out


def _split_isotropic(P: PicardData, omega):
    """Primitive isotropic classes (u+, u-) of a rank-2 Picard form that
    splits over Q, both oriented toward omega; None if it does not split."""
    (a, b), (_, c) = P.pic.gram
    disc = b * b - a * c
    if disc <= 0:
        return None
    r = isqrt(disc)
    if r * r != disc:
        return None
    if a == 0:
        dirs = [(1, 0), _primitive_int((-Fraction(c), Fraction(2 * b)))]
    else:
        dirs = [
            _primitive_int((Fraction(-b + r), Fraction(a))),
            _primitive_int((Fraction(-b - r), Fraction(a))),
        ]
    out = []
    for u in dirs:
        pu = _pair(P, u, omega)
        if pu == 0:
            raise InputError("internal: isotropic class orthogonal to omega")
        out.append(tuple(-x for x in u) if pu < 0 else u)
    e = P.pic.inner(out[0], out[1])
    if e <= 0:
        raise InputError("internal: isotropic pairing must be positive")
    return out[0], out[1], e


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _split_candidates(P: PicardData, omega, lookup, split):
    """Complete wall-class enumeration for split rank-2 forms.

    Writing x via its pairings p = (x, u+), q = (x, u-) gives
    x = (q u+ + p u-) / e and x^2 = 2 p q / e, so classes of square s
    correspond to divisor pairs of s e / 2: a finite, height-free list.
    """
    up, um, e = split
    out = {}
    for s in lookup:
        num = s * e
        if num % 2:
            continue
        prod = num // 2  # negative
        for d in _divisors(-prod):
            for p, q in ((d, prod // d), (-d, -(prod // d))):
                coords = tuple(
                    Fraction(q * a + p * b, e) for a, b in zip(up, um)
                )
                if any(c.denominator != 1 for c in coords):
                    continue
                x = tuple(int(c) for c in coords)
                if gcd(*x) != 1:
                    continue
                t = _match_type(P, x, lookup)
                if t is None:
                    continue
                pw = _pair(P, x, omega)
                if pw < 0:
                    x = tuple(-c for c in x)
                elif pw == 0:
                    raise OnWallError(
                        f"reference class lies on the wall D={x} of type "
                        f"(square {t.square}, div {t.div})",
                        wall=Wall(D=P.pic.vector(x), wall_type=t),
                    )
                out[x] = t
    return out


def _perp_ray_rank2(P: PicardData, coords, omega):
    """Primitive generator of D-perp in a rank-2 pic, oriented to omega."""
    g = la.mat_vec(P.pic.gram, coords)
    x0 = _primitive_int((Fraction(-g[1]), Fraction(g[0])))
    if _pair(P, x0, omega) < 0:
        x0 = tuple(-c for c in x0)
    return x0


def _mu(P: PicardData, x0, omega) -> Fraction:
    num = _pair(P, x0, omega) ** 2
    den = _norm(P, x0) * _norm(P, omega)
    return num / den


def _support_rank2(P, omega, lookup, bound, budget):
    split = _split_isotropic(P, omega)
    if split is not None:
        cands = _split_candidates(P, omega, lookup, split)
        exact = True
    else:
        cands = _box_candidates(P, omega, lookup, bound, budget)
        exact = False
        if cands:
            # bracket per side, then close the search exactly: any wall
            # angularly closer than the bracket satisfies
            # q_omega(D) = |D^2| (2 mu - 1) <= cap.
            sides = {1: [], -1: []}
            for x in cands:
                x0 = _perp_ray_rank2(P, x, omega)
                side = x0[0] * omega[1] - x0[1] * omega[0]
                sides[1 if side > 0 else -1].append(_mu(P, x0, omega))
            mus = [min(v) for v in sides.values() if v]
            both = all(sides.values())
            mu_cap = max(mus)
            cap = max(abs(s) * (2 * mu_cap - 1) for s in lookup)
            gram = _majorant_gram(P, omega)
            for x in enumerate_quadratic_leq(gram, cap, budget):
                if gcd(*x) != 1 or x in cands:
                    continue
                t = _match_type(P, x, lookup)
                if t is None:
                    continue
                pw = _pair(P, x, omega)
                if pw < 0:
                    x = tuple(-c for c in x)
                if tuple(x) in cands:
                    continue
                cands[tuple(x)] = t
            exact = both
    walls = []
    for x in sorted(cands):
        t = cands[x]
        x0 = _perp_ray_rank2(P, x, omega)
        if all(
            P.pic.inner(y, x0) > 0 for y in cands if y != x
        ):
            walls.append(Wall(D=P.pic.vector(x), wall_type=t, certificate=x0))
    return walls, exact


def _support_general(P, omega, lookup, bound, budget):
    cands = _box_candidates(P, omega, lookup, bound, budget)
    walls = []
    for x in sorted(cands):
        t = cands[x]
        others = [y for y in cands if y != x]
        # fast path: the orthogonal projection of omega often certifies
        xsq = P.pic.norm(x)
        proj = tuple(
            w - _pair(P, omega, x) / xsq * Fraction(c)
            for w, c in zip(omega, x)
        )
        if all(P.pic.inner(y, proj) > 0 for y in others):
            walls.append(
                Wall(D=P.pic.vector(x), wall_type=t, certificate=_primitive_int(proj))
            )
            continue
        # exact facet decision on W = x-perp inside pic
        basis = la.kernel_basis([la.mat_vec(P.pic.gram, x)])
        if not basis:
            continue
        bmat = la.transpose(basis)  # pic coords of W basis, as columns
        gw = la.mat_mul(la.mat_mul(basis, P.pic.gram), la.transpose(basis))
        cons = []
        for y in others:
            gy = la.mat_vec(P.pic.gram, y)
            cons.append(
                tuple(sum(g * c for g, c in zip(gy, col)) for col in basis)
            )
        rays, lin = _dual_description(cons, len(basis), budget)
        if not rays and not lin:
            continue
        if rays:
            interior = tuple(sum(Fraction(r[i]) for r in rays) for i in range(len(basis)))
        else:
            interior = None
        if cons and interior is not None:
            if any(
                sum(Fraction(c[i]) * interior[i] for i in range(len(interior))) <= 0
                for c in cons
            ):
                continue  # some wall holds with equality on all of K
        elif cons and interior is None:
            continue
        witness = _sup_positive_witness(gw, rays, lin, cons, budget)
        if witness is None:
            continue
        # pull toward the interior point to make certificates strict
        if interior is not None:
            eps = Fraction(1)
            while True:
                xw = tuple(w + eps * i for w, i in zip(witness, interior))
                if la.vec_mat_vec(xw, gw, xw) > 0:
                    witness = xw
                    break
                eps /= 2
        cert_pic = tuple(
            sum(Fraction(bmat[i][j]) * witness[j] for j in range(len(witness)))
            for i in range(P.pic.rank)
        )
        cert = _primitive_int(cert_pic)
        assert P.pic.inner(cert, x) == 0 and P.pic.norm(cert) > 0
        assert all(P.pic.inner(y, cert) > 0 for y in others)
        walls.append(Wall(D=P.pic.vector(x), wall_type=t, certificate=cert))
    return walls, False


def supporting_walls_report(
    P: PicardData, omega, types, search_bound: int = 12, max_cells=None
) -> SupportResult:
    """Walls whose hyperplanes carry facets of the chamber of omega.

    Every reported wall comes with an exact certificate class.  `exact`
    is True when the wall list is provably complete (always in rank 1;
    in rank 2 when the form splits or both sides of omega were bracketed
    and closed off); rank >= 3 lists are complete up to the search box.
    Raises OnWallError when omega lies on a candidate wall.
    """
    om = _fracs(P, omega)
    if _norm(P, om) <= 0:
        raise InputError("reference class must have positive square")
    types = list(types)
    lookup = _type_lookup(types)
    if search_bound < 1:
        raise InputError("search bound must be positive")
    budget = CellBudget(max_cells)
    if not types or P.pic.rank == 1:
        return SupportResult(walls=(), exact=True, search_bound=search_bound)
    _check_on_wall(P, om, lookup)
    if P.pic.rank == 2:
        walls, exact = _support_rank2(P, om, lookup, search_bound, budget)
    else:
        walls, exact = _support_general(P, om, lookup, search_bound, budget)
    for w in walls:
        assert w.certificate is not None
        assert P.pic.inner(w.certificate, w.D.coords) == 0
        assert P.pic.norm(w.certificate) > 0
    return SupportResult(walls=tuple(walls), exact=exact, search_bound=search_bound)


def supporting_walls(
    P: PicardData, omega, types, search_bound: int = 12, max_cells=None
) -> list[Wall]:
    return list(
        supporting_walls_report(P, omega, types, search_bound, max_cells).walls
    )


def extremal_rays(
    P: PicardData, omega, types, search_bound: int = 12, max_cells=None
) -> list[ExtremalRay]:
    """Dual rays D / div(D) of the supporting walls of omega's chamber."""
    report = supporting_walls_report(P, omega, types, search_bound, max_cells)
    out = []
    for w in report.walls:
        d = P.div_of(w.D.coords)
        coords = tuple(Fraction(c, d) for c in w.D.coords)
        out.append(
            ExtremalRay(coords=coords, square=Fraction(w.D.norm(), d * d), wall=w)
        )
    return out


def in_dual_cone(P: PicardData, walls, x, omega=None) -> bool:
    """Strict chamber-side test: (D, x) > 0 for every wall in the set and
    (x, omega) >= 0.

    Walls are taken with the orientation they carry (reports orient them
    toward the reference class), so a True answer places x strictly
    inside the open cone they cut out, on the reference side.  Classes on
    a wall (zero pairing) fail, by design.
    """
    om = P.omega_ref if omega is None else _fracs(P, omega)
    if om is None:
        raise ConfigurationError("dual-cone test needs a reference class")
    xf = _fracs(P, x)
    if _pair(P, xf, om) < 0:
        return False
    for w in walls:
        coords = w.D.coords if isinstance(w, Wall) else tuple(int(c) for c in w)
        if _pair(P, coords, xf) <= 0:
            return False
    return True
