"""Chamber decomposition of the positive cone for a Picard sublattice:
supporting walls with certificates, extremal rays, segment wall crossing,
and the dual-cone membership contract."""

import itertools
import random
from fractions import Fraction
from math import gcd

import pytest

from wallkit import (
    ConfigurationError,
    Embedding,
    EnumerationBudgetExceeded,
    InputError,
    OnWallError,
    PicardData,
    IntegerLattice,
    certified_wall_types,
    enumerate_wall_types,
    extremal_rays,
    ht_bound_ok,
    in_dual_cone,
    is_positive_class,
    make_context,
    same_chamber,
    supporting_walls,
    supporting_walls_report,
    walls_between,
)
from wallkit.chambers import MAX_PICARD_RANK


def picard(n, gram, cols, omega=None):
    """Build PicardData from a pic Gram matrix and ambient coordinates
    (one sparse column per pic basis vector)."""
    ctx = make_context(n)
    pic = IntegerLattice(tuple(tuple(r) for r in gram), label="pic")
    rank = ctx.ambient.rank
    matrix = tuple(tuple(col.get(i, 0) for col in cols) for i in range(rank))
    emb = Embedding(pic, ctx.ambient, matrix)
    om = None if omega is None else tuple(Fraction(x) for x in omega)
    return PicardData(ctx=ctx, pic=pic, embed=emb, omega_ref=om)


def p2_data(omega=(2, -1)):
    # degree-2 polarization at n=2: H = e1 + f1, second basis vector the
    # rank-1 tail generator
    return picard(2, [[2, 0], [0, -2]], [{0: 1, 1: 1}, {22: 1}], omega)


def bm2_n3_data(omega=(5, -2)):
    return picard(3, [[4, 0], [0, -4]], [{0: 1, 1: 2}, {22: 1}], omega)


def bm2_n5_data(omega=(7, -2)):
    return picard(5, [[4, 0], [0, -8]], [{0: 1, 1: 2}, {22: 1}], omega)


def rank3_data(omega=(5, 3, 1)):
    # hyperbolic plane plus the tail at n=2
    return picard(
        2,
        [[0, 1, 0], [1, 0, 0], [0, 0, -2]],
        [{0: 1}, {1: 1}, {22: 1}],
        omega,
    )


def wall_key(w):
    return (tuple(w.D.coords), w.wall_type.square, w.wall_type.div)


def unsigned(coords):
    c = tuple(coords)
    for x in c:
        if x:
            return c if x > 0 else tuple(-y for y in c)
    return c


# ------------------------------------------------------------ golden chambers


GOLDEN = {
    "deg2-n2": dict(
        data=p2_data,
        types=lambda ctx: enumerate_wall_types(ctx),
        walls={((0, 1), -2, 2), ((2, -3), -10, 2)},
        certs={(0, 1): (1, 0), (2, -3): (3, -2)},
        rays={
            ((Fraction(0), Fraction(1, 2)), Fraction(-1, 2)),
            ((Fraction(1), Fraction(-3, 2)), Fraction(-5, 2)),
        },
    ),
    "deg4-n3": dict(
        data=bm2_n3_data,
        types=lambda ctx: enumerate_wall_types(ctx),
        walls={((0, 1), -4, 4), ((4, -5), -36, 4)},
        certs={(0, 1): (1, 0), (4, -5): (5, -4)},
        rays={
            ((Fraction(0), Fraction(1, 4)), Fraction(-1, 4)),
            ((Fraction(1), Fraction(-5, 4)), Fraction(-9, 4)),
        },
    ),
    "deg4-n5": dict(
        data=bm2_n5_data,
        types=lambda ctx: certified_wall_types(ctx),
        walls={((0, 1), -8, 8), ((8, -7), -136, 8)},
        certs={(0, 1): (1, 0), (8, -7): (7, -4)},
        rays={
            ((Fraction(0), Fraction(1, 8)), Fraction(-1, 8)),
            ((Fraction(1), Fraction(-7, 8)), Fraction(-17, 8)),
        },
    ),
}


class TestGoldenChambers:
    @pytest.mark.parametrize("name", sorted(GOLDEN))
    def test_supporting_walls_and_certificates(self, name):
        g = GOLDEN[name]
        P = g["data"]()
        types = g["types"](P.ctx)
        rep = supporting_walls_report(P, P.omega_ref, types)
        assert {wall_key(w) for w in rep.walls} == g["walls"]
        assert rep.exact is True
        for w in rep.walls:
            assert w.certificate == g["certs"][tuple(w.D.coords)]
            assert P.pic.inner(w.certificate, w.D.coords) == 0
            assert P.pic.norm(w.certificate) > 0

    @pytest.mark.parametrize("name", sorted(GOLDEN))
    def test_extremal_rays(self, name):
        g = GOLDEN[name]
        P = g["data"]()
        types = g["types"](P.ctx)
        rays = extremal_rays(P, P.omega_ref, types)
        assert {(r.coords, r.square) for r in rays} == g["rays"]
        for r in rays:
            assert ht_bound_ok(P.ctx.n, r.square)
            # the ray is the wall class divided by its ambient divisibility
            d = P.div_of(r.wall.D.coords)
            assert r.coords == tuple(Fraction(c, d) for c in r.wall.D.coords)

    @pytest.mark.parametrize("name", sorted(GOLDEN))
    def test_reference_strictly_inside(self, name):
        g = GOLDEN[name]
        P = g["data"]()
        types = g["types"](P.ctx)
        walls = supporting_walls(P, P.omega_ref, types)
        assert in_dual_cone(P, walls, P.omega_ref)


# --------------------------------------------------------------- rank 1 and 5


class TestRankEdges:
    def test_rank1_positive_has_no_walls(self):
        P = picard(2, [[2]], [{0: 1, 1: 1}], omega=(1,))
        rep = supporting_walls_report(P, (1,), enumerate_wall_types(P.ctx))
        assert rep.walls == ()
        assert rep.exact is True
        assert extremal_rays(P, (1,), enumerate_wall_types(P.ctx)) == []

    def test_rank1_negative_rejected(self):
        with pytest.raises(InputError):
            picard(2, [[-2]], [{22: 1}], omega=None)

    def test_rank_cap(self):
        ctx = make_context(2)
        rank = MAX_PICARD_RANK + 1
        gram = [[0] * rank for _ in range(rank)]
        gram[0][1] = gram[1][0] = 1
        for i in range(2, rank):
            gram[i][i] = -2
        pic = IntegerLattice(tuple(tuple(r) for r in gram), label="big")
        cols = [{0: 1}, {1: 1}] + [{2 + 2 * j: 1} for j in range(rank - 2)]
        matrix = tuple(
            tuple(col.get(i, 0) for col in cols) for i in range(ctx.ambient.rank)
        )
        with pytest.raises(InputError):
            PicardData(ctx=ctx, pic=pic, embed=Embedding(pic, ctx.ambient, matrix))

    def test_wrong_signature_rejected(self):
        with pytest.raises(InputError):
            picard(2, [[2, 0], [0, 2]], [{0: 1, 1: 1}, {0: 1, 1: -1, 2: 1}])

    def test_imprimitive_embedding_rejected(self):
        with pytest.raises(InputError):
            picard(2, [[-8]], [{22: 2}])


# ------------------------------------------------------------ wall membership


class TestDualCone:
    def test_empty_wall_set_accepts_reference(self):
        P = p2_data()
        assert in_dual_cone(P, [], P.omega_ref)

    def test_boundary_class_fails(self):
        P = p2_data()
        walls = supporting_walls(P, P.omega_ref, enumerate_wall_types(P.ctx))
        # H pairs to zero with the tail wall, so it sits on the boundary
        assert not in_dual_cone(P, walls, (1, 0))

    def test_raw_coordinate_walls_accepted(self):
        P = p2_data()
        assert in_dual_cone(P, [(0, 1)], (1, -1))
        assert not in_dual_cone(P, [(0, 1)], (1, 0))

    def test_needs_reference(self):
        P = p2_data(omega=None)
        with pytest.raises(ConfigurationError):
            in_dual_cone(P, [], (1, 0))
        # an explicit reference substitutes for the missing field
        assert in_dual_cone(P, [], (1, 0), omega=(2, -1))

    def test_wrong_side_of_reference_fails(self):
        P = p2_data()
        assert not in_dual_cone(P, [], (-2, 1))


class TestPositiveClass:
    def test_reference_is_positive(self):
        P = p2_data()
        assert is_positive_class(P, (2, -1))
        assert is_positive_class(P, (1, 0))

    def test_isotropic_and_negative_fail(self):
        P = p2_data()
        assert not is_positive_class(P, (1, 1))
        assert not is_positive_class(P, (0, 1))

    def test_opposite_component_fails(self):
        P = p2_data()
        assert not is_positive_class(P, (-2, 1))

    def test_needs_reference(self):
        P = p2_data(omega=None)
        with pytest.raises(ConfigurationError):
            is_positive_class(P, (1, 0))


# ----------------------------------------------------------- on-wall handling


class TestOnWall:
    def test_reference_on_wall_rejected_by_name(self):
        P = p2_data()
        with pytest.raises(OnWallError) as ei:
            supporting_walls_report(P, (1, 0), enumerate_wall_types(P.ctx))
        named = ei.value.wall
        assert named is not None
        assert (named.wall_type.square, named.wall_type.div) == (-2, 2)
        assert unsigned(named.D.coords) == (0, 1)
        assert str(named.D.coords) in str(ei.value) or "0" in str(ei.value)

    def test_rank3_on_wall(self):
        P = rank3_data()
        with pytest.raises(OnWallError):
            supporting_walls_report(P, (3, 2, 1), enumerate_wall_types(P.ctx))

    def test_nonpositive_reference_rejected(self):
        P = p2_data()
        with pytest.raises(InputError):
            supporting_walls_report(P, (1, 1), enumerate_wall_types(P.ctx))


# -------------------------------------------------------- segment wall lists


def box_walls_between(P, alpha, beta, types, box):
    """Brute-force oracle: scan an integer coordinate box for primitive
    classes of a listed type strictly separating alpha from beta."""
    by_square = {}
    for t in types:
        by_square.setdefault(t.square, set()).add(t.div)
    hits = set()
    for coords in itertools.product(range(-box, box + 1), repeat=P.pic.rank):
        if not any(coords) or gcd(*coords) != 1:
            continue
        s = P.pic.norm(coords)
        if s not in by_square:
            continue
        pa = P.pic.inner(coords, alpha)
        pb = P.pic.inner(coords, beta)
        if pa < 0:
            coords = tuple(-c for c in coords)
            pa, pb = -pa, -pb
        if not (pa > 0 and pb < 0):
            continue
        if P.div_of(coords) in by_square[s]:
            hits.add(coords)
    return hits


class TestWallsBetween:
    def test_p2_reflection_crosses_exactly_one_wall(self):
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        found = walls_between(P, (2, -1), (Fraction(14, 5), Fraction(-11, 5)), types)
        assert {wall_key(w) for w in found} == {((2, -3), -10, 2)}

    def test_p2_tail_side(self):
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        found = walls_between(P, (2, -1), (2, 1), types)
        assert {wall_key(w) for w in found} == {((0, 1), -2, 2)}

    def test_same_class_crosses_nothing(self):
        P = p2_data()
        assert walls_between(P, (2, -1), (2, -1), enumerate_wall_types(P.ctx)) == []

    def test_orientation_toward_first_argument(self):
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        fwd = walls_between(P, (2, -1), (2, 1), types)
        bwd = walls_between(P, (2, 1), (2, -1), types)
        assert {tuple(w.D.coords) for w in fwd} == {
            tuple(-c for c in w.D.coords) for w in bwd
        }
        for w in fwd:
            assert P.pic.inner(w.D.coords, (2, -1)) > 0
            assert P.pic.inner(w.D.coords, (2, 1)) < 0

    def test_nonpositive_inputs_rejected(self):
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        with pytest.raises(InputError):
            walls_between(P, (0, 1), (2, -1), types)
        with pytest.raises(InputError):
            walls_between(P, (2, -1), (-2, 1), types)

    def test_empty_type_list(self):
        P = p2_data()
        assert walls_between(P, (2, -1), (2, 1), []) == []

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_rank2_matches_box_oracle(self, seed):
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        rng = random.Random(seed)
        pairs = 0
        while pairs < 6:
            a = (rng.randint(1, 12), rng.randint(-8, 8))
            b = (rng.randint(1, 12), rng.randint(-8, 8))
            if P.pic.norm(a) <= 0 or P.pic.norm(b) <= 0:
                continue
            if P.pic.inner(a, b) <= 0 or P.pic.inner(a, (2, -1)) <= 0:
                continue
            pairs += 1
            found = {tuple(w.D.coords) for w in walls_between(P, a, b, types)}
            assert found == box_walls_between(P, a, b, types, box=60)

    @pytest.mark.parametrize("seed", [0, 1])
    def test_rank3_matches_box_oracle(self, seed):
        P = rank3_data()
        types = enumerate_wall_types(P.ctx)
        rng = random.Random(seed)
        pairs = 0
        while pairs < 4:
            a = (rng.randint(1, 6), rng.randint(1, 6), rng.randint(-3, 3))
            b = (rng.randint(1, 6), rng.randint(1, 6), rng.randint(-3, 3))
            # keep both classes well inside the cone so the crossing
            # search stays small
            if P.pic.norm(a) < 4 or P.pic.norm(b) < 4:
                continue
            if P.pic.inner(a, (5, 3, 1)) <= 0 or P.pic.inner(b, (5, 3, 1)) <= 0:
                continue
            pairs += 1
            found = {tuple(w.D.coords) for w in walls_between(P, a, b, types)}
            assert found == box_walls_between(P, a, b, types, box=14)

    def test_triangle_cover(self):
        # every wall separating the endpoints separates one of the legs
        P = rank3_data()
        types = enumerate_wall_types(P.ctx)
        a, mid, c = (5, 3, 1), (6, 4, 1), (1, 9, 1)
        through = walls_between(P, a, c, types)
        assert all(P.pic.inner(w.D.coords, mid) != 0 for w in through)
        legs = {unsigned(w.D.coords) for w in walls_between(P, a, mid, types)}
        legs |= {unsigned(w.D.coords) for w in walls_between(P, mid, c, types)}
        assert {unsigned(w.D.coords) for w in through} <= legs


class TestSameChamber:
    def test_scaling_invariance(self):
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        assert same_chamber(P, (2, -1), (4, -2), types)

    def test_rank3_perturbation(self):
        P = rank3_data()
        types = enumerate_wall_types(P.ctx)
        assert same_chamber(P, (5, 3, 1), (6, 4, 1), types)

    def test_rank3_distant_pair_differs(self):
        P = rank3_data()
        types = enumerate_wall_types(P.ctx)
        assert not same_chamber(P, (5, 3, 1), (1, 9, 1), types)
        assert len(walls_between(P, (5, 3, 1), (1, 9, 1), types)) == 4

    def test_symmetry(self):
        P = rank3_data()
        types = enumerate_wall_types(P.ctx)
        for a, b in [((5, 3, 1), (6, 4, 1)), ((5, 3, 1), (1, 9, 1))]:
            assert same_chamber(P, a, b, types) == same_chamber(P, b, a, types)


# ------------------------------------------------------------- rank-3 search


class TestRank3Chamber:
    WALLS = {
        ((-2, 2, 1), -10, 2),
        ((0, 0, -1), -2, 2),
        ((1, 0, 1), -2, 1),
    }
    CERTS = {
        (-2, 2, 1): (23, 17, 6),
        (0, 0, -1): (5, 3, 0),
        (1, 0, 1): (11, 6, 3),
    }

    def test_frozen_support(self):
        P = rank3_data()
        rep = supporting_walls_report(
            P, (5, 3, 1), enumerate_wall_types(P.ctx), search_bound=12
        )
        assert {wall_key(w) for w in rep.walls} == self.WALLS
        assert rep.exact is False
        assert rep.search_bound == 12
        for w in rep.walls:
            assert w.certificate == self.CERTS[tuple(w.D.coords)]

    def test_certificates_certify(self):
        P = rank3_data()
        walls = supporting_walls(P, (5, 3, 1), enumerate_wall_types(P.ctx))
        for w in walls:
            assert P.pic.norm(w.certificate) > 0
            assert P.pic.inner(w.certificate, w.D.coords) == 0
            for other in walls:
                if other is not w:
                    assert P.pic.inner(other.D.coords, w.certificate) > 0

    def test_reference_in_dual_cone(self):
        P = rank3_data()
        walls = supporting_walls(P, (5, 3, 1), enumerate_wall_types(P.ctx))
        assert in_dual_cone(P, walls, (5, 3, 1))

    def test_budget_trips(self):
        P = rank3_data()
        with pytest.raises(EnumerationBudgetExceeded):
            supporting_walls_report(
                P, (5, 3, 1), enumerate_wall_types(P.ctx), max_cells=60
            )

    def test_bad_search_bound(self):
        P = rank3_data()
        with pytest.raises(InputError):
            supporting_walls_report(P, (5, 3, 1), enumerate_wall_types(P.ctx), search_bound=0)


# ------------------------------------------------- chamber path consistency


class TestPathConsistency:
    def test_walls_between_vanish_inside_one_chamber(self):
        # classes strictly inside the reference chamber of the golden data
        # are mutually wall-free
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        inside = [(2, -1), (4, -2), (3, -1), (5, -2)]
        for a in inside:
            for b in inside:
                assert same_chamber(P, a, b, types)

    def test_segment_respects_support(self):
        # crossing into the chamber across a supporting wall reports
        # exactly that wall for a short enough hop
        P = p2_data()
        types = enumerate_wall_types(P.ctx)
        walls = supporting_walls(P, (2, -1), types)
        by_D = {tuple(w.D.coords): w for w in walls}
        # hop across the tail wall: reflect omega in (0,1)
        found = walls_between(P, (2, -1), (2, 1), types)
        assert len(found) == 1 and tuple(found[0].D.coords) in by_D
