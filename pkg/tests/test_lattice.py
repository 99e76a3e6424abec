"""Lattice constructions, discriminant groups, and sublattice operations."""

import random
from fractions import Fraction

import pytest
import sympy

from wallkit import (
    Embedding,
    InputError,
    IntegerLattice,
    direct_sum,
    disc_class,
    discriminant_group,
    divisibility,
    orthogonal_complement,
    primitive_part,
    saturation,
    signature,
    standard_lattice,
)


U = standard_lattice("U")
E8 = standard_lattice("E8(-1)")


class TestStandardLattices:
    def test_hyperbolic_plane(self):
        assert U.gram == ((0, 1), (1, 0))
        assert signature(U) == (1, 1)

    def test_e8_negative_definite_even_unimodular(self):
        assert signature(E8) == (0, 8)
        assert abs(sympy.Matrix(E8.gram).det()) == 1
        assert all(E8.gram[i][i] % 2 == 0 for i in range(8))
        assert sympy.Matrix(E8.gram).is_symmetric()

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_family_lattice_shape(self, n):
        L = standard_lattice("Ln", n)
        assert L.rank == 23
        assert signature(L) == (3, 20)
        # determinant frozen by the signature: 20 negative eigenvalues give
        # a positive determinant of absolute value 2n-2
        assert int(sympy.Matrix(L.gram).det()) == 2 * n - 2

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_unimodular_extension(self, n):
        M = standard_lattice("mukai", n)
        assert M.rank == 24
        assert signature(M) == (4, 20)
        assert int(sympy.Matrix(M.gram).det()) == 1

    def test_rank_one(self):
        L = standard_lattice("rank1", -4)
        assert L.gram == ((-4,),)

    def test_odd_gram_rejected(self):
        with pytest.raises(InputError):
            IntegerLattice(((1,),))

    def test_asymmetric_gram_rejected(self):
        with pytest.raises(InputError):
            IntegerLattice(((0, 1), (2, 0)))


class TestVectors:
    def test_norm_inner(self):
        v = U.vector((1, 1))
        assert v.norm() == 2
        assert v.inner((1, -1)) == 0

    def test_primitive_and_content(self):
        assert U.vector((2, 4)).content() == 2
        assert not U.vector((2, 4)).is_primitive()
        assert U.vector((2, 3)).is_primitive()

    def test_divisibility_examples(self):
        L = standard_lattice("Ln", 3)
        delta = tuple(0 if i < 22 else 1 for i in range(23))
        assert divisibility(L, delta) == 4
        root = tuple(1 if i == 0 else (-1 if i == 1 else 0) for i in range(23))
        assert divisibility(L, root) == 1

    def test_primitive_part(self):
        v = primitive_part(U, (2, 4))
        assert v.coords == (1, 2)


class TestDirectSum:
    def test_gram_blocks(self):
        S = direct_sum([U, standard_lattice("rank1", -2)])
        assert S.rank == 3
        assert S.gram[0][2] == 0 and S.gram[2][2] == -2

    def test_block_tags_survive(self):
        S = direct_sum([U, U])
        assert S.blocks.count("U") == 2


class TestDiscriminantGroup:
    @pytest.mark.parametrize("n", [2, 3, 5, 7])
    def test_family_group_is_cyclic(self, n):
        L = standard_lattice("Ln", n)
        A = discriminant_group(L)
        assert A.invariant_factors == (2 * n - 2,)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_q_value_of_tail_generator(self, n):
        L = standard_lattice("Ln", n)
        A = discriminant_group(L)
        delta = tuple(0 if i < 22 else 1 for i in range(23))
        cls = A.class_of(delta, 2 * n - 2)
        assert A.q(cls) == 2 - Fraction(1, 2 * n - 2)

    def test_unimodular_trivial(self):
        A = discriminant_group(E8)
        assert A.invariant_factors == ()

    def test_order_and_class_arithmetic(self):
        L = standard_lattice("rank1", -6)
        A = discriminant_group(L)
        assert A.invariant_factors == (6,)
        c = A.class_of((1,), 6)
        assert A.element_order(c) == 6
        assert A.q(c) == Fraction(-1, 6) % 2

    def test_disc_class_of_integral_class_is_zero(self):
        L = standard_lattice("Ln", 3)
        root = tuple(1 if i == 0 else (-1 if i == 1 else 0) for i in range(23))
        assert disc_class(L, root, 1) == (0,)


def _columns(emb):
    return [tuple(col) for col in zip(*emb.matrix)]


class TestSublattices:
    def test_orthogonal_complement_in_u(self):
        comp = orthogonal_complement(U, ((1, 1),))
        cols = _columns(comp)
        assert len(cols) == 1
        v = cols[0]
        assert U.inner(v, (1, 1)) == 0
        assert v in ((1, -1), (-1, 1))

    def test_saturation_is_idempotent(self):
        rng = random.Random(17)
        L = direct_sum([U, U])
        for _ in range(25):
            vecs = [tuple(rng.randint(-3, 3) for _ in range(4)) for _ in range(2)]
            cols = tuple(zip(*vecs))  # vectors as columns
            if not any(any(v) for v in vecs):
                continue
            sat = saturation(L, cols)
            again = saturation(L, sat)
            assert sat.matrix == again.matrix

    def test_saturation_recovers_full_multiple(self):
        # span{2e} saturates to span{e}
        sat = saturation(U, ((2,), (0,)))
        assert _columns(sat) == [(1, 0)]

    def test_complement_pairs_to_zero(self):
        rng = random.Random(19)
        L = standard_lattice("Ln", 2)
        for _ in range(10):
            v = tuple(rng.randint(-2, 2) for _ in range(23))
            if not any(v):
                continue
            comp = orthogonal_complement(L, (v,))
            for w in _columns(comp)[:5]:
                assert L.inner(v, w) == 0


class TestEmbedding:
    def test_gram_compatibility_enforced(self):
        L3 = standard_lattice("Ln", 3)
        rows = tuple((1,) if i == 22 else (0,) for i in range(23))
        src = standard_lattice("rank1", -4)
        emb = Embedding(src, L3, rows)
        assert emb.apply((1,)).norm() == -4
        bad_src = standard_lattice("rank1", -2)
        with pytest.raises(InputError):
            Embedding(bad_src, L3, rows)

    def test_apply_rational(self):
        emb = Embedding(U, U, ((1, 0), (0, 1)))
        assert emb.apply_rational((Fraction(1, 2), Fraction(1, 3))) == (
            Fraction(1, 2),
            Fraction(1, 3),
        )
