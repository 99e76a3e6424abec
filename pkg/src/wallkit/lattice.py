"""Even integer lattices: Gram data, duals, embeddings, discriminant forms.

A lattice here is a free Z-module of finite rank with an even symmetric
integer Gram matrix, always handled in a fixed basis.  Vectors are
coordinate tuples in that basis.  All arithmetic is exact (int/Fraction).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import _linalg as la
from .errors import InputError

__all__ = [
    "IntegerLattice",
    "LatticeVector",
    "Embedding",
    "DiscriminantGroup",
    "inner",
    "direct_sum",
    "standard_lattice",
    "smith_normal_form",
    "discriminant_group",
    "divisibility",
    "is_primitive",
    "primitive_part",
    "disc_class",
    "orthogonal_complement",
    "saturation",
    "signature",
]

smith_normal_form = la.smith_normal_form


@dataclass(frozen=True)
class IntegerLattice:
    """An even lattice given by its Gram matrix in a fixed basis.

    `blocks` records the orthogonal summands the lattice was assembled
    from (constructor bookkeeping, e.g. ("U", "U", "E8(-1)", "<-4>")).
    It is trusted only for lattices built by `standard_lattice` /
    `direct_sum`; ad hoc Gram matrices get no block tags.
    """

    gram: tuple[tuple[int, ...], ...]
    label: str | None = None
    blocks: tuple[str, ...] = ()

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise InputError("Gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise InputError(
                    f"lattice is not even: diagonal entry {g[i][i]} at index {i}"
                )
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise InputError("Gram matrix must be symmetric")
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @functools.cached_property
    def det(self) -> int:
        return la.bareiss_det(self.gram)

    @property
    def is_degenerate(self) -> bool:
        return self.det == 0

    def inner(self, x: Sequence, y: Sequence):
        if len(x) != self.rank or len(y) != self.rank:
            raise InputError("vector length does not match lattice rank")
        return la.vec_mat_vec(x, self.gram, y)

    def norm(self, x: Sequence):
        return self.inner(x, x)

    def vector(self, coords: Sequence[int]) -> "LatticeVector":
        return LatticeVector(self, tuple(int(c) for c in coords))

    def basis_vector(self, i: int) -> "LatticeVector":
        return self.vector(tuple(int(j == i) for j in range(self.rank)))

    def __repr__(self):  # keep pytest output readable for rank-23 lattices
        name = self.label or "lattice"
        return f"IntegerLattice({name}, rank={self.rank})"


@dataclass(frozen=True)
class LatticeVector:
    lattice: IntegerLattice
    coords: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        if len(c) != self.lattice.rank:
            raise InputError("coordinate length does not match lattice rank")
        object.__setattr__(self, "coords", c)

    def norm(self) -> int:
        return self.lattice.norm(self.coords)

    def inner(self, other: "LatticeVector | Sequence") -> int:
        coords = other.coords if isinstance(other, LatticeVector) else other
        return self.lattice.inner(self.coords, coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def content(self) -> int:
        return gcd(*self.coords) if any(self.coords) else 0

    def is_primitive(self) -> bool:
        return self.content() == 1

    def div(self) -> int:
        return divisibility(self.lattice, self.coords)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(-c for c in self.coords))

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        if other.lattice != self.lattice:
            raise InputError("cannot add vectors from different lattices")
        return LatticeVector(
            self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return self + (-other)

    def scaled(self, k: int) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(k * c for c in self.coords))


@dataclass(frozen=True)
class Embedding:
    """An isometric embedding source -> target.

    `matrix` has shape (target.rank, source.rank); column j holds the
    target coordinates of the image of the j-th source basis vector.
    Compatibility matrix^T * G_target * matrix == G_source is enforced at
    construction, so an Embedding object is always a genuine isometry.
    """

    source: IntegerLattice
    target: IntegerLattice
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != self.target.rank or any(
            len(row) != self.source.rank for row in m
        ):
            raise InputError("embedding matrix has wrong shape")
        induced = la.mat_mul(la.mat_mul(la.transpose(m), self.target.gram), m)
        if induced != self.source.gram:
            raise InputError("embedding does not respect the Gram matrices")

    def apply(self, v: "LatticeVector | Sequence[int]") -> LatticeVector:
        coords = v.coords if isinstance(v, LatticeVector) else tuple(v)
        return LatticeVector(self.target, la.mat_vec(self.matrix, coords))

    def apply_rational(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(Fraction(x) for x in la.mat_vec(self.matrix, tuple(v)))

    def is_primitive(self) -> bool:
        """True when the image is a saturated (primitive) sublattice."""
        diag = la.snf_diagonal(self.matrix)
        return all(d == 1 for d in diag)

    def preimage(self, v: "LatticeVector | Sequence[int]") -> LatticeVector | None:
        coords = v.coords if isinstance(v, LatticeVector) else tuple(v)
        sol = la.solve_int(self.matrix, coords)
        return None if sol is None else LatticeVector(self.source, sol)


def inner(lattice: IntegerLattice, x: Sequence, y: Sequence):
    return lattice.inner(x, y)


def signature(lattice: IntegerLattice) -> tuple[int, int]:
    """Inertia (n_+, n_-); InputError on a degenerate lattice."""
    try:
        return la.signature_of(lattice.gram)
    except ValueError as exc:
        raise InputError(f"signature of a degenerate lattice: {exc}") from exc


def direct_sum(parts: Iterable[IntegerLattice], label: str | None = None) -> IntegerLattice:
    parts = list(parts)
    total = sum(p.rank for p in parts)
    rows = []
    offset = 0
    for p in parts:
        for row in p.gram:
            rows.append((0,) * offset + tuple(row) + (0,) * (total - offset - p.rank))
        offset += p.rank
    blocks: list[str] = []
    for p in parts:
        blocks.extend(p.blocks if p.blocks else (p.label or "block",))
    if label is None:
        label = " + ".join(p.label or "?" for p in parts)
    return IntegerLattice(tuple(rows), label=label, blocks=tuple(blocks))


_U_GRAM = ((0, 1), (1, 0))

# Negated E8 Cartan matrix; node numbering has the branch node fourth in
# the chain and node 2 hanging off it.
_E8_MINUS_GRAM = (
    (-2, 0, 1, 0, 0, 0, 0, 0),
    (0, -2, 0, 1, 0, 0, 0, 0),
    (1, 0, -2, 1, 0, 0, 0, 0),
    (0, 1, 1, -2, 1, 0, 0, 0),
    (0, 0, 0, 1, -2, 1, 0, 0),
    (0, 0, 0, 0, 1, -2, 1, 0),
    (0, 0, 0, 0, 0, 1, -2, 1),
    (0, 0, 0, 0, 0, 0, 1, -2),
)


def standard_lattice(name: str, param: int | None = None) -> IntegerLattice:
    """Named building blocks: "U", "E8(-1)", "rank1" (with even param k),
    "Ln" (with param n >= 2), "mukai".
    """
    if name == "U":
        return IntegerLattice(_U_GRAM, label="U", blocks=("U",))
    if name == "E8(-1)":
        return IntegerLattice(_E8_MINUS_GRAM, label="E8(-1)", blocks=("E8(-1)",))
    if name == "rank1":
        if param is None:
            raise InputError("rank1 lattice needs its square as param")
        if param % 2:
            raise InputError(f"rank1 lattice <{param}> is not even")
        return IntegerLattice(((param,),), label=f"<{param}>", blocks=(f"<{param}>",))
    if name == "Ln":
        if param is None or param < 2:
            raise InputError("Ln needs param n >= 2")
        u = standard_lattice("U")
        e8 = standard_lattice("E8(-1)")
        tail = standard_lattice("rank1", -(2 * param - 2))
        return direct_sum([u, u, u, e8, e8, tail], label=f"L{param}")
    if name == "mukai":
        u = standard_lattice("U")
        e8 = standard_lattice("E8(-1)")
        # the distinguished hyperbolic plane sits in the last two coordinates
        return direct_sum([u, u, u, e8, e8, u], label="Mukai")
    raise InputError(f"unknown standard lattice {name!r}")


def divisibility(lattice: IntegerLattice, v: Sequence[int]) -> int:
    """div(v) = positive generator of the pairing ideal (v, L)."""
    coords = v.coords if isinstance(v, LatticeVector) else tuple(int(x) for x in v)
    pairings = la.mat_vec(lattice.gram, coords)
    d = gcd(*pairings) if any(pairings) else 0
    if d == 0:
        raise InputError("divisibility undefined: vector pairs trivially with lattice")
    return d


def is_primitive(lattice: IntegerLattice, v: Sequence[int]) -> bool:
    coords = v.coords if isinstance(v, LatticeVector) else tuple(int(x) for x in v)
    return any(coords) and gcd(*coords) == 1


def primitive_part(lattice: IntegerLattice, v: Sequence[int]) -> LatticeVector:
    coords = v.coords if isinstance(v, LatticeVector) else tuple(int(x) for x in v)
    if not any(coords):
        raise InputError("primitive part of the zero vector is undefined")
    c = gcd(*coords)
    return LatticeVector(lattice, tuple(x // c for x in coords))


@dataclass(frozen=True)
class DiscriminantGroup:
    """The finite quadratic form (A_L = L^dual / L, q, b).

    `invariant_factors` lists the nontrivial cyclic orders d_1 | d_2 | ...;
    `generators` are rational coordinate vectors (in the lattice basis) of
    the corresponding dual classes.  Elements are exponent tuples over the
    generators.  q takes values in Q/2Z normalized to [0, 2); b in Q/Z
    normalized to [0, 1).
    """

    lattice: IntegerLattice
    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    _qinv: tuple[tuple[int, ...], ...] = field(repr=False)
    _diag: tuple[int, ...] = field(repr=False)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def _rational_rep(self, exponents: Sequence[int]) -> tuple[Fraction, ...]:
        if len(exponents) != len(self.invariant_factors):
            raise InputError("exponent tuple has wrong length")
        n = self.lattice.rank
        out = [Fraction(0)] * n
        for e, g in zip(exponents, self.generators):
            for i in range(n):
                out[i] += e * g[i]
        return tuple(out)

    def q(self, exponents: Sequence[int]) -> Fraction:
        x = self._rational_rep(exponents)
        val = la.vec_mat_vec(x, self.lattice.gram, x)
        return Fraction(val) % 2

    def b(self, e1: Sequence[int], e2: Sequence[int]) -> Fraction:
        x = self._rational_rep(e1)
        y = self._rational_rep(e2)
        val = la.vec_mat_vec(x, self.lattice.gram, y)
        return Fraction(val) % 1

    def element_order(self, exponents: Sequence[int]) -> int:
        if len(exponents) != len(self.invariant_factors):
            raise InputError("exponent tuple has wrong length")
        out = 1
        for e, d in zip(exponents, self.invariant_factors):
            out = lcm(out, d // gcd(d, e % d))
        return out

    def reduce(self, exponents: Sequence[int]) -> tuple[int, ...]:
        return tuple(e % d for e, d in zip(exponents, self.invariant_factors))

    def class_of(self, v: Sequence[int], m: int) -> tuple[int, ...]:
        """Exponent tuple of [v/m] in A_L; InputError if v/m is not dual."""
        coords = v.coords if isinstance(v, LatticeVector) else tuple(int(x) for x in v)
        if m <= 0:
            raise InputError("denominator must be positive")
        u = la.mat_vec(self._qinv, coords)
        full = self._diag
        exps = []
        for ui, di in zip(u, full):
            num = di * ui
            if num % m:
                raise InputError(f"{coords} / {m} does not lie in the dual lattice")
            exps.append((num // m) % di if di > 1 else 0)
        return tuple(
            e for e, d in zip(exps, full) if d > 1
        )


@functools.lru_cache(maxsize=None)
def discriminant_group(lattice: IntegerLattice) -> DiscriminantGroup:
    if lattice.is_degenerate:
        raise InputError("discriminant group of a degenerate lattice")
    p, d, q = la.smith_normal_form(lattice.gram)
    n = lattice.rank
    diag = tuple(d[i][i] for i in range(n))
    factors = []
    gens = []
    cols = la.transpose(q)
    for i in range(n):
        if diag[i] > 1:
            factors.append(diag[i])
            gens.append(tuple(Fraction(x, diag[i]) for x in cols[i]))
    qinv = la.invert_unimodular(q)
    return DiscriminantGroup(
        lattice=lattice,
        invariant_factors=tuple(factors),
        generators=tuple(gens),
        _qinv=qinv,
        _diag=diag,
    )


def disc_class(lattice: IntegerLattice, v: Sequence[int], m: int) -> tuple[int, ...]:
    """Class of v/m in the discriminant group, as an exponent tuple."""
    return discriminant_group(lattice).class_of(v, m)


def orthogonal_complement(
    lattice: IntegerLattice, vectors: Sequence[Sequence[int]]
) -> Embedding:
    """Embedding of {x in L : (x, v_i) = 0 for all i}, saturated by construction."""
    rows = []
    for v in vectors:
        coords = v.coords if isinstance(v, LatticeVector) else tuple(int(x) for x in v)
        if len(coords) != lattice.rank:
            raise InputError("vector length does not match lattice rank")
        rows.append(la.mat_vec(lattice.gram, coords))
    basis = la.kernel_basis(tuple(rows))
    matrix = la.transpose(basis)
    if not basis:
        matrix = tuple(() for _ in range(lattice.rank))
    induced = la.mat_mul(la.mat_mul(basis, lattice.gram), la.transpose(basis)) if basis else ()
    sub = IntegerLattice(induced, label=f"({lattice.label or 'L'})-perp")
    return Embedding(source=sub, target=lattice, matrix=matrix)


def saturation(lattice: IntegerLattice, sub) -> Embedding:
    """Saturation of a sublattice: smallest primitive sublattice containing it.

    `sub` is an Embedding into `lattice` or a coordinate matrix whose
    columns span the sublattice.  A primitive input is returned unchanged
    (same basis), so the operation is idempotent on its image.
    """
    if isinstance(sub, Embedding):
        if sub.target != lattice:
            raise InputError("embedding target does not match lattice")
        matrix = sub.matrix
    else:
        matrix = tuple(tuple(int(x) for x in row) for row in sub)
        if len(matrix) != lattice.rank:
            raise InputError("sublattice matrix must have one row per lattice coordinate")
    ncols = len(matrix[0]) if matrix else 0
    p, d, q = la.smith_normal_form(matrix)
    rk = sum(1 for i in range(min(lattice.rank, ncols)) if d[i][i] != 0)
    if rk == ncols and all(d[i][i] == 1 for i in range(rk)):
        if isinstance(sub, Embedding):
            return sub
        cols = la.transpose(matrix)
        induced = la.mat_mul(la.mat_mul(cols, lattice.gram), la.transpose(cols))
        return Embedding(IntegerLattice(induced), lattice, matrix)
    pinv = la.invert_unimodular(p)
    pcols = la.transpose(pinv)
    basis = tuple(pcols[i] for i in range(rk))
    matrix_sat = la.transpose(basis)
    induced = la.mat_mul(la.mat_mul(basis, lattice.gram), la.transpose(basis))
    sat = IntegerLattice(induced, label="saturation")
    return Embedding(source=sat, target=lattice, matrix=matrix_sat)
