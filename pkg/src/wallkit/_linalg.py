"""Exact integer / rational matrix routines.

Everything in this module is exact: matrices are tuples of tuples with
``int`` or ``fractions.Fraction`` entries, and no routine ever touches
floating point.  Row/column index conventions follow the usual
mathematician's reading: ``M[i][j]`` is row ``i``, column ``j``; vectors
are plain tuples and are treated as columns.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


def freeze(rows: Iterable[Sequence]) -> tuple:
    return tuple(tuple(row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*[tuple(r) for r in m])) if m else ()


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_mat_vec(x: Sequence, a: Sequence[Sequence], y: Sequence):
    """x^T A y, exactly."""
    return sum(xi * sum(aij * yj for aij, yj in zip(row, y)) for xi, row in zip(x, a))


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form with transforms: returns (P, D, Q), P*M*Q = D.

    P and Q are unimodular; D is diagonal (rectangular allowed) with
    nonnegative entries d_1 | d_2 | ... followed by zeros.  The pivot
    strategy (smallest absolute value in the trailing block) is
    deterministic, so repeated calls agree bit for bit.
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    p = [[int(i == j) for j in range(nr)] for i in range(nr)]
    q = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, k):  # row_i += k * row_j
        a[i] = [x + k * y for x, y in zip(a[i], a[j])]
        p[i] = [x + k * y for x, y in zip(p[i], p[j])]

    def add_col(i, j, k):  # col_i += k * col_j
        for row in a:
            row[i] += k * row[j]
        for row in q:
            row[i] += k * row[j]

    t = 0
    while t < min(nr, nc):
        piv = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best = v
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            restart = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:  # euclidean remainder: promote, try again
                        swap_rows(t, i)
                        restart = True
            if restart:
                continue
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        restart = True
            if restart:
                continue
            # pivot must divide the whole trailing block
            d = a[t][t]
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)  # col t entry of row `bad` is 0, pivot survives
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            p[t] = [-x for x in p[t]]
        t += 1
    return freeze(p), freeze(a), freeze(q)


def snf_diagonal(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    _, d, _ = smith_normal_form(m)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)))


def kernel_basis(m: Sequence[Sequence[int]]) -> tuple[IntVector, ...]:
    """Basis of the integer kernel {x : M x = 0}, as column vectors.

    The basis is automatically saturated (it spans the rational kernel
    intersected with Z^n).
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    if nc == 0:
        return ()
    _, d, q = smith_normal_form(m)
    rank = sum(1 for i in range(min(nr, nc)) if d[i][i] != 0)
    cols = transpose(q)
    return tuple(cols[j] for j in range(rank, nc))


def solve_int(m: Sequence[Sequence[int]], b: Sequence[int]) -> IntVector | None:
    """One integer solution of M x = b, or None if none exists."""
    nr = len(m)
    nc = len(m[0]) if nr else 0
    p, d, q = smith_normal_form(m)
    pb = mat_vec(p, b)
    y = [0] * nc
    for i in range(nr):
        di = d[i][i] if i < min(nr, nc) else 0
        if di:
            if pb[i] % di:
                return None
            y[i] = pb[i] // di
        elif pb[i] != 0:
            return None
    return mat_vec(q, y)


def solve_rational(m: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of M x = b (Gauss elimination), or None."""
    nr = len(m)
    nc = len(m[0]) if nr else 0
    a = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(m, b)]
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if a[i][nc] != 0:
            return None
    x = [Fraction(0)] * nc
    for i, c in enumerate(pivots):
        x[c] = a[i][nc]
    return tuple(x)


def rank(m: Sequence[Sequence]) -> int:
    nr = len(m)
    nc = len(m[0]) if nr else 0
    a = [[Fraction(x) for x in row] for row in m]
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def invert_unimodular(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix, as an integer matrix."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = a[c][c]
        a[c] = [x / inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = []
    for i in range(n):
        row = a[i][n:]
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def signature_of(gram: Sequence[Sequence[int]]) -> tuple[int, int]:
    """Inertia (n_+, n_-) of a nondegenerate symmetric matrix, exactly.

    Symmetric elimination over Fraction; a zero diagonal is repaired with
    the congruence e_i -> e_i + e_j, which is valid because some
    off-diagonal entry survives whenever the form is nondegenerate.
    Raises ValueError on a degenerate form.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    act = list(range(n))
    pos = neg = 0
    while act:
        piv = next((i for i in act if a[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in act for j in act if i != j and a[i][j] != 0), None
            )
            if pair is None:
                raise ValueError("degenerate symmetric form")
            i, j = pair
            aii, aij, ajj = a[i][i], a[i][j], a[j][j]
            for k in act:
                if k != i:
                    a[i][k] += a[j][k]
                    a[k][i] = a[i][k]
            a[i][i] = aii + 2 * aij + ajj
            continue
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        act.remove(piv)
        for x in act:
            for y in act:
                a[x][y] -= a[x][piv] * a[piv][y] / d
        for x in act:
            a[x][piv] = Fraction(0)
            a[piv][x] = Fraction(0)
    return pos, neg
