"""Exact integer matrix algebra for abelianization invariants.

Matrices are lists of lists of Python ints (arbitrary precision, row
major).  Everything here is exact; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .words import Presentation, Word, exponent_sum


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    if not a:
        return []
    n, k = len(a), len(a[0]) if a[0] else 0
    m = len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                oi = out[i]
                for j in range(m):
                    oi[j] += x * bt[j]
    return out


def mat_copy(a):
    return [row[:] for row in a]


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def determinant(a):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = mat_copy(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def int_rank(a):
    """Rank over Q by fraction-free elimination."""
    if not a or not a[0]:
        return 0
    m = mat_copy(a)
    rows, cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for j in range(cols):
        piv = next((i for i in range(rank, rows) if m[i][j]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, rows):
            for jj in range(j + 1, cols):
                m[i][jj] = (m[i][jj] * m[rank][j] - m[i][j] * m[rank][jj]) // prev
            m[i][j] = 0
        prev = m[rank][j]
        rank += 1
        if rank == rows:
            break
    return rank


@dataclass(frozen=True)
class SmithDecomposition:
    """U.M.V = D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: list
    D: list
    V: list

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(m_in) -> SmithDecomposition:
    """Smith normal form over Z.

    Pivots are chosen with smallest nonzero absolute value to limit entry
    growth.  The diagonal is non-negative and forms a divisibility chain.
    """
    m = mat_copy(m_in)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def row_op(i, j, q):  # row_i -= q * row_j
        for t in range(cols):
            m[i][t] -= q * m[j][t]
        for t in range(rows):
            u[i][t] -= q * u[j][t]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in m:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    k = 0
    while k < min(rows, cols):
        # smallest nonzero entry in the remaining block becomes the pivot
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        dirty = False
        for i in range(k + 1, rows):
            if m[i][k]:
                q = m[i][k] // m[k][k]
                row_op(i, k, q)
                if m[i][k]:
                    dirty = True
        for j in range(k + 1, cols):
            if m[k][j]:
                q = m[k][j] // m[k][k]
                col_op(j, k, q)
                if m[k][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide everything that remains
        offender = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if m[i][j] % m[k][k]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(k, offender, -1)
            continue
        k += 1

    for i in range(min(rows, cols)):
        if m[i][i] < 0:
            for t in range(cols):
                m[i][t] = -m[i][t]
            for t in range(rows):
                u[i][t] = -u[i][t]
    return SmithDecomposition(u, m, v)


@dataclass(frozen=True)
class AbelianInvariants:
    """Free rank plus torsion coefficients in divisibility order."""

    betti: int
    torsion: tuple

    def is_z_squared(self):
        return self.betti == 2 and not self.torsion

    def __str__(self):
        parts = ["Z"] * self.betti + [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "1"


def exponent_matrix(p: Presentation):
    """n x m matrix of signed generator counts, one column per relator."""
    return [[exponent_sum(r, g) for r in p.relators] for g in range(p.ngens)]


def abelianization(p: Presentation) -> AbelianInvariants:
    mat = exponent_matrix(p)
    if p.ngens == 0:
        return AbelianInvariants(0, ())
    snf = smith_normal_form(mat)
    diag = snf.diagonal
    rank = sum(1 for d in diag if d)
    torsion = tuple(d for d in diag if d > 1)
    return AbelianInvariants(p.ngens - rank, torsion)


def hermite_rows(basis):
    """Row-style Hermite normal form: positive pivots, entries above a
    pivot reduced into [0, pivot), rows ordered by pivot column."""
    rows = [list(r) for r in basis if any(r)]
    if not rows:
        return []
    cols = len(rows[0])
    out = []
    for col in range(cols):
        while True:
            nz = [r for r in rows if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                q = r[col] // piv[col]
                for t in range(cols):
                    r[t] -= q * piv[t]
            rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col]]
        if nz:
            piv = nz[0]
            if piv[col] < 0:
                for t in range(cols):
                    piv[t] = -piv[t]
            out.append(piv)
            rows = [r for r in rows if r is not piv]
    # entries above each pivot reduced into [0, pivot)
    for i in reversed(range(len(out))):
        pc = next(j for j in range(cols) if out[i][j])
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                for t in range(cols):
                    out[k][t] -= q * out[i][t]
    return out


@dataclass(frozen=True)
class Chi:
    """Integer vector defining a surjection G -> Z, one value per generator."""

    values: tuple

    def of_word(self, w: Word) -> int:
        return sum(self.values[abs(lt) - 1] * (1 if lt > 0 else -1) for lt in w)

    def __iter__(self):
        return iter(self.values)


def hom_to_Z_basis(p: Presentation):
    """Hermite-reduced basis of Hom(G, Z) as integer vectors on generators.

    Raises ValueError when the first Betti number is zero.
    """
    n = p.ngens
    mat = exponent_matrix(p)  # n x m; chi must satisfy chi . column = 0
    a = transpose(mat)  # m x n, kernel wanted
    if not a:
        kernel = identity_matrix(n)
    else:
        snf = smith_normal_form(a)
        diag = snf.diagonal
        kernel = []
        for j in range(n):
            if j >= len(diag) or diag[j] == 0:
                kernel.append([snf.V[i][j] for i in range(n)])
    basis = hermite_rows(kernel)
    if not basis:
        raise ValueError("first Betti number is zero; no homomorphism onto Z")
    return [Chi(tuple(row)) for row in basis]


def free_ab_projection(p: Presentation):
    """Rows of a matrix projecting Z^n onto ab(G) = Z^betti."""
    mat = exponent_matrix(p)
    snf = smith_normal_form(mat)
    diag = snf.diagonal
    rows = [snf.U[i] for i in range(p.ngens)
            if i >= len(diag) or diag[i] == 0]
    return rows


def image_span_rank(p: Presentation, words: Sequence[Word]):
    """Rank of the span of the words' images in ab(G), and whether that
    span has infinite index (rank < betti)."""
    proj = free_ab_projection(p)
    betti = len(proj)
    if not words or betti == 0:
        return 0, betti > 0
    vecs = []
    for w in words:
        e = [exponent_sum(w, g) for g in range(p.ngens)]
        vecs.append([sum(row[g] * e[g] for g in range(p.ngens)) for row in proj])
    rank = int_rank(vecs)
    return rank, rank < betti


def invariant_factors_oracle(m):
    """Independent Smith-diagonal oracle: d1...dk = gcd of k x k minors.

    Exponential in size; used by tests on small matrices only.
    """
    from itertools import combinations

    rows = len(m)
    cols = len(m[0]) if rows else 0
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                sub = [[m[i][j] for j in ci] for i in ri]
                g = gcd(g, determinant(sub))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out
