"""Exact dense linear algebra over Fraction or CycScalar coefficients.

Deterministic pivoting throughout: the pivot is always the first row with a
nonzero entry in the leftmost unresolved column, so reduced echelon forms
(and hence kernel bases) are canonical for a fixed column order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

Row = list


def rref(rows: Sequence[Row], ncols: int) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        piv = mat[rank][col]
        if piv != 1:
            inv = _inverse(piv)
            mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                row_r, row_p = mat[r], mat[rank]
                for c in range(col, ncols):
                    if row_p[c]:
                        row_r[c] = row_r[c] - f * row_p[c]
        pivots.append(col)
        rank += 1
    return mat[:rank], pivots


def _inverse(x):
    if isinstance(x, Fraction):
        return 1 / x
    if isinstance(x, int):
        return Fraction(1, x)
    return x.inverse()


def rank(rows: Sequence[Row], ncols: int) -> int:
    _, pivots = rref(rows, ncols)
    return len(pivots)


def nullspace(rows: Sequence[Row], ncols: int, one=Fraction(1), zero=Fraction(0)) -> list[Row]:
    """Canonical basis of the right kernel, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis: list[Row] = []
    for f in free_cols:
        vec = [zero] * ncols
        vec[f] = one
        for r, p in enumerate(pivots):
            if reduced[r][f]:
                vec[p] = -reduced[r][f]
        basis.append(vec)
    return basis


def mat_vec(rows: Sequence[Row], vec: Sequence, zero=Fraction(0)) -> Row:
    out = []
    for row in rows:
        acc = zero
        for a, b in zip(row, vec):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def membership(basis_rref: Sequence[Row], pivots: Sequence[int], vec: Sequence) -> bool:
    """Whether vec lies in the row span, given the span in rref form."""
    v = list(vec)
    for row, p in zip(basis_rref, pivots):
        if v[p]:
            f = v[p]
            for c in range(len(v)):
                if row[c]:
                    v[c] = v[c] - f * row[c]
    return not any(v)


class Subspace:
    """Row span of exact vectors, stored in reduced echelon form."""

    def __init__(self, vectors: Sequence[Row], ncols: int):
        self.ncols = ncols
        self.rows, self.pivots = rref(vectors, ncols)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def contains(self, vec: Sequence) -> bool:
        return membership(self.rows, self.pivots, vec)

    def contains_all(self, vectors: Sequence[Row]) -> bool:
        return all(self.contains(v) for v in vectors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ncols == other.ncols and self.rows == other.rows

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_all(self.rows)
