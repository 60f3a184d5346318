"""Fraction-free exact elimination over the integers."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence


def rref_fraction_free(rows: Sequence[Sequence[int]]):
    """Bareiss-style Gauss-Jordan elimination on an integer matrix.

    Returns ``(R, den, pivots)`` where ``R / den`` is the reduced row echelon
    form: every pivot entry of ``R`` equals ``den`` and all divisions along
    the way are exact.
    """
    M = [[int(v) for v in row] for row in rows]
    m = len(M)
    ncols = len(M[0]) if m else 0
    den = 1
    pivots = []
    r = 0
    for j in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][j]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv_row = M[r]
        piv = piv_row[j]
        for i in range(m):
            if i == r:
                continue
            row = M[i]
            a = row[j]
            for k in range(ncols):
                q, rem = divmod(piv * row[k] - a * piv_row[k], den)
                assert rem == 0, "fraction-free division was not exact"
                row[k] = q
        den = piv
        pivots.append(j)
        r += 1
    if den < 0:
        M = [[-v for v in row] for row in M]
        den = -den
    return M[:r], den, pivots


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(rref_fraction_free(rows)[2])


def primitive(vec: Sequence[int]) -> list[int]:
    """Divide by the gcd and make the first nonzero entry positive."""
    vec = [int(v) for v in vec]
    g = reduce(gcd, vec, 0)
    if g == 0:
        return vec
    lead = next(v for v in vec if v)
    if lead < 0:
        g = -g
    return [v // g for v in vec]


def nullspace(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Primitive integer basis of the rational kernel, one vector per free column.

    The basis comes from the reduced echelon form, so it depends only on the
    kernel itself and not on the particular rows used to cut it out.
    """
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[int(i == f) for i in range(ncols)] for f in range(ncols)]
    R, den, pivots = rref_fraction_free(rows)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = den
        for row, pj in zip(R, pivots):
            vec[pj] = -row[f]
        basis.append(primitive(vec))
    return basis


def in_span(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    """True iff ``vec`` is a rational combination of ``basis``."""
    if not basis:
        return not any(vec)
    return rank(list(basis) + [list(vec)]) == rank(basis)


def coordinates(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> list[Fraction] | None:
    """Solve sum(c_i * basis_i) = vec exactly; None when vec is outside the span."""
    k = len(basis)
    ncols = len(vec)
    aug = [[basis[i][j] for i in range(k)] + [vec[j]] for j in range(ncols)]
    R, den, pivots = rref_fraction_free(aug)
    if k in pivots:
        return None
    out = [Fraction(0)] * k
    for row, pj in zip(R, pivots):
        out[pj] = Fraction(row[k], den)
    return out


def common_denominator(values: Sequence[Fraction]) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)
