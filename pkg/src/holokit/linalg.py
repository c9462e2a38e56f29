"""Fraction-free (Bareiss) elimination and exact nullspaces."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .exactmath import lcm_all


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Scale each row to a primitive integer row (same row space)."""
    out = []
    for row in rows:
        m = lcm_all([Fraction(c).denominator for c in row])
        ints = [int(Fraction(c) * m) for c in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        out.append([v // g for v in ints] if g > 1 else ints)
    return out


def bareiss_rref(mat: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free Gauss-Jordan on an integer matrix.

    Returns ``(reduced, pivot_columns, d)``: every pivot entry of the first
    ``rank`` rows equals ``d`` and pivot columns are zero elsewhere.
    Works on a copy.
    """
    a = [list(r) for r in mat]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        for i in range(nrows):
            if i == r:
                continue
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            # Bareiss step: exact division by the previous pivot
            for j in range(ncols):
                row_i[j] = (piv * row_i[j] - f * row_r[j]) // prev
        # rows above were scaled by piv/prev, so previous pivots are now piv
        pivots.append(c)
        prev = piv
        r += 1
    for i in range(r):
        # all pivot entries equal the last pivot after the full sweep
        assert a[i][pivots[i]] == prev
    return a, pivots, prev


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[int]], int]:
    """Integer basis of the right kernel, one vector per free column in
    column order, plus the rank."""
    if not rows:
        basis = [[int(i == f) for i in range(ncols)] for f in range(ncols)]
        return basis, 0
    red, pivots, d = bareiss_rref(integer_rows(rows))
    rank = len(pivots)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = d
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        g = 0
        for x in v:
            g = gcd(g, x)
        basis.append([x // g for x in v])
    return basis, rank
