"""Small exact linear-algebra kernels over any field with Python operators.

Entries may be ``int``, ``Fraction`` or :class:`~scharacters.cyclo.Cyclotomic`;
everything is Gauss-Jordan with exact pivots, so sizes stay in the tens.
"""

from __future__ import annotations

from fractions import Fraction


class SingularMatrixError(ValueError):
    pass


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def _pivot_cost(x) -> int:
    # rational pivots are far cheaper to invert than irrational ones
    return len(x.terms) if hasattr(x, "terms") and x.n != 1 else 0


def inverse(matrix, one=1):
    """Inverse of a square matrix (list of rows)."""
    n = len(matrix)
    a = [list(row) + [one if i == j else one - one for j in range(n)] for i, row in enumerate(matrix)]
    if any(len(row) != 2 * n for row in a):
        raise ValueError("matrix is not square")
    for col in range(n):
        best = None
        for r in range(col, n):
            if not _is_zero(a[r][col]):
                cost = _pivot_cost(a[r][col])
                if best is None or cost < best[0]:
                    best = (cost, r)
                    if cost == 0:
                        break
        if best is None:
            raise SingularMatrixError("matrix is singular")
        r = best[1]
        a[col], a[r] = a[r], a[col]
        p = a[col][col]
        inv = p.inverse() if hasattr(p, "inverse") else Fraction(1) / p
        a[col] = [x * inv if not _is_zero(x) else x for x in a[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if _is_zero(f):
                continue
            pivot_row = a[col]
            a[r] = [x - f * y if not _is_zero(y) else x for x, y in zip(a[r], pivot_row)]
    return [row[n:] for row in a]


def rank(rows) -> int:
    """Rank of a matrix with rational entries."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        for i in range(r + 1, len(a)):
            f = a[i][col]
            if f:
                f /= p
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def affine_rank(points) -> int:
    """Dimension of the affine hull of a finite point set (``-1`` if empty)."""
    points = list(points)
    if not points:
        return -1
    base = points[0]
    return rank([[x - y for x, y in zip(p, base)] for p in points[1:]])
