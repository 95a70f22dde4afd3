"""Integer points of S-character simplices by project-and-lift.

The enumerator fixes coordinates one at a time.  For every prefix length
``k`` the projection of the polytope onto the first ``k`` (reordered)
coordinates is described by its facets, which are computed once by
Fourier-Motzkin elimination; a candidate inequality is kept only if the
projected vertices it is tight on span a hyperplane.  The integer range of the
next coordinate over a fibre then follows from those facets directly.

Constraints over an irrational field are replaced by a rational outer
relaxation before elimination (rigorous interval enclosures of the
coefficients, widened over the bounding box), and every candidate leaf is
checked against the original constraints with exact arithmetic.  The result is
therefore exactly the set of integer points, whatever the field.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .cyclo import Cyclotomic, as_cyclotomic, enclosure, real_sign
from .linalg import SingularMatrixError, inverse, rank

__all__ = [
    "ConstraintSystem",
    "constraints_from_simplex",
    "strengthen",
    "enumerate_points",
    "iter_point_blocks",
    "count_points",
    "brute_force",
    "EnumerationError",
    "UnboundedError",
    "StrengthenError",
    "LimitExceeded",
    "EnumerationTimeout",
    "OracleTooLarge",
]

ENCLOSURE_PREC = 64
CHUNK = 1 << 16
_U = 2.0**-53
_MOD_PRIMES = (2305843009213693951, 4611686018427387847)


class EnumerationError(RuntimeError):
    pass


class UnboundedError(EnumerationError):
    """The constraint system has an unbounded direction."""


class StrengthenError(ValueError):
    pass


class LimitExceeded(EnumerationError):
    def __init__(self, limit: int):
        super().__init__(f"more than {limit} lattice points")
        self.limit = limit


class EnumerationTimeout(EnumerationError):
    pass


class OracleTooLarge(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Inequalities ``<normals[j], (1, x)> >= rhs[j]`` over a real cyclotomic field.

    ``bounds_hint[i]`` is a rigorous rational enclosure ``(lo, hi)`` of
    coordinate ``i`` over the feasible region.
    """

    normals: tuple[tuple[Cyclotomic, ...], ...]
    rhs: tuple[Cyclotomic, ...]
    bounds_hint: tuple[tuple[Fraction, Fraction], ...]
    labels: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.normals[0]) - 1

    def value(self, j: int, x) -> Cyclotomic:
        f = self.normals[j]
        total = f[0] - self.rhs[j]
        for c, xi in zip(f[1:], x):
            if xi:
                total = total + c * int(xi)
        return total

    def satisfied(self, x) -> bool:
        return all(real_sign(self.value(j, x)) >= 0 for j in range(len(self.normals)))

    def is_rational_constraint(self, j: int) -> bool:
        return all(v.is_rational() for v in self.normals[j]) and self.rhs[j].is_rational()


def constraints_from_simplex(s, labels=()) -> ConstraintSystem:
    normals = tuple((f[0] * s.scale,) + tuple(f[1:]) for f in s.facet_normals)
    bounds = []
    for i in range(s.dim):
        los, his = zip(*(enclosure(v[i]) for v in s.vertices))
        bounds.append((min(los), max(his)))
    zero = Cyclotomic(0)
    return ConstraintSystem(normals, tuple(zero for _ in normals), tuple(bounds), tuple(labels))


def strengthen(cs: ConstraintSystem, columns, value: int = 1) -> ConstraintSystem:
    """Require ``<normal_j, (1, x)> >= value`` for the given constraints.

    Only sound when the constraint has rational (hence, up to the leading 1,
    integral) coefficients, so that a positive value at an integer point is
    at least 1.
    """
    columns = sorted(set(columns))
    if not columns:
        return cs
    rhs = list(cs.rhs)
    for j in columns:
        if not all(v.is_rational() for v in cs.normals[j]):
            label = cs.labels[j] if cs.labels else str(j)
            raise StrengthenError(f"constraint {label} has irrational coefficients; post-filter instead")
        if any(v.as_fraction().denominator != 1 for v in cs.normals[j]):
            raise StrengthenError(f"constraint {j} is not integral")
        rhs[j] = as_cyclotomic(value)
    return replace(cs, rhs=tuple(rhs))


# --------------------------------------------------------------------------
# compilation to an integer system


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _int_row(coeffs, b):
    """Scale a rational inequality ``coeffs . y >= b`` to coprime integers."""
    den = _lcm([Fraction(c).denominator for c in coeffs] + [Fraction(b).denominator])
    a = [int(Fraction(c) * den) for c in coeffs]
    bb = int(Fraction(b) * den)
    g = 0
    for v in a:
        g = math.gcd(g, v)
    g = math.gcd(g, bb) if g else abs(bb)
    if g > 1:
        a = [v // g for v in a]
        bb //= g
    return a, bb


def _rank_mod(rows, p: int) -> int:
    rows = [[v % p for v in row] for row in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        pr = [(v * inv) % p for v in rows[r]]
        rows[r] = pr
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], pr)]
        r += 1
        if r == len(rows):
            break
    return r


def _spans(points, target: int) -> bool:
    """Whether integer homogeneous vectors have rank ``target`` (the maximum possible)."""
    if len(points) < target:
        return False
    for p in _MOD_PRIMES:
        if _rank_mod(points, p) >= target:
            return True
    return rank(points) >= target


@dataclass
class _Level:
    A: np.ndarray  # prefix coefficients, shape (F, k-1)
    b: np.ndarray
    a: np.ndarray  # coefficient of the new coordinate (nonzero)
    exact: bool


@dataclass
class _Engine:
    dim: int
    order: tuple[int, ...]
    levels: list[_Level] = field(default_factory=list)
    empty: bool = False
    single_point: tuple[int, ...] | None = None
    rows: list = field(default_factory=list)  # integer relaxed rows (a, b), original coordinates
    relaxed: tuple[int, ...] = ()
    float_path: bool = False


def _relax(cs: ConstraintSystem, j: int):
    """Rational inequality ``a . x >= b`` implied by constraint ``j``."""
    f = cs.normals[j]
    r = cs.rhs[j]
    if not r.is_rational():
        raise EnumerationError("right-hand sides must be rational")
    r = r.as_fraction()
    if cs.is_rational_constraint(j):
        return [v.as_fraction() for v in f[1:]], r - f[0].as_fraction(), False
    lo0, hi0 = enclosure(f[0], ENCLOSURE_PREC)
    a = []
    slack = Fraction(0)
    for v, (blo, bhi) in zip(f[1:], cs.bounds_hint):
        lo, hi = enclosure(v, ENCLOSURE_PREC)
        a.append(lo)
        slack += (hi - lo) * max(abs(blo), abs(bhi))
    return a, r - hi0 - slack, True


def _choose_order(cs: ConstraintSystem, order) -> tuple[int, ...]:
    d = cs.dim
    if order == "range-desc":
        widths = [hi - lo for lo, hi in cs.bounds_hint]
        return tuple(sorted(range(d), key=lambda i: (-widths[i], i)))
    if order is None or order == "range-asc":
        widths = [hi - lo for lo, hi in cs.bounds_hint]
        return tuple(sorted(range(d), key=lambda i: (widths[i], i)))
    if order == "natural":
        return tuple(range(d))
    order = tuple(order)
    if sorted(order) != list(range(d)):
        raise ValueError(f"order must be a permutation of range({d})")
    return order


def _compile(cs: ConstraintSystem, order=None) -> _Engine:
    d = cs.dim
    m = len(cs.normals)
    perm = _choose_order(cs, order)
    eng = _Engine(d, perm)
    rows = []
    relaxed = []
    for j in range(m):
        a, b, was_relaxed = _relax(cs, j)
        ia, ib = _int_row(a, b)
        rows.append((ia, ib))
        if was_relaxed:
            relaxed.append(j)
    eng.rows = rows
    eng.relaxed = tuple(relaxed)
    # permuted integer rows
    prow = [([a[i] for i in perm], b) for a, b in rows]

    if d == 0:
        return eng
    if m != d + 1:
        raise EnumerationError(f"expected a simplex ({d + 1} constraints), got {m}")
    # homogeneous rows (-b, a); vertex j spans the kernel of all rows but j
    H = [[Fraction(-b)] + [Fraction(v) for v in a] for a, b in prow]
    try:
        Hinv = inverse(H, Fraction(1))
    except SingularMatrixError:
        eng.single_point = _common_point(prow, d)
        if eng.single_point is None:
            eng.empty = True
        return eng
    hverts = []
    for j in range(m):
        h = [Hinv[i][j] for i in range(m)]
        if h[0] == 0:
            raise UnboundedError("constraint system is unbounded")
        if h[0] < 0:
            # every vertex violates its own opposite facet: infeasible
            eng.empty = True
            return eng
        den = _lcm([x.denominator for x in h])
        hverts.append([int(x * den) for x in h])
    full = (1 << m) - 1
    facets = [(a, b, full ^ (1 << j)) for j, (a, b) in enumerate(prow)]
    by_level = {d: facets}
    for k in range(d, 1, -1):
        facets = _eliminate(by_level[k], k, hverts)
        by_level[k - 1] = facets
    eng.levels = [_make_level(by_level[k], k) for k in range(1, d + 1)]
    big = max(
        [max([abs(v) for v in lv.A.ravel()] + [abs(v) for v in lv.a] + [abs(v) for v in lv.b] + [0])
         for lv in eng.levels] or [0]
    )
    coord = max([max(abs(lo), abs(hi)) for lo, hi in cs.bounds_hint] + [Fraction(1)])
    eng.float_path = big * (int(coord) + 2) * (d + 2) >= 2**62
    for lv in eng.levels:
        if eng.float_path:
            lv.A = lv.A.astype(np.float64)
            lv.b = lv.b.astype(np.float64)
            lv.a = lv.a.astype(np.float64)
            lv.exact = False
        else:
            lv.A = lv.A.astype(np.int64)
            lv.b = lv.b.astype(np.int64)
            lv.a = lv.a.astype(np.int64)
    return eng


def _common_point(prow, d):
    """The unique point on all hyperplanes, if it exists and is integral."""
    A = [[Fraction(v) for v in a] for a, _ in prow]
    b = [Fraction(bb) for _, bb in prow]
    for rows in itertools.combinations(range(len(prow)), d):
        try:
            inv = inverse([A[i] for i in rows], Fraction(1))
        except SingularMatrixError:
            continue
        x = [sum(inv[r][c] * b[rows[c]] for c in range(d)) for r in range(d)]
        if all(sum(ai * xi for ai, xi in zip(A[i], x)) == b[i] for i in range(len(prow))):
            if all(v.denominator == 1 for v in x):
                return tuple(int(v) for v in x)
        return None
    return None


def _eliminate(facets, k: int, hverts):
    """Facets of the projection onto the first ``k - 1`` coordinates."""
    zero, pos, neg = [], [], []
    for f in facets:
        c = f[0][k - 1]
        (pos if c > 0 else neg if c < 0 else zero).append(f)
    need = k - 1  # homogeneous rank of a facet of a polytope in R^(k-1)
    out = {}

    def consider(a, b, T):
        if T in out or T.bit_count() < need:
            return
        pts = [hverts[j][: k] for j in range(len(hverts)) if T >> j & 1]
        if _spans(pts, need):
            out[T] = (a, b, T)

    for a, b, T in zero:
        consider(a[: k - 1], b, T)
    for ap, bp, Tp in pos:
        cp = ap[k - 1]
        for an, bn, Tn in neg:
            T = Tp & Tn
            if T in out or T.bit_count() < need:
                continue
            cn = -an[k - 1]
            a = [cn * x + cp * y for x, y in zip(ap[: k - 1], an[: k - 1])]
            b = cn * bp + cp * bn
            g = 0
            for v in a:
                g = math.gcd(g, v)
            g = math.gcd(g, b)
            if g > 1:
                a = [v // g for v in a]
                b //= g
            consider(a, b, T)
    return [out[T] for T in sorted(out)]


def _make_level(facets, k: int) -> _Level:
    rows = [(a, b) for a, b, _ in facets if a[k - 1] != 0]
    if not any(a[k - 1] > 0 for a, _ in rows) or not any(a[k - 1] < 0 for a, _ in rows):
        raise UnboundedError(f"coordinate {k} is unbounded")
    A = np.array([a[: k - 1] for a, _ in rows], dtype=object).reshape(len(rows), k - 1)
    b = np.array([bb for _, bb in rows], dtype=object)
    a = np.array([a[k - 1] for a, _ in rows], dtype=object)
    return _Level(A, b, a, True)


# --------------------------------------------------------------------------
# lifting


def _ranges(lv: _Level, nodes: np.ndarray):
    k1 = nodes.shape[1]
    lower = lv.a > 0
    if lv.exact:
        S = lv.b[None, :] - (nodes @ lv.A.T if k1 else 0)
        if np.ndim(S) == 1:
            S = np.broadcast_to(S, (nodes.shape[0], len(lv.b)))
        al = lv.a[lower]
        au = lv.a[~lower]
        lo = (-((-S[:, lower]) // al)).max(axis=1)
        hi = (S[:, ~lower] // au).min(axis=1)
        return lo, hi
    X = nodes.astype(np.float64)
    if k1:
        S = lv.b[None, :] - X @ lv.A.T
        err = 4.0 * (k1 + 4) * _U * (np.abs(lv.b)[None, :] + np.abs(X) @ np.abs(lv.A).T)
    else:
        S = np.broadcast_to(lv.b, (nodes.shape[0], len(lv.b)))
        err = 4.0 * 4 * _U * np.abs(S)
    q = (S - err) / lv.a[None, :]
    slack = 1e-9 * (1.0 + np.abs(q))
    lo = np.ceil((q - slack)[:, lower].max(axis=1))
    hi = np.floor((q + slack)[:, ~lower].min(axis=1))
    return lo.astype(np.int64), hi.astype(np.int64)


def _expand(lv: _Level, nodes: np.ndarray) -> np.ndarray:
    lo, hi = _ranges(lv, nodes)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    counts = np.maximum(hi - lo + 1, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty((0, nodes.shape[1] + 1), dtype=np.int64)
    parents = np.repeat(nodes, counts, axis=0)
    starts = np.cumsum(counts) - counts
    vals = np.repeat(lo, counts) + (np.arange(total) - np.repeat(starts, counts))
    return np.concatenate([parents, vals[:, None]], axis=1)


def _walk(eng: _Engine, nodes: np.ndarray, deadline):
    k = nodes.shape[1]
    if k == eng.dim:
        yield nodes
        return
    if deadline is not None and time.monotonic() > deadline:
        raise EnumerationTimeout("enumeration deadline exceeded")
    children = _expand(eng.levels[k], nodes)
    for start in range(0, children.shape[0], CHUNK):
        yield from _walk(eng, children[start:start + CHUNK], deadline)


class _LeafFilter:
    """Exact membership check for candidate leaves (original coordinates)."""

    def __init__(self, cs: ConstraintSystem, eng: _Engine):
        self.cs = cs
        self.exact_rows = [j for j in range(len(cs.normals)) if j not in eng.relaxed]
        self.irrational = list(eng.relaxed)
        rows = [eng.rows[j] for j in self.exact_rows]
        big = max([abs(v) for a, b in rows for v in a + [b]] + [0])
        dtype = np.int64 if big < 2**40 else object
        self.A = np.array([a for a, _ in rows], dtype=dtype).reshape(len(rows), cs.dim)
        self.b = np.array([b for _, b in rows], dtype=dtype)
        self.fl = []
        for j in self.irrational:
            f = cs.normals[j]
            c = np.array([float(v) for v in f[1:]])
            self.fl.append((j, float(f[0]) - float(cs.rhs[j].as_fraction()), c))

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        if pts.shape[0] == 0:
            return pts
        keep = np.ones(pts.shape[0], dtype=bool)
        if self.exact_rows:
            P = pts if self.A.dtype == np.int64 else pts.astype(object)
            S = P @ self.A.T - self.b[None, :]
            keep &= np.all(S >= 0, axis=1).astype(bool)
        for j, c0, c in self.fl:
            X = pts[keep].astype(np.float64)
            if X.shape[0] == 0:
                break
            val = c0 + X @ c
            err = 8.0 * (len(c) + 4) * _U * (abs(c0) + np.abs(X) @ np.abs(c)) + 1e-12
            ok = val > err
            bad = val < -err
            idx = np.flatnonzero(keep)
            keep[idx[bad]] = False
            for t in np.flatnonzero(~ok & ~bad):
                x = pts[idx[t]]
                if real_sign(self.cs.value(j, [int(v) for v in x])) < 0:
                    keep[idx[t]] = False
        return pts[keep]


def _to_original(eng: _Engine, perm_pts: np.ndarray) -> np.ndarray:
    out = np.empty_like(perm_pts)
    for pos, coord in enumerate(eng.order):
        out[:, coord] = perm_pts[:, pos]
    return out


def _run_blocks(cs: ConstraintSystem, eng: _Engine, roots: np.ndarray, deadline):
    flt = _LeafFilter(cs, eng)
    for block in _walk(eng, roots, deadline):
        pts = flt(_to_original(eng, block))
        if pts.shape[0]:
            yield pts


def _roots(eng: _Engine) -> np.ndarray:
    return np.empty((1, 0), dtype=np.int64)


def _worker(args):
    cs, eng, roots, deadline_left, limit = args
    deadline = None if deadline_left is None else time.monotonic() + deadline_left
    out = []
    count = 0
    for pts in _run_blocks(cs, eng, roots, deadline):
        out.append(pts)
        count += pts.shape[0]
        if limit is not None and count > limit:
            raise LimitExceeded(limit)
    if not out:
        return np.empty((0, eng.dim), dtype=np.int64)
    return np.concatenate(out)


def iter_point_blocks(cs: ConstraintSystem, *, order=None, timeout=None, limit=None):
    """Yield the integer points as 2-D ``int64`` arrays, in no particular order.

    Single-process; see :func:`enumerate_points` for the sorted, parallel API.
    """
    eng = _compile(cs, order)
    deadline = None if timeout is None else time.monotonic() + timeout
    if eng.empty:
        return
    if eng.dim == 0 or eng.single_point is not None:
        pt = eng.single_point if eng.single_point is not None else ()
        arr = np.array([pt], dtype=np.int64).reshape(1, eng.dim)
        arr = _LeafFilter(cs, eng)(arr)
        if arr.shape[0]:
            yield arr
        return
    count = 0
    for pts in _run_blocks(cs, eng, _roots(eng), deadline):
        count += pts.shape[0]
        if limit is not None and count > limit:
            raise LimitExceeded(limit)
        yield pts


def _sorted_tuples(arrays, dim) -> list[tuple[int, ...]]:
    arrays = [a for a in arrays if a.shape[0]]
    if not arrays:
        return []
    pts = np.concatenate(arrays)
    if dim:
        idx = np.lexsort(pts.T[::-1])
        pts = pts[idx]
    return [tuple(int(v) for v in row) for row in pts]


def enumerate_points(cs: ConstraintSystem, *, threads: int = 1, order=None,
                     timeout: float | None = None, limit: int | None = None) -> list[tuple[int, ...]]:
    """All integer points of ``cs``, sorted lexicographically.

    With ``threads > 1`` the values of the first lifted coordinate are split
    across worker processes; the merged output is identical.
    """
    if threads <= 1:
        return _sorted_tuples(list(iter_point_blocks(cs, order=order, timeout=timeout, limit=limit)), cs.dim)
    eng = _compile(cs, order)
    if eng.empty or eng.dim == 0 or eng.single_point is not None:
        return _sorted_tuples(list(iter_point_blocks(cs, order=order, limit=limit)), cs.dim)
    first = _expand(eng.levels[0], _roots(eng))
    parts = [first[i::threads] for i in range(threads)]
    parts = [p for p in parts if p.shape[0]]
    jobs = [(cs, eng, p, timeout, limit) for p in parts]
    with ProcessPoolExecutor(max_workers=min(threads, len(jobs), os.cpu_count() or 1)) as ex:
        results = list(ex.map(_worker, jobs))
    total = sum(r.shape[0] for r in results)
    if limit is not None and total > limit:
        raise LimitExceeded(limit)
    return _sorted_tuples(results, cs.dim)


def count_points(cs: ConstraintSystem, **kw) -> int:
    return sum(b.shape[0] for b in iter_point_blocks(cs, **kw))


def brute_force(cs: ConstraintSystem, max_dim: int = 8) -> list[tuple[int, ...]]:
    """Scan the integer box of ``bounds_hint`` and test every point exactly."""
    if cs.dim > max_dim:
        raise OracleTooLarge(f"dimension {cs.dim} exceeds the brute-force cap {max_dim}")
    ranges = [range(math.ceil(lo), math.floor(hi) + 1) for lo, hi in cs.bounds_hint]
    return [x for x in itertools.product(*ranges) if cs.satisfied(x)]
