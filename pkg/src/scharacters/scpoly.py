"""The S-character simplex ``S(G) = {x : x V >= 0, x_1 = 1}``.

Points live in the affine chart ``x_1 = 1``, so a point of ``S(G)`` is a
vector of length ``m - 1``; the inequality for column ``j`` of ``V`` reads
``scale * V[0][j] + sum_i x_i V[i][j] >= 0`` with ``scale = 1`` unless the
simplex has been dilated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chartab import InvalidTableError, RealCharacterTable
from .cyclo import Cyclotomic, as_cyclotomic, real_sign
from .linalg import SingularMatrixError, inverse

__all__ = [
    "SSimplex",
    "simplex_from_table",
    "closed_form_vertices",
    "polarity_suite",
    "dilate",
    "contains",
    "VertexMismatchError",
]

Vector = tuple[Cyclotomic, ...]


class VertexMismatchError(RuntimeError):
    """Closed-form vertices disagree with the linear-solve vertices."""


@dataclass(frozen=True, eq=False)
class SSimplex:
    dim: int
    facet_normals: tuple[Vector, ...]
    vertices: tuple[Vector, ...]
    orbit_sizes: tuple[int, ...]
    scale: int = 1

    @property
    def is_rational(self) -> bool:
        return all(v.is_rational() for f in self.facet_normals for v in f)

    def vertex_bounds(self):
        """Per-coordinate ``(min, max)`` of the vertices, as floats (for display)."""
        return [
            (min(float(v[i]) for v in self.vertices), max(float(v[i]) for v in self.vertices))
            for i in range(self.dim)
        ]


def simplex_from_table(rt: RealCharacterTable) -> SSimplex:
    """Facets are the columns of ``V``; vertex ``j`` spans the kernel of the
    other ``m - 1`` columns, i.e. it is row ``j`` of ``V^-1`` scaled to lead
    with 1."""
    m = rt.m
    try:
        inv = inverse([list(row) for row in rt.V], Cyclotomic(1))
    except SingularMatrixError:
        raise InvalidTableError(f"{rt.table.name}: real character table is singular") from None
    # row j of inv is orthogonal to every column of V except column j
    vertices = []
    for j in range(m):
        row = inv[j]
        lead = row[0]
        if lead.is_zero():
            raise InvalidTableError(f"{rt.table.name}: vertex {j} is at infinity")
        scale = lead.inverse()
        vertices.append(tuple(x * scale for x in row[1:]))
    normals = tuple(rt.column(j) for j in range(m))
    return SSimplex(m - 1, normals, tuple(vertices), rt.orbit_sizes)


def closed_form_vertices(rt: RealCharacterTable, check: SSimplex | None = None) -> tuple[Vector, ...]:
    """Vertex ``j`` is ``(V[i][j] / orbit_sizes[i])`` for ``i >= 1``.

    When ``check`` is given, the result must coincide with its vertices.
    """
    out = tuple(
        tuple(rt.V[i][j] * as_cyclotomic(1) / rt.orbit_sizes[i] for i in range(1, rt.m))
        for j in range(rt.m)
    )
    if check is not None and out != tuple(check.vertices):
        raise VertexMismatchError(f"{rt.table.name}: closed-form vertices differ from solved vertices")
    return out


def _is_integer(x: Cyclotomic) -> bool:
    return x.is_rational() and x.as_fraction().denominator == 1


def polarity_suite(s: SSimplex) -> dict:
    """Lattice / reflexive / self-polar flags, plus integrality over the ring
    of integers of the value field (which also covers irrational tables)."""
    is_lattice = all(_is_integer(x) for v in s.vertices for x in v)
    # a.x <= 1 form of facet j: a = -normal[1:] / (scale * normal[0])
    polar = [tuple(-x / (f[0] * s.scale) for x in f[1:]) for f in s.facet_normals]
    polar_lattice = all(_is_integer(x) for v in polar for x in v)
    dehomogenized = {tuple(x / (f[0] * s.scale) for x in f[1:]) for f in s.facet_normals}
    return {
        "is_lattice": is_lattice,
        "is_reflexive": is_lattice and polar_lattice,
        "is_self_polar": dehomogenized == set(s.vertices),
        "is_integral": all(x.is_integral() for v in s.vertices for x in v),
    }


def dilate(s: SSimplex, k: int) -> SSimplex:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"dilation factor must be a positive integer, got {k!r}")
    if k == 1:
        return s
    return SSimplex(
        s.dim,
        s.facet_normals,
        tuple(tuple(x * k for x in v) for v in s.vertices),
        s.orbit_sizes,
        s.scale * k,
    )


def facet_value(s: SSimplex, j: int, x) -> Cyclotomic:
    f = s.facet_normals[j]
    total = f[0] * s.scale
    for c, xi in zip(f[1:], x):
        if xi:
            total = total + c * xi
    return total


def contains(s: SSimplex, x) -> bool:
    """Exact membership test for a point of the affine chart."""
    if len(x) != s.dim:
        raise ValueError(f"point has {len(x)} coordinates, simplex has dimension {s.dim}")
    return all(real_sign(facet_value(s, j, x)) >= 0 for j in range(len(s.facet_normals)))
