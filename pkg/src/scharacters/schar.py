"""S-characters: decoding lattice points, classification, projection to
quotients, and the end-to-end search for S-characters that are nonzero on
every element of prime power order."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .chartab import CharacterTable, RealCharacterTable, census, decompose
from .cyclo import Cyclotomic, format_value, real_sign
from .lattice import (
    EnumerationTimeout,
    LimitExceeded,
    constraints_from_simplex,
    iter_point_blocks,
    count_points,
    enumerate_points,
    strengthen as strengthen_constraints,
)
from .scpoly import simplex_from_table

__all__ = [
    "SCharacter",
    "FusionMap",
    "SearchOptions",
    "SearchReport",
    "NotAnSCharacterError",
    "InvalidFusionError",
    "decode",
    "project",
    "project_scharacter",
    "load_fusion",
    "validate_fusion",
    "search",
    "product_schar",
]


class NotAnSCharacterError(ValueError):
    pass


class InvalidFusionError(ValueError):
    pass


@dataclass(frozen=True)
class SCharacter:
    coeffs: tuple[int, ...]  # real-irreducible basis, coeffs[0] == 1
    complex_coeffs: tuple[int, ...]
    values: tuple[Cyclotomic, ...]  # one per class of G
    is_trivial: bool
    is_ordinary: bool
    is_faithful: bool
    zero_classes: tuple[int, ...]
    positive_on_prime_power: bool

    @property
    def degree(self) -> Cyclotomic:
        return self.values[0]

    def to_dict(self, t: CharacterTable | None = None) -> dict:
        out = {
            "coeffs": list(self.coeffs),
            "complex_coeffs": list(self.complex_coeffs),
            "values": [format_value(v) for v in self.values],
            "is_trivial": self.is_trivial,
            "is_ordinary": self.is_ordinary,
            "is_faithful": self.is_faithful,
            "zero_classes": list(self.zero_classes),
            "positive_on_prime_power": self.positive_on_prime_power,
        }
        if t is not None:
            out["zero_classes"] = [t.classes[c].name for c in self.zero_classes]
        return out


@lru_cache(maxsize=64)
def _kernels(t: CharacterTable) -> tuple[frozenset, ...]:
    return tuple(
        frozenset(c for c, v in enumerate(row) if v == row[0]) for row in t.irreducibles
    )


def _is_faithful(t: CharacterTable, complex_coeffs) -> bool:
    ker = frozenset(range(t.n))
    for a, k in zip(complex_coeffs, _kernels(t)):
        if a:
            ker &= k
    return ker == frozenset({0})


def _column_values(rt: RealCharacterTable, coeffs) -> list[Cyclotomic]:
    out = []
    for j in range(rt.m):
        if rt.column_is_rational(j):
            s = sum(int(a) * rt.V[i][j].as_fraction() for i, a in enumerate(coeffs) if a)
            out.append(Cyclotomic(Fraction(s)))
        else:
            s = Cyclotomic(0)
            for i, a in enumerate(coeffs):
                if a:
                    s = s + rt.V[i][j] * int(a)
            out.append(s)
    return out


def decode(x, rt: RealCharacterTable, include_identity: bool = True) -> SCharacter:
    """The S-character whose real-basis coefficients are ``(1, *x)``.

    ``x`` may also be given with its leading 1.
    """
    x = [int(v) for v in x]
    if len(x) == rt.m:
        if x[0] != 1:
            raise NotAnSCharacterError(f"trivial coefficient is {x[0]}, not 1")
        coeffs = tuple(x)
    elif len(x) == rt.m - 1:
        coeffs = (1, *x)
    else:
        raise ValueError(f"expected {rt.m - 1} coordinates, got {len(x)}")
    t = rt.table
    col_values = _column_values(rt, coeffs)
    signs = [real_sign(v) for v in col_values]
    for j, sgn in enumerate(signs):
        if sgn < 0:
            raise NotAnSCharacterError(f"negative value {col_values[j]} at class {rt.column_name(j)}")
    values = tuple(col_values[rt.class_to_column[c]] for c in range(t.n))
    complex_coeffs = [0] * t.n
    for a, orbit in zip(coeffs, rt.row_orbits):
        for r in orbit:
            complex_coeffs[r] = a
    zero_classes = tuple(c for c in range(t.n) if signs[rt.class_to_column[c]] == 0)
    pp = set(rt.prime_power_columns(include_identity))
    return SCharacter(
        coeffs=coeffs,
        complex_coeffs=tuple(complex_coeffs),
        values=values,
        is_trivial=all(a == 0 for a in coeffs[1:]),
        is_ordinary=all(a >= 0 for a in coeffs),
        is_faithful=_is_faithful(t, complex_coeffs),
        zero_classes=zero_classes,
        positive_on_prime_power=not any(rt.class_to_column[c] in pp for c in zero_classes),
    )


def product_schar(t: CharacterTable, i: int, include_identity: bool = True) -> SCharacter:
    """The S-character ``chi_i * conj(chi_i)`` (``i`` is 0-based)."""
    chi = t.irreducibles[i]
    values = [v * v.conjugate() for v in chi]
    cc = decompose(t, values)
    rt = t.real
    coeffs = []
    for orbit in rt.row_orbits:
        a = {cc[r] for r in orbit}
        if len(a) != 1:
            raise NotAnSCharacterError("real-valued character has unequal coefficients on a conjugate pair")
        coeffs.append(a.pop())
    return decode(coeffs, rt, include_identity)


# --------------------------------------------------------------------------
# projection to a factor group


@dataclass(frozen=True)
class FusionMap:
    source: str
    target: str
    class_map: tuple[int, ...]


def load_fusion(path) -> FusionMap:
    doc = json.loads(Path(path).read_text())
    try:
        return FusionMap(doc["from"], doc["to"], tuple(int(i) for i in doc["map"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidFusionError(f"{path}: malformed fusion document ({exc})") from None


def validate_fusion(fm: FusionMap, tG: CharacterTable, tF: CharacterTable) -> None:
    if len(fm.class_map) != tG.n:
        raise InvalidFusionError(f"fusion has {len(fm.class_map)} entries, {tG.name} has {tG.n} classes")
    if any(not 0 <= f < tF.n for f in fm.class_map):
        raise InvalidFusionError("fusion map refers to a class outside the factor group")
    if fm.class_map[0] != 0:
        raise InvalidFusionError("identity class must fuse to the identity class")
    if tG.order % tF.order:
        raise InvalidFusionError(f"|{tF.name}| does not divide |{tG.name}|")
    index = tG.order // tF.order
    fibres = [0] * tF.n
    for c, f in enumerate(fm.class_map):
        fibres[f] += tG.classes[c].size
    for f, total in enumerate(fibres):
        if total != index * tF.classes[f].size:
            raise InvalidFusionError(
                f"classes fusing to {tF.classes[f].name} have total size {total}, "
                f"expected {index * tF.classes[f].size}"
            )


def project(values, tG: CharacterTable, fm: FusionMap, tF: CharacterTable) -> list[Cyclotomic]:
    """Class function on ``F = G/N`` obtained by averaging over fibres:
    ``phi^F(f) = |C_F(f)| / |G| * sum_{x -> f} |x^G| phi(x)``."""
    validate_fusion(fm, tG, tF)
    sums = [Cyclotomic(0)] * tF.n
    for c, f in enumerate(fm.class_map):
        sums[f] = sums[f] + values[c] * tG.classes[c].size
    return [
        s * Fraction(tF.order // tF.classes[f].size, tG.order) for f, s in enumerate(sums)
    ]


def project_scharacter(psi: SCharacter, tG: CharacterTable, fm: FusionMap, tF: CharacterTable,
                       include_identity: bool = True) -> SCharacter:
    values = project(psi.values, tG, fm, tF)
    cc = decompose(tF, values)
    coeffs = [cc[orbit[0]] for orbit in tF.real.row_orbits]
    return decode(coeffs, tF.real, include_identity)


# --------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class SearchOptions:
    strengthen: bool = True
    include_identity: bool = True
    faithful_only: bool = True
    ordinary_only: bool = False
    count_all_points: bool = False
    threads: int = 1
    timeout: float | None = None
    limit: int | None = None
    order: str | None = "range-asc"


@dataclass
class SearchReport:
    group: str
    class_count: int
    real_count: int
    rational_count: int
    lattice_point_total: int | None
    hits: list[SCharacter]
    virtual_hit_count: int
    timings: dict[str, float] = field(default_factory=dict)
    status: str = "ok"
    candidates: int = 0
    options: SearchOptions = field(default_factory=SearchOptions)

    @property
    def hit_count(self) -> int:
        return len(self.hits)

    def to_dict(self, t: CharacterTable | None = None, with_timings: bool = True) -> dict:
        out = {
            "group": self.group,
            "class_count": self.class_count,
            "real_count": self.real_count,
            "rational_count": self.rational_count,
            "lattice_point_total": self.lattice_point_total,
            "hit_count": self.hit_count,
            "virtual_hit_count": self.virtual_hit_count,
            "status": self.status,
            "candidates": self.candidates,
            "options": {
                "strengthen": self.options.strengthen,
                "include_identity": self.options.include_identity,
                "faithful_only": self.options.faithful_only,
                "ordinary_only": self.options.ordinary_only,
            },
            "hits": [h.to_dict(t) for h in self.hits],
        }
        if with_timings:
            out["timings_ms"] = {k: round(v, 1) for k, v in self.timings.items()}
        return out


class _PrimePowerFilter:
    """Vectorised positivity test at prime-power columns for blocks of points."""

    def __init__(self, rt: RealCharacterTable, include_identity: bool):
        cols = rt.prime_power_columns(include_identity)
        self.rt = rt
        self.rational = [j for j in cols if rt.column_is_rational(j)]
        self.irrational = [j for j in cols if not rt.column_is_rational(j)]
        self.M = np.array(
            [[int(rt.V[i][j].as_fraction()) for j in self.rational] for i in range(rt.m)],
            dtype=object,
        ).reshape(rt.m, len(self.rational))

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        full = np.concatenate([np.ones((pts.shape[0], 1), dtype=pts.dtype), pts], axis=1)
        keep = np.ones(pts.shape[0], dtype=bool)
        if self.rational:
            vals = full.astype(object) @ self.M
            keep &= np.all(vals > 0, axis=1).astype(bool)
        for idx in np.flatnonzero(keep):
            x = full[idx]
            for j in self.irrational:
                s = Cyclotomic(0)
                for i, a in enumerate(x):
                    if a:
                        s = s + self.rt.V[i][j] * int(a)
                if real_sign(s) <= 0:
                    keep[idx] = False
                    break
        return pts[keep]


def search(t: CharacterTable, options: SearchOptions | None = None, **kw) -> SearchReport:
    """Realify, build S(G), enumerate (optionally strengthened), decode, filter."""
    opts = options or SearchOptions(**kw)
    timings: dict[str, float] = {}
    clock = time.perf_counter()

    def lap(name):
        nonlocal clock
        now = time.perf_counter()
        timings[name] = (now - clock) * 1000.0
        clock = now

    rt = t.real
    cen = census(t)
    lap("realify")
    s = simplex_from_table(rt)
    labels = tuple(rt.column_name(j) for j in range(rt.m))
    cs = constraints_from_simplex(s, labels)
    lap("simplex")
    target = cs
    if opts.strengthen:
        cols = [j for j in rt.prime_power_columns(opts.include_identity) if rt.column_is_rational(j)]
        target = strengthen_constraints(cs, cols)
    ppf = _PrimePowerFilter(rt, opts.include_identity)
    status = "ok"
    found: list[tuple[int, ...]] = []
    total = 0
    try:
        if opts.threads > 1:
            pts = enumerate_points(target, threads=opts.threads, order=opts.order,
                                   timeout=opts.timeout, limit=opts.limit)
            blocks = [np.array(pts, dtype=np.int64).reshape(len(pts), rt.m - 1)]
        else:
            blocks = iter_point_blocks(target, order=opts.order, timeout=opts.timeout, limit=opts.limit)
        for block in blocks:
            total += block.shape[0]
            for row in ppf(block):
                found.append(tuple(int(v) for v in row))
    except EnumerationTimeout:
        status = "timeout"
    except LimitExceeded:
        status = "limit"
    lap("enumerate")
    lattice_total = None
    if opts.count_all_points and status == "ok":
        if opts.strengthen:
            try:
                lattice_total = count_points(cs, order=opts.order, timeout=opts.timeout, limit=opts.limit)
            except EnumerationTimeout:
                status = "timeout"
            except LimitExceeded:
                status = "limit"
        else:
            lattice_total = total
        lap("count")
    hits = []
    for x in sorted(found):
        psi = decode(x, rt, opts.include_identity)
        if psi.is_trivial or not psi.positive_on_prime_power:
            continue
        if opts.faithful_only and not psi.is_faithful:
            continue
        if opts.ordinary_only and not psi.is_ordinary:
            continue
        hits.append(psi)
    lap("decode")
    return SearchReport(
        group=t.name,
        class_count=cen["classes"],
        real_count=cen["real"],
        rational_count=cen["rational"],
        lattice_point_total=lattice_total,
        hits=hits,
        virtual_hit_count=sum(1 for h in hits if not h.is_ordinary),
        timings=timings,
        status=status,
        candidates=total,
        options=opts,
    )
