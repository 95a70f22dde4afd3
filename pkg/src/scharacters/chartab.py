"""Complex character tables, their real folding, and class-function algebra."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

from .cyclo import Cyclotomic, format_value, parse_value

__all__ = [
    "ConjugacyClass",
    "CharacterTable",
    "RealCharacterTable",
    "Violation",
    "TableParseError",
    "InvalidTableError",
    "DecompositionError",
    "parse_table",
    "load_table",
    "dump_table",
    "validate",
    "realify",
    "galois_orbit_count",
    "census",
    "decompose",
    "inner_product",
    "is_prime_power",
]


class TableParseError(ValueError):
    """Malformed character-table document."""


class InvalidTableError(ValueError):
    """A table violates an invariant the algorithms depend on."""


class DecompositionError(ValueError):
    """A class function is not a virtual character."""


def is_prime_power(k: int, include_identity: bool = True) -> bool:
    if k == 1:
        return include_identity
    p = 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            return k == 1
        p += 1
    return k > 1


@dataclass(frozen=True)
class ConjugacyClass:
    name: str
    size: int
    order: int


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Irreducible characters (rows) of a finite group on its classes (columns).

    The identity class and the trivial character both come first.
    """

    name: str
    order: int
    classes: tuple[ConjugacyClass, ...]
    irreducibles: tuple[tuple[Cyclotomic, ...], ...]

    @property
    def n(self) -> int:
        return len(self.classes)

    @property
    def degrees(self) -> list[int]:
        return [int(row[0].as_fraction()) for row in self.irreducibles]

    @property
    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    @cached_property
    def real(self) -> "RealCharacterTable":
        return realify(self)

    def class_index(self, name: str) -> int:
        for i, c in enumerate(self.classes):
            if c.name == name:
                return i
        raise KeyError(name)


def _field(doc, key, kind, where):
    if key not in doc:
        raise TableParseError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise TableParseError(f"{where}.{key}: expected integer, got {value!r}")
    if kind is not int and not isinstance(value, kind):
        raise TableParseError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def parse_table(document) -> CharacterTable:
    """Build a :class:`CharacterTable` from a JSON string or decoded dict.

    Only the shape is checked here; see :func:`validate` for the arithmetic.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise TableParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(document, dict):
        raise TableParseError("table document must be a JSON object")
    name = _field(document, "name", str, "table")
    order = _field(document, "order", int, "table")
    if order < 1:
        raise TableParseError("table.order: must be positive")
    raw_classes = _field(document, "classes", list, "table")
    classes = []
    for i, c in enumerate(raw_classes):
        where = f"classes[{i}]"
        if not isinstance(c, dict):
            raise TableParseError(f"{where}: expected object")
        cname = _field(c, "name", str, where)
        size = _field(c, "size", int, where)
        eorder = _field(c, "order", int, where)
        if size < 1 or eorder < 1:
            raise TableParseError(f"{where}: size and order must be positive")
        classes.append(ConjugacyClass(cname, size, eorder))
    if not classes:
        raise TableParseError("table.classes: empty")
    if classes[0].order != 1 or classes[0].size != 1:
        raise TableParseError("classes[0]: the identity class (size 1, order 1) must come first")
    rows = _field(document, "irreducibles", list, "table")
    n = len(classes)
    if len(rows) != n:
        raise TableParseError(f"table.irreducibles: {len(rows)} rows for {n} classes (table must be square)")
    irr = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise TableParseError(f"irreducibles[{i}]: expected a list of {n} values")
        values = []
        for j, v in enumerate(row):
            try:
                values.append(parse_value(v))
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise TableParseError(f"irreducibles[{i}][{j}]: {exc}") from None
        irr.append(tuple(values))
    if any(v != 1 for v in irr[0]):
        raise TableParseError("irreducibles[0]: the trivial character must come first")
    return CharacterTable(name, order, tuple(classes), tuple(irr))


def load_table(path) -> CharacterTable:
    path = Path(path)
    try:
        return parse_table(path.read_text())
    except TableParseError as exc:
        raise TableParseError(f"{path}: {exc}") from None


def dump_table(t: CharacterTable) -> dict:
    return {
        "name": t.name,
        "order": t.order,
        "classes": [{"name": c.name, "size": c.size, "order": c.order} for c in t.classes],
        "irreducibles": [[format_value(v) for v in row] for row in t.irreducibles],
    }


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple[int, ...]
    message: str


def inner_product(t: CharacterTable, f, g) -> Cyclotomic:
    """``[f, g] = 1/|G| * sum_c |c| f(c) conj(g(c))``."""
    total = Cyclotomic(0)
    for c, a, b in zip(t.classes, f, g):
        if a.is_zero() or b.is_zero():
            continue
        total = total + (a * b.conjugate()) * c.size
    return total * Fraction(1, t.order)


def validate(t: CharacterTable) -> list[Violation]:
    """Every violated invariant of ``t``; an empty list means the table is valid.

    Row/character indices in the messages are 1-based (``chi1`` is trivial).
    """
    out: list[Violation] = []
    n = t.n
    if sum(c.size for c in t.classes) != t.order:
        out.append(Violation("class-sizes", (), f"class sizes sum to {sum(c.size for c in t.classes)}, not |G| = {t.order}"))
    for j, c in enumerate(t.classes):
        if t.order % c.size:
            out.append(Violation("class-size", (j,), f"size {c.size} of class {c.name} does not divide |G|"))
        if t.order % c.order:
            out.append(Violation("element-order", (j,), f"element order {c.order} of class {c.name} does not divide |G|"))
    for j, v in enumerate(t.irreducibles[0]):
        if v != 1:
            out.append(Violation("trivial-row", (0, j), f"trivial character is {v} at class {t.classes[j].name}"))
    degrees_ok = True
    for i, row in enumerate(t.irreducibles):
        d = row[0]
        if not d.is_rational() or d.as_fraction().denominator != 1 or d.as_fraction() <= 0:
            degrees_ok = False
            out.append(Violation("degree", (i,), f"chi{i + 1}(1) = {d} is not a positive integer"))
    if degrees_ok:
        s = sum(int(row[0].as_fraction()) ** 2 for row in t.irreducibles)
        if s != t.order:
            out.append(Violation("degree-squares", (), f"sum of squared degrees is {s}, not |G| = {t.order}"))
    for i in range(n):
        for j in range(i, n):
            ip = inner_product(t, t.irreducibles[i], t.irreducibles[j])
            want = 1 if i == j else 0
            if ip != want:
                out.append(Violation("row-orthogonality", (i, j), f"[chi{i + 1}, chi{j + 1}] = {ip}, expected {want}"))
    cols = [[row[c] for row in t.irreducibles] for c in range(n)]
    conj_cols = [[v.conjugate() for v in col] for col in cols]
    for c in range(n):
        for d in range(c, n):
            s = Cyclotomic(0)
            for a, b in zip(cols[c], conj_cols[d]):
                s = s + a * b
            want = Fraction(t.order, t.classes[c].size) if c == d else 0
            if s != want:
                out.append(Violation(
                    "column-orthogonality", (c, d),
                    f"columns {t.classes[c].name}, {t.classes[d].name}: sum is {s}, expected {want}",
                ))
    return out


@dataclass(frozen=True, eq=False)
class RealCharacterTable:
    """The square table of real irreducible characters.

    Row ``i`` is the sum of the complex rows in ``row_orbits[i]``; column ``j``
    is the common value on the classes ``column_classes[j]``.
    """

    table: CharacterTable
    V: tuple[tuple[Cyclotomic, ...], ...]
    orbit_sizes: tuple[int, ...]
    row_orbits: tuple[tuple[int, ...], ...]
    column_classes: tuple[tuple[int, ...], ...]
    class_to_column: tuple[int, ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.V)

    @property
    def truncated(self) -> tuple[tuple[Cyclotomic, ...], ...]:
        return self.V[1:]

    def column(self, j: int) -> tuple[Cyclotomic, ...]:
        return tuple(row[j] for row in self.V)

    def column_order(self, j: int) -> int:
        return self.table.classes[self.column_classes[j][0]].order

    def column_name(self, j: int) -> str:
        return "/".join(self.table.classes[c].name for c in self.column_classes[j])

    def prime_power_columns(self, include_identity: bool = True) -> tuple[int, ...]:
        return tuple(
            j for j in range(self.m) if is_prime_power(self.column_order(j), include_identity)
        )

    @property
    def is_rational(self) -> bool:
        return all(v.is_rational() for row in self.V for v in row)

    def column_is_rational(self, j: int) -> bool:
        return all(row[j].is_rational() for row in self.V)


def realify(t: CharacterTable) -> RealCharacterTable:
    """Sum complex-conjugate rows and merge the resulting duplicate columns."""
    rows = t.irreducibles
    index = {row: i for i, row in enumerate(rows)}
    orbits: list[tuple[int, ...]] = []
    seen = set()
    for i, row in enumerate(rows):
        if i in seen:
            continue
        conj = tuple(v.conjugate() for v in row)
        j = index.get(conj)
        if j is None:
            raise InvalidTableError(f"{t.name}: conjugate of chi{i + 1} is not a row of the table")
        orbit = (i,) if j == i else (i, j)
        seen.update(orbit)
        orbits.append(orbit)
    U = []
    for orbit in orbits:
        if len(orbit) == 1:
            U.append(rows[orbit[0]])
        else:
            U.append(tuple(a + b for a, b in zip(rows[orbit[0]], rows[orbit[1]])))
    groups: dict[tuple, list[int]] = {}
    for c in range(t.n):
        groups.setdefault(tuple(u[c] for u in U), []).append(c)
    column_classes = tuple(tuple(g) for g in sorted(groups.values()))
    m = len(orbits)
    if len(column_classes) != m:
        raise InvalidTableError(
            f"{t.name}: {m} real row orbits but {len(column_classes)} distinct columns"
        )
    for g in column_classes:
        cls = [t.classes[c] for c in g]
        if len(g) > 2 or len({(c.size, c.order) for c in cls}) != 1:
            raise InvalidTableError(f"{t.name}: implausible merged column {[c.name for c in cls]}")
    class_to_column = [0] * t.n
    for j, g in enumerate(column_classes):
        for c in g:
            class_to_column[c] = j
    V = tuple(tuple(u[g[0]] for g in column_classes) for u in U)
    return RealCharacterTable(
        table=t,
        V=V,
        orbit_sizes=tuple(len(o) for o in orbits),
        row_orbits=tuple(orbits),
        column_classes=column_classes,
        class_to_column=tuple(class_to_column),
    )


def _field_conductor(t: CharacterTable) -> int:
    n = 1
    for row in t.irreducibles:
        for v in row:
            n = n * v.n // math.gcd(n, v.n)
    return n


def galois_orbit_count(t: CharacterTable) -> int:
    """Number of Galois orbits on Irr(G), i.e. of irreducible Q-characters."""
    N = _field_conductor(t)
    units = [k for k in range(1, N) if math.gcd(k, N) == 1] or [1]
    rows = list(t.irreducibles)
    index = {row: i for i, row in enumerate(rows)}
    seen: set[int] = set()
    count = 0
    for i, row in enumerate(rows):
        if i in seen:
            continue
        count += 1
        seen.add(i)
        if all(v.is_rational() for v in row):
            continue
        for k in units:
            j = index.get(tuple(v.galois(k) for v in row))
            if j is None:
                raise InvalidTableError(f"{t.name}: Galois image of chi{i + 1} is not a row")
            seen.add(j)
    return count


def census(t: CharacterTable) -> dict:
    """Class count, real-irreducible count, rational-irreducible count."""
    return {"classes": t.n, "real": t.real.m, "rational": galois_orbit_count(t)}


def decompose(t: CharacterTable, values) -> list[int]:
    """Integer multiplicities of the irreducibles in a virtual character."""
    values = [Cyclotomic(v) if not isinstance(v, Cyclotomic) else v for v in values]
    if len(values) != t.n:
        raise DecompositionError(f"expected {t.n} class values, got {len(values)}")
    coeffs = []
    for i, chi in enumerate(t.irreducibles):
        a = inner_product(t, values, chi)
        if not a.is_rational() or a.as_fraction().denominator != 1:
            raise DecompositionError(f"multiplicity of chi{i + 1} is {a}, not an integer")
        coeffs.append(int(a.as_fraction()))
    for c in range(t.n):
        s = Cyclotomic(0)
        for a, chi in zip(coeffs, t.irreducibles):
            if a:
                s = s + chi[c] * a
        if s != values[c]:
            raise DecompositionError(f"reconstruction differs at class {t.classes[c].name}")
    return coeffs
