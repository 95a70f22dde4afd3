"""Exact arithmetic in cyclotomic fields.

A :class:`Cyclotomic` is a rational linear combination of powers of
``E(n) = exp(2*pi*i/n)``.  Values are kept in the Zumbroich basis of
``Q(E(n))`` with the smallest possible conductor ``n``, so two numbers are
equal exactly when their representations agree.  Coefficients are stored as
integer numerators over one common positive denominator.

Signs of real values are decided by interval evaluation (``mpmath.iv``) at
doubling precision, after an exact zero test.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from mpmath import iv, libmp

__all__ = [
    "Cyclotomic",
    "InvalidConductorError",
    "NotRealError",
    "canonicalize",
    "E",
    "as_cyclotomic",
    "rational_tests",
    "real_sign",
    "enclosure",
    "parse_value",
    "format_value",
]


class InvalidConductorError(ValueError):
    pass


class NotRealError(ValueError):
    pass


@lru_cache(maxsize=None)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _basis_data(n: int):
    # For every prime power p^k || n: (p, k, step=n/p, inverse of n/p^k mod p^k, p^(k-1))
    data = []
    for p, k in _factor(n):
        pk = p**k
        data.append((p, k, n // p, pow(n // pk, -1, pk), pk // p, pk))
    return tuple(data)


def _reduce_to_basis(terms: dict[int, int], n: int) -> None:
    """Rewrite ``terms`` (exponent -> integer coefficient) in place so that only
    Zumbroich basis exponents of ``Q(E(n))`` remain."""
    for p, _k, step, inv, top, pk in _basis_data(n):
        for e in list(terms):
            c = terms.get(e)
            if not c:
                continue
            digit = ((e * inv) % pk) // top
            if p == 2:
                if digit == 1:
                    del terms[e]
                    f = (e + step) % n
                    terms[f] = terms.get(f, 0) - c
            elif digit == 0:
                del terms[e]
                for b in range(1, p):
                    f = (e + b * step) % n
                    terms[f] = terms.get(f, 0) - c
    for e in [e for e, c in terms.items() if c == 0]:
        del terms[e]


def _shrink_conductor(terms: dict[int, int], n: int) -> tuple[dict[int, int], int]:
    changed = True
    while changed and n > 1:
        changed = False
        if not terms:
            return {}, 1
        for p, k, step, inv, _top, pk in _basis_data(n):
            if k >= 2:
                if all(e % p == 0 for e in terms):
                    terms = {e // p: c for e, c in terms.items()}
                    n //= p
                    terms, n = _halve(terms, n)
                    _reduce_to_basis(terms, n)
                    changed = True
                    break
            elif p != 2:
                # p || n: the value lies in Q(E(n/p)) iff coefficients are
                # constant along each coset e0 + {1..p-1} * n/p
                groups: dict[int, list[int]] = {}
                for e, c in terms.items():
                    f = (e * inv) % pk
                    groups.setdefault((e - f * step) % n, []).append(c)
                if all(len(cs) == p - 1 and len(set(cs)) == 1 for cs in groups.values()):
                    m = n // p
                    new = {}
                    for e0, cs in groups.items():
                        new[(e0 // p) % m] = -cs[0]
                    terms, n = new, m
                    _reduce_to_basis(terms, n)
                    changed = True
                    break
    if not terms:
        return {}, 1
    return terms, n


def _halve(terms: dict[int, int], n: int) -> tuple[dict[int, int], int]:
    # Q(E(2m)) = Q(E(m)) for odd m, via E(2m)^e = -E(2m)^(e+m)
    if n % 4 != 2:
        return terms, n
    m = n // 2
    half: dict[int, int] = {}
    for e, c in terms.items():
        e %= n
        if e % 2:
            e, c = (e + m) % n, -c
        half[e // 2] = half.get(e // 2, 0) + c
    return half, m


def _normalize(terms: dict[int, int], den: int, n: int) -> "Cyclotomic":
    terms, n = _halve(terms, n)
    _reduce_to_basis(terms, n)
    terms, n = _shrink_conductor(terms, n)
    if not terms:
        return Cyclotomic._make(1, (), 1)
    g = den
    for c in terms.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    if g != 1:
        terms = {e: c // g for e, c in terms.items()}
        den //= g
    return Cyclotomic._make(n, tuple(sorted(terms.items())), den)


def canonicalize(raw_terms, n: int) -> "Cyclotomic":
    """Build the canonical cyclotomic ``sum q_e * E(n)^e``.

    ``raw_terms`` maps arbitrary integer exponents (reduced mod ``n``) to
    rationals; ``n`` must be positive.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidConductorError(f"conductor must be a positive integer, got {n!r}")
    items = raw_terms.items() if hasattr(raw_terms, "items") else raw_terms
    fracs = [(int(e) % n, Fraction(q)) for e, q in items]
    den = 1
    for _, q in fracs:
        den = den * q.denominator // math.gcd(den, q.denominator)
    terms: dict[int, int] = {}
    for e, q in fracs:
        terms[e] = terms.get(e, 0) + q.numerator * (den // q.denominator)
    return _normalize(terms, den, n)


class Cyclotomic:
    """Immutable element of a cyclotomic field in canonical form."""

    __slots__ = ("n", "terms", "den", "_hash")

    n: int
    terms: tuple[tuple[int, int], ...]
    den: int

    @classmethod
    def _make(cls, n, terms, den):
        self = object.__new__(cls)
        self.n = n
        self.terms = terms
        self.den = den
        self._hash = None
        return self

    def __new__(cls, value=0):
        return as_cyclotomic(value)

    # construction helpers -------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "Cyclotomic":
        q = Fraction(q)
        if q == 0:
            return cls._make(1, (), 1)
        return cls._make(1, ((0, q.numerator),), q.denominator)

    @classmethod
    def root_of_unity(cls, n: int, e: int = 1) -> "Cyclotomic":
        return canonicalize({e: 1}, n)

    # inspection -----------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.n

    def coefficients(self) -> dict[int, Fraction]:
        return {e: Fraction(c, self.den) for e, c in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return self.n == 1

    def is_real(self) -> bool:
        return self.n == 1 or self == self.conjugate()

    def is_integral(self) -> bool:
        """True for algebraic integers (the Zumbroich basis is an integral basis)."""
        return self.den == 1

    def as_fraction(self) -> Fraction:
        if self.n != 1:
            raise ValueError(f"{self} is not rational")
        if not self.terms:
            return Fraction(0)
        return Fraction(self.terms[0][1], self.den)

    def __complex__(self):
        z = 0j
        for e, c in self.terms:
            z += c * cmath.exp(2j * math.pi * e / self.n)
        return z / self.den

    def __float__(self):
        return complex(self).real

    # arithmetic -----------------------------------------------------------

    def _lift(self, other):
        n = self.n * other.n // math.gcd(self.n, other.n)
        return n, n // self.n, n // other.n

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.n == 1 and other.n == 1:
            return Cyclotomic.from_rational(self.as_fraction() + other.as_fraction())
        n, s1, s2 = self._lift(other)
        den = self.den * other.den // math.gcd(self.den, other.den)
        f1, f2 = den // self.den, den // other.den
        terms: dict[int, int] = {}
        for e, c in self.terms:
            terms[e * s1] = c * f1
        for e, c in other.terms:
            k = e * s2
            terms[k] = terms.get(k, 0) + c * f2
        return _normalize(terms, den, n)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._make(self.n, tuple((e, -c) for e, c in self.terms), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return _ZERO
        if other.n == 1:
            return self._scale(other.terms[0][1], other.den)
        if self.n == 1:
            return other._scale(self.terms[0][1], self.den)
        n, s1, s2 = self._lift(other)
        terms: dict[int, int] = {}
        b = [(e * s2, c) for e, c in other.terms]
        for e1, c1 in self.terms:
            e1 *= s1
            for e2, c2 in b:
                k = (e1 + e2) % n
                terms[k] = terms.get(k, 0) + c1 * c2
        return _normalize(terms, self.den * other.den, n)

    __rmul__ = __mul__

    def _scale(self, num: int, den: int) -> "Cyclotomic":
        if num == 0:
            return _ZERO
        den = self.den * den
        if den < 0:
            num, den = -num, -den
        g = den
        for _, c in self.terms:
            g = math.gcd(g, c * num)
            if g == 1:
                break
        return Cyclotomic._make(
            self.n, tuple((e, c * num // g) for e, c in self.terms), den // g
        )

    def inverse(self) -> "Cyclotomic":
        if not self.terms:
            raise ZeroDivisionError("inverse of zero cyclotomic")
        if self.n == 1:
            return Cyclotomic.from_rational(1 / self.as_fraction())
        # product of the other Galois conjugates, divided by the norm
        prod = _ONE
        for k in range(2, self.n):
            if math.gcd(k, self.n) == 1:
                prod = prod * self.galois(k)
        norm = (self * prod).as_fraction()
        return prod._scale(norm.denominator, norm.numerator)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.n == 1:
            if not other.terms:
                raise ZeroDivisionError("division by zero cyclotomic")
            return self._scale(other.den, other.terms[0][1])
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = _ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1)

    def galois(self, k: int) -> "Cyclotomic":
        """Image under the field automorphism ``E(n) -> E(n)^k``."""
        if self.n == 1:
            return self
        if math.gcd(k, self.n) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.n}")
        return _normalize({(e * k) % self.n: c for e, c in self.terms}, self.den, self.n)

    # comparisons ----------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.n == other.n and self.den == other.den and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            if self.n == 1:
                self._hash = hash(self.as_fraction())
            else:
                self._hash = hash((self.n, self.terms, self.den))
        return self._hash

    def __reduce__(self):
        return (Cyclotomic._make, (self.n, self.terms, self.den))

    def __repr__(self):
        return f"Cyclotomic({format_value(self)!r})"

    def __str__(self):
        if self.n == 1:
            return str(self.as_fraction())
        parts = []
        for e, c in self.terms:
            q = Fraction(c, self.den)
            root = "1" if e == 0 else (f"E({self.n})" if e == 1 else f"E({self.n})^{e}")
            if q == 1:
                parts.append(f"+{root}")
            elif q == -1:
                parts.append(f"-{root}")
            else:
                parts.append(f"{'+' if q > 0 else '-'}{abs(q)}*{root}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


_ZERO = Cyclotomic._make(1, (), 1)
_ONE = Cyclotomic._make(1, ((0, 1),), 1)


def _coerce(x):
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Rational)):
        return Cyclotomic.from_rational(x)
    return NotImplemented


def as_cyclotomic(x) -> Cyclotomic:
    c = _coerce(x)
    if c is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to Cyclotomic")
    return c


def E(n: int, e: int = 1) -> Cyclotomic:
    """The root of unity ``exp(2*pi*i*e/n)``."""
    return Cyclotomic.root_of_unity(n, e)


def rational_tests(a: Cyclotomic) -> dict:
    a = as_cyclotomic(a)
    rat = a.is_rational()
    return {
        "is_zero": a.is_zero(),
        "is_rational": rat,
        "is_real": a.is_real(),
        "as_rational": a.as_fraction() if rat else None,
    }


def _mpf_to_fraction(raw) -> Fraction:
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def enclosure(a: Cyclotomic, prec: int = 64) -> tuple[Fraction, Fraction]:
    """Rigorous rational bounds ``lo <= a <= hi`` for a real cyclotomic."""
    a = as_cyclotomic(a)
    if a.n == 1:
        q = a.as_fraction()
        return q, q
    old = iv.prec
    iv.prec = prec + 8
    try:
        total = iv.mpf(0)
        for e, c in a.terms:
            total += c * iv.cos(2 * iv.pi * iv.mpf(e) / a.n)
        total = total / a.den
        lo, hi = total._mpi_
    finally:
        iv.prec = old
    return _mpf_to_fraction(lo), _mpf_to_fraction(hi)


def real_sign(a, start_prec: int = 64) -> int:
    """Sign (-1, 0, +1) of a real cyclotomic number, decided exactly."""
    a = as_cyclotomic(a)
    if a.is_zero():
        return 0
    if a.n == 1:
        return 1 if a.terms[0][1] > 0 else -1
    if a != a.conjugate():
        raise NotRealError(f"{a} is not real")
    prec = start_prec
    while True:
        lo, hi = enclosure(a, prec)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2


def parse_value(v) -> Cyclotomic:
    """Decode a table entry: int, ``"a/b"`` string, or ``{"n": .., "terms": ..}``."""
    if isinstance(v, bool):
        raise ValueError(f"invalid value {v!r}")
    if isinstance(v, int):
        return Cyclotomic.from_rational(v)
    if isinstance(v, str):
        return Cyclotomic.from_rational(Fraction(v))
    if isinstance(v, float):
        if not v.is_integer():
            raise ValueError(f"non-integral float {v!r}; use an \"a/b\" string")
        return Cyclotomic.from_rational(int(v))
    if isinstance(v, dict):
        try:
            n = v["n"]
            terms = v["terms"]
        except KeyError as exc:
            raise ValueError(f"cyclotomic value missing key {exc}") from None
        return canonicalize({int(e): Fraction(q) for e, q in terms}, n)
    raise ValueError(f"cannot parse value {v!r}")


def format_value(a: Cyclotomic):
    """Inverse of :func:`parse_value`."""
    a = as_cyclotomic(a)
    if a.n == 1:
        q = a.as_fraction()
        return q.numerator if q.denominator == 1 else str(q)
    return {"n": a.n, "terms": [[e, str(Fraction(c, a.den))] for e, c in a.terms]}
