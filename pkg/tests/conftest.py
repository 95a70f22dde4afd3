from __future__ import annotations

import cmath
import math
from functools import lru_cache

import pytest
from hypothesis import settings

from scharacters import bundled

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@lru_cache(maxsize=None)
def table(name):
    return bundled.load(name)


def numeric(raw_terms, n):
    """Independent complex evaluation of sum q_e * exp(2 pi i e / n)."""
    return sum(float(q) * cmath.exp(2j * math.pi * e / n) for e, q in raw_terms.items())


def all_characters_rational(t) -> bool:
    return all(v.is_rational() for row in t.irreducibles for v in row)


@pytest.fixture(scope="session")
def load():
    return table


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("abcdef")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
