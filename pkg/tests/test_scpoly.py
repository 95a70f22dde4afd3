from fractions import Fraction

import pytest

from conftest import all_characters_rational, table
from scharacters import bundled
from scharacters.cyclo import real_sign
from scharacters.scpoly import (
    closed_form_vertices,
    contains,
    dilate,
    facet_value,
    polarity_suite,
    simplex_from_table,
)

ALL = bundled.bundled_names()


def verts(s):
    return {tuple(x.as_fraction() for x in v) for v in s.vertices}


def test_s4_vertices_are_truncated_columns():
    t = table("S4")
    s = simplex_from_table(t.real)
    cols = {tuple(t.irreducibles[i][j].as_fraction() for i in range(1, 5)) for j in range(5)}
    assert verts(s) == cols
    assert (1, 2, 3, 3) in verts(s)
    assert polarity_suite(s) == {
        "is_lattice": True, "is_reflexive": True, "is_self_polar": True, "is_integral": True
    }


def test_l27_vertices():
    s = simplex_from_table(table("L2(7)").real)
    h = Fraction(-1, 2)
    assert verts(s) == {(3, 6, 7, 8), (-1, 2, -1, 0), (0, 0, 1, -1), (1, 0, -1, 0), (h, -1, 0, 1)}
    assert polarity_suite(s)["is_lattice"] is False


def test_c2_segment():
    s = simplex_from_table(table("C2").real)
    assert s.dim == 1 and verts(s) == {(1,), (-1,)}
    assert set(closed_form_vertices(table("C2").real)) == set(s.vertices)


def test_closed_form_l27_halves_row_two():
    rt = table("L2(7)").real
    cf = closed_form_vertices(rt)
    assert tuple(x.as_fraction() for x in cf[4]) == (Fraction(-1, 2), -1, 0, 1)


def test_closed_form_s4_unchanged():
    rt = table("S4").real
    cf = closed_form_vertices(rt)
    assert [tuple(v) for v in cf] == [tuple(rt.V[i][j] for i in range(1, 5)) for j in range(5)]


@pytest.mark.parametrize("name", ALL)
def test_closed_form_agrees_with_solve(name):
    rt = table(name).real
    closed_form_vertices(rt, check=simplex_from_table(rt))


@pytest.mark.parametrize("name", ALL)
def test_vertex_facet_duality(name):
    s = simplex_from_table(table(name).real)
    for j in range(s.dim + 1):
        for k, v in enumerate(s.vertices):
            val = facet_value(s, j, v)
            if j == k:
                assert real_sign(val) > 0
            else:
                assert val.is_zero()


@pytest.mark.parametrize("name", ALL)
def test_origin_strictly_inside(name):
    s = simplex_from_table(table(name).real)
    for j in range(s.dim + 1):
        assert facet_value(s, j, (0,) * s.dim) == 1


@pytest.mark.parametrize("name", [n for n in ALL if all_characters_rational(table(n))])
def test_rational_tables_self_polar(name):
    flags = polarity_suite(simplex_from_table(table(name).real))
    assert flags["is_lattice"] and flags["is_reflexive"] and flags["is_self_polar"]


@pytest.mark.parametrize("name", ALL)
def test_double_dilate_is_integral(name):
    rt = table(name).real
    s2 = dilate(simplex_from_table(rt), 2)
    flags = polarity_suite(s2)
    assert flags["is_integral"]
    if rt.is_rational:
        assert flags["is_lattice"]


def test_l27_double_dilate_vertex():
    s2 = dilate(simplex_from_table(table("L2(7)").real), 2)
    assert (-1, -2, 0, 2) in verts(s2)
    assert polarity_suite(s2)["is_lattice"]


def test_dilate_identity_and_c2_triple():
    s = simplex_from_table(table("C2").real)
    assert dilate(s, 1) is s
    s3 = dilate(s, 3)
    assert verts(s3) == {(3,), (-3,)}
    assert sum(contains(s3, (k,)) for k in range(-5, 6)) == 7


def test_dilate_rejects_zero():
    s = simplex_from_table(table("C2").real)
    with pytest.raises(ValueError):
        dilate(s, 0)


def test_contains_examples():
    s = simplex_from_table(table("A8").real)
    assert contains(s, (0,) * s.dim)
    s4 = simplex_from_table(table("S4").real)
    v = s4.vertices[0]
    assert contains(s4, v)
    assert not contains(s4, tuple(2 * x for x in v))
    with pytest.raises(ValueError):
        contains(s4, (0, 0))
