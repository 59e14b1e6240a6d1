from __future__ import annotations

from hypothesis import given, settings

from stskein.order import (EQUAL, GREATER, LESS, canonical_arrangement, compare, compare_name,
                           enumerate_level, homologous, index, is_canonical_arrangement, is_gap_free,
                           level, minimum)

from strategies import loop_monomials


def test_index_and_level():
    assert index(((0, 1), (1, 1), (2, 1))) == 2
    assert index(((0, 3),)) == 0
    assert index(((0, 1), (3, 2))) == 3
    assert index(()) == 0
    assert level(((0, 2), (1, -2))) == 0
    assert level(()) == 0
    assert level(((0, 1), (1, 1), (2, 1))) == 3


def test_compare_examples():
    assert compare(((0, 2),), ((0, 1), (1, 1))) == LESS
    assert compare(((0, 1), (2, 1)), ((1, 1), (2, 1))) == GREATER
    # gap monomial against a consecutive one of the same level and index
    assert compare(((0, 1), (2, 1)), ((0, -1), (1, 1), (2, 2))) == LESS
    # equal absolute value at the top: the larger signed exponent is smaller
    assert compare(((0, -1), (1, 2)), ((0, 3), (1, -2))) == LESS
    # levels differ, so level decides
    assert compare(((0, 1), (1, 2)), ((0, 1), (1, -2))) == GREATER


def test_compare_name():
    assert compare_name(((0, 1),), ((0, 2),)) == "LT"
    assert compare_name(((0, 1),), ((0, 1),)) == "EQ"
    assert compare_name(((0, 2),), ((0, 1),)) == "GT"


def test_homologous():
    assert homologous(((0, -1), (1, 2), (2, -1))) == ((0, -1), (1, 2), (2, -1))
    assert homologous(((3, -2),)) == ((3, -2),)


def test_enumerate_level():
    assert enumerate_level(2, 1, 2) == [((0, 2),), ((0, 1), (1, 1))]
    assert enumerate_level(0, 0, 3) == [()]
    assert enumerate_level(1, 0, 3) == [((0, 1),)]
    for k in range(-3, 4):
        mons = enumerate_level(k, 2, 2)
        if abs(k) <= 2:
            assert mons[0] == minimum(k)
        assert all(compare(a, b) == LESS for a, b in zip(mons, mons[1:]))
        assert all(level(m) == k and is_gap_free(m) and is_canonical_arrangement(m) for m in mons)


def test_enumerate_literal_mode_contains_all_arrangements():
    lit = enumerate_level(1, 1, 2, canonical=False)
    assert ((0, 2), (1, -1)) in lit and ((0, -1), (1, 2)) in lit
    can = enumerate_level(1, 1, 2)
    assert ((0, 2), (1, -1)) in can and ((0, -1), (1, 2)) not in can


def test_canonical_arrangement():
    assert canonical_arrangement(((0, 1), (1, 2))) == ((0, 2), (1, 1))
    assert canonical_arrangement(((0, 1), (1, -1))) == ((0, -1), (1, 1))
    assert canonical_arrangement(((0, 2), (1, -1), (2, -2))) == ((0, -2), (1, 2), (2, -1))


@given(loop_monomials())
def test_canonical_arrangement_is_least(m):
    import itertools
    c = canonical_arrangement(m)
    assert is_canonical_arrangement(c)
    for perm in set(itertools.permutations([e for _, e in m])):
        other = tuple((i, e) for (i, _), e in zip(m, perm))
        assert compare(c, other) <= 0


@settings(max_examples=300)
@given(loop_monomials(), loop_monomials(), loop_monomials())
def test_total_order(a, b, c):
    assert compare(a, b) == -compare(b, a)
    assert (compare(a, b) == EQUAL) == (a == b)
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0
