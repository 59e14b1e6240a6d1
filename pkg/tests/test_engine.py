from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from stskein.engine import (AlgebraElement, IndexOutOfRange, ShrinkNotAllowed, StrandMismatch, Word,
                            braid_free_coefficient, embed, equal, expand_macro, identity, multiply,
                            normal_form, restrict)
from stskein.rings import LaurentPoly

from strategies import words

q = LaurentPoly.q()


def w(n, *letters):
    return Word(n, tuple(letters))


def g(i, e=1):
    return ("g", i, e)


T = ("t", 0, 1)
TI = ("t", 0, -1)


def test_expand_macro():
    assert expand_macro(("t", 1, 1)) == [g(1), T, g(1)]
    assert expand_macro(("tp", 1, -1)) == [g(1), TI, g(1, -1)]
    assert expand_macro(("t", 0, 1)) == [T]
    assert expand_macro(("t", 2, -1)) == [g(2, -1), g(1, -1), TI, g(1, -1), g(2, -1)]


def test_quadratic_relation():
    assert normal_form(w(2, g(1), g(1))) == (normal_form(w(2, g(1))).scale(q - 1)
                                            + AlgebraElement.one(2).scale(q))


def test_loop_definition():
    x = normal_form(w(2, g(1), T, g(1)))
    assert x == AlgebraElement.monomial(2, {1: 1})


def test_tprime1_expansion():
    # q^-1 g_1 + (q^-1 - 1) for g_1^-1, then push t through
    x = normal_form(w(2, ("tp", 1, 1)))
    qi = q ** -1
    expected = (AlgebraElement.monomial(2, {1: 1}).scale(qi + (qi - 1) ** 2)
                + multiply(AlgebraElement.monomial(2, {1: 1}), normal_form(w(2, g(1)))).scale(qi * (qi - 1)))
    assert x == expected


def test_tprime1_inverse_is_inverse():
    x = normal_form(w(2, ("tp", 1, 1), ("tp", 1, -1)))
    assert x == AlgebraElement.one(2)


@pytest.mark.parametrize("lhs,rhs", [
    ((g(1), g(2), g(1)), (g(2), g(1), g(2))),
    ((g(1), T, g(1), T), (T, g(1), T, g(1))),
    ((("t", 0, 1), ("t", 1, 1)), (("t", 1, 1), ("t", 0, 1))),
    ((("t", 1, 2), ("t", 2, -1)), (("t", 2, -1), ("t", 1, 2))),
])
def test_presentation_identities(lhs, rhs):
    assert equal(normal_form(w(3, *lhs)), normal_form(w(3, *rhs)))


@pytest.mark.parametrize("n", [3, 4])
def test_loop_rules(n):
    for i in range(1, n):
        # g_i t_{i-1} = t_i g_i^{-1}
        assert normal_form(w(n, g(i), ("t", i - 1, 1))) == normal_form(w(n, ("t", i, 1), g(i, -1)))
        # g_i t_i^{-1} = t_{i-1}^{-1} g_i^{-1}
        assert normal_form(w(n, g(i), ("t", i, -1))) == normal_form(w(n, ("t", i - 1, -1), g(i, -1)))
        # g_i t_i = q t_{i-1} g_i + (q - 1) t_i
        assert normal_form(w(n, g(i), ("t", i, 1))) == (
            normal_form(w(n, ("t", i - 1, 1), g(i))).scale(q) + normal_form(w(n, ("t", i, 1))).scale(q - 1))
        # g_i t_{i-1}^{-1} = q t_i^{-1} g_i + (q - 1) t_{i-1}^{-1}
        assert normal_form(w(n, g(i), ("t", i - 1, -1))) == (
            normal_form(w(n, ("t", i, -1), g(i))).scale(q)
            + normal_form(w(n, ("t", i - 1, -1))).scale(q - 1))
        for k in range(n):
            if k > i or k < i - 1:
                assert normal_form(w(n, g(i), ("t", k, 1))) == normal_form(w(n, ("t", k, 1), g(i)))


def test_multiply_examples():
    a = normal_form(w(3, T, g(2), g(1, -1)))
    assert multiply(a, AlgebraElement.one(3)) == a
    assert multiply(normal_form(w(2, ("t", 1, 1))), normal_form(w(2, ("t", 1, -1)))) == AlgebraElement.one(2)
    with pytest.raises(StrandMismatch):
        multiply(AlgebraElement.one(2), AlgebraElement.one(3))


def test_embed_restrict():
    x = normal_form(w(2, ("t", 1, 1), g(1)))
    assert embed(x, 2) == x
    y = embed(x, 3)
    assert y.n == 3 and restrict(y, 2) == x
    assert embed(normal_form(w(2, g(1))), 3) == normal_form(w(3, g(1)))
    with pytest.raises(ShrinkNotAllowed):
        embed(y, 2)


def test_index_errors():
    with pytest.raises(IndexOutOfRange):
        Word(2, (g(2),))
    with pytest.raises(IndexOutOfRange):
        Word(2, (("t", 2, 1),))


def test_json_round_trip():
    x = normal_form(w(3, ("tp", 2, -1), g(1), T))
    assert AlgebraElement.from_json(x.to_json()) == x
    assert x.to_json()["n"] == 3


def test_braid_free_coefficient_uses_inverse_generators():
    # g_1^{-1} has no identity component in the basis of inverse generators
    x = normal_form(w(2, g(1, -1)))
    assert braid_free_coefficient(x, ()) == LaurentPoly.zero()
    assert braid_free_coefficient(AlgebraElement.one(2).scale(q), ()) == q


@given(words(max_len=7), words(max_len=7), words(max_len=7))
def test_associativity(a, b, c):
    n = max(a.n, b.n, c.n)
    x, y, z = (normal_form(u.on(n)) for u in (a, b, c))
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@given(words(max_len=8, macros=True), words(max_len=8, macros=True))
def test_normal_form_is_a_homomorphism(a, b):
    n = max(a.n, b.n)
    a, b = a.on(n), b.on(n)
    assert normal_form(a * b) == multiply(normal_form(a), normal_form(b))


@given(words(max_len=8, macros=True))
def test_inverse_word(a):
    assert normal_form(a * a.inverse()) == AlgebraElement.one(a.n)


@given(words(max_len=8, macros=True))
def test_normal_form_idempotent(a):
    x = normal_form(a)
    again = AlgebraElement.from_json(x.to_json())
    rebuilt = AlgebraElement.zero(x.n)
    for (lo, perm), c in again.items():
        rebuilt = rebuilt + multiply(AlgebraElement.monomial(x.n, lo), AlgebraElement.monomial(x.n, (), perm)).scale(c)
    assert rebuilt == x
