"""Shared hypothesis strategies."""

from __future__ import annotations

from hypothesis import strategies as st

from stskein.engine import Word


@st.composite
def words(draw, n_min=1, n_max=4, max_len=8, macros=False):
    n = draw(st.integers(n_min, n_max))
    kinds = ["t", "g"] if n > 1 else ["t"]
    letters = []
    for _ in range(draw(st.integers(0, max_len))):
        kind = draw(st.sampled_from(kinds))
        e = draw(st.sampled_from([1, -1]))
        if kind == "g":
            letters.append(("g", draw(st.integers(1, n - 1)), e))
        elif macros and n > 1 and draw(st.booleans()):
            letters.append((draw(st.sampled_from(["t", "tp"])), draw(st.integers(1, n - 1)), e))
        else:
            letters.append(("t", 0, e))
    return Word(n, tuple(letters))


@st.composite
def word_pairs(draw, n_min=2, n_max=4, max_len=6):
    n = draw(st.integers(n_min, n_max))
    a = draw(words(n, n, max_len))
    b = draw(words(n, n, max_len))
    return a, b


@st.composite
def gap_free(draw, max_index=3, max_abs_exp=3):
    top = draw(st.integers(0, max_index))
    vals = [e for e in range(-max_abs_exp, max_abs_exp + 1) if e]
    return tuple((i, draw(st.sampled_from(vals))) for i in range(top + 1))


@st.composite
def loop_monomials(draw, max_index=4, max_abs_exp=4):
    idx = sorted(draw(st.sets(st.integers(0, max_index), max_size=max_index + 1)))
    vals = [e for e in range(-max_abs_exp, max_abs_exp + 1) if e]
    return tuple((i, draw(st.sampled_from(vals))) for i in idx)
