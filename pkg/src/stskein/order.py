"""Total order on loop monomials.

Monomials are compared by level (sum of exponents), then index (largest
loop index), then by their sorted index lists, where at the first
differing position the list carrying the smaller index is the greater
monomial, and finally by the exponents read from the highest position
down: smaller absolute value is smaller, and for equal absolute values
the larger signed exponent is smaller.
"""

from __future__ import annotations

import itertools
from functools import cmp_to_key, lru_cache
from typing import List, Tuple

from .engine import Loops, loops_from_dict

LESS, EQUAL, GREATER = -1, 0, 1
_NAMES = {LESS: "LT", EQUAL: "EQ", GREATER: "GT"}


def _as_loops(m) -> Loops:
    if isinstance(m, dict):
        return loops_from_dict(m)
    return tuple(m)


def index(m) -> int:
    """Largest loop index; 0 for pure t-powers and for 1.

    >>> index(((0, 1), (3, 2)))
    3
    >>> index(())
    0
    """
    m = _as_loops(m)
    return m[-1][0] if m else 0


def level(m) -> int:
    """Sum of exponents.

    >>> level(((0, 2), (1, -2)))
    0
    """
    return sum(e for _, e in _as_loops(m))


@lru_cache(maxsize=1 << 16)
def order_key(m: Loops):
    return (level(m), index(m), tuple(i for i, _ in m), tuple(e for _, e in m))


def compare(a, b) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``.

    >>> compare(((0, 2),), ((0, 1), (1, 1)))
    -1
    >>> compare(((0, 1), (2, 1)), ((1, 1), (2, 1)))
    1
    >>> compare(((0, -1), (1, 2)), ((0, 3), (1, -2)))
    -1
    >>> compare(((0, 1), (1, 2)), ((0, 1), (1, -2)))
    1
    """
    ka = order_key(_as_loops(a))
    kb = order_key(_as_loops(b))
    if ka[0] != kb[0]:
        return LESS if ka[0] < kb[0] else GREATER
    if ka[1] != kb[1]:
        return LESS if ka[1] < kb[1] else GREATER
    ia, ib = ka[2], kb[2]
    if ia != ib:
        for x, y in zip(ia, ib):
            if x != y:
                return GREATER if x < y else LESS
        # equal prefixes with equal top index force equal lists
        assert not (ia and ib), "index lists cannot be proper prefixes with equal top index"
        # only the empty monomial can be a prefix here; it has no loops
        return LESS if not ia else GREATER
    for x, y in zip(reversed(ka[3]), reversed(kb[3])):
        if abs(x) != abs(y):
            return LESS if abs(x) < abs(y) else GREATER
        if x != y:
            return LESS if x > y else GREATER
    return EQUAL


def compare_name(a, b) -> str:
    return _NAMES[compare(a, b)]


sort_key = cmp_to_key(compare)


def is_gap_free(m: Loops) -> bool:
    """Support is exactly 0..index (the empty monomial counts)."""
    return all(i == p for p, (i, _) in enumerate(m))


def arrangement_key(e: int):
    """Sort key putting larger absolute values first, negatives before positives."""
    return (-abs(e), e)


def is_canonical_arrangement(m: Loops) -> bool:
    """Exponents read along the loops are in ``arrangement_key`` order.

    Among all rearrangements of the exponents this is the least one in the
    monomial order.

    >>> is_canonical_arrangement(((0, 2), (1, 1)))
    True
    >>> is_canonical_arrangement(((0, 1), (1, 2)))
    False
    >>> is_canonical_arrangement(((0, -2), (1, 2), (2, -1)))
    True
    """
    return all(arrangement_key(m[p][1]) <= arrangement_key(m[p + 1][1]) for p in range(len(m) - 1))


def canonical_arrangement(m: Loops) -> Loops:
    """The least rearrangement of the exponents of ``m`` over the same indices."""
    m = tuple(m)
    exps = sorted((e for _, e in m), key=arrangement_key)
    return tuple((i, e) for (i, _), e in zip(m, exps))


def is_basis_monomial(m: Loops, canonical: bool = True) -> bool:
    m = tuple(m)
    if not is_gap_free(m):
        return False
    return is_canonical_arrangement(m) if canonical else True


def homologous(m) -> Loops:
    """t'-monomial to t-monomial: the data is the same, only the reading changes."""
    return _as_loops(m)


def enumerate_level(k: int, max_index: int, max_abs_exp: int, canonical: bool = True) -> List[Loops]:
    """Basis monomials of level ``k`` within the bounds, ascending.

    >>> enumerate_level(2, 1, 2)
    [((0, 2),), ((0, 1), (1, 1))]
    >>> enumerate_level(0, 0, 3)
    [()]
    """
    out: List[Loops] = []
    if k == 0:
        out.append(())
    values = [e for e in range(-max_abs_exp, max_abs_exp + 1) if e]
    for m in range(max_index + 1):
        if canonical:
            ordered = sorted(values, key=arrangement_key)
            combos = itertools.combinations_with_replacement(ordered, m + 1)
        else:
            combos = itertools.product(values, repeat=m + 1)
        for exps in combos:
            if sum(exps) == k:
                out.append(tuple(enumerate(exps)))
    out.sort(key=sort_key)
    return out


def minimum(k: int) -> Loops:
    return ((0, k),) if k else ()


def format_monomial(m: Loops, prime: bool = False) -> str:
    if not m:
        return "1"
    parts = []
    for i, e in m:
        name = "t" if i == 0 else (f"t'[{i}]" if prime else f"t[{i}]")
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def loops_json(m: Loops) -> list:
    return [[i, e] for i, e in m]


def loops_from_json(data) -> Loops:
    return loops_from_dict({i: e for i, e in data})
