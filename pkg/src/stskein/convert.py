"""Closed-form rewriting of loop and braid products.

Every expansion below is a sum of terms ``c * X * B`` where ``X`` is a
product of loop generators and ``B`` a braid word.  Terms whose loops sit
to the left of the braid part are assembled directly in the Hecke algebra
(no loop is pushed anywhere).  The result is always an engine normal form,
so comparing an expansion with the engine's own reduction of the left-hand
side is a structural equality test.

The conversion of t'-monomials to the t/g normal form is built from these
pieces: a single power ``t'_m^k`` is obtained from ``t'_{m-1}^k`` by
conjugating with ``g_m``, and a monomial is the product of its powers, each
of which commutes with the braid part already produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .engine import (
    AlgebraElement,
    Hecke,
    IndexOutOfRange,
    Letter,
    Loops,
    Word,
    hecke_mul,
    hecke_word,
    identity,
    loops_from_dict,
    loops_mul,
    normal_form,
    perm_extend,
    with_loops,
)
from .rings import LaurentPoly

q = LaurentPoly.q()
QI = LaurentPoly.q(-1)
ONE = LaurentPoly.one()


class GrammarViolation(ValueError):
    """The input is not a t'-monomial of the expected shape."""


# ---------------------------------------------------------------------------
# braid blocks


@dataclass(frozen=True)
class DeltaWord:
    """The braid word g_top ... g_bottom, skipping ``omitted`` if given.

    Descending when ``top >= bottom``, ascending otherwise.

    >>> DeltaWord(3, 1).indices()
    (3, 2, 1)
    >>> DeltaWord(1, 3, omitted=2).indices()
    (1, 3)
    """

    top: int
    bottom: int
    omitted: Optional[int] = None

    def indices(self) -> Tuple[int, ...]:
        step = -1 if self.top >= self.bottom else 1
        return tuple(i for i in range(self.top, self.bottom + step, step) if i != self.omitted)

    def letters(self, sign: int = 1) -> List[Tuple[int, int]]:
        return [(i, sign) for i in self.indices()]

    def length(self) -> int:
        return len(self.indices())


def _desc(a: int, b: int, sign: int = 1) -> List[Tuple[int, int]]:
    """g_a g_{a-1} ... g_b (empty when a < b)."""
    return [(i, sign) for i in range(a, b - 1, -1)]


def _asc(a: int, b: int, sign: int = 1) -> List[Tuple[int, int]]:
    """g_a g_{a+1} ... g_b (empty when a > b)."""
    return [(i, sign) for i in range(a, b + 1)]


# ---------------------------------------------------------------------------
# assembling right-hand sides


class _Sum:
    """Accumulator for terms ``coeff * X^loops * braid``."""

    def __init__(self, n: int):
        self.n = n
        self.out = AlgebraElement.zero(n)

    def add(self, coeff, loops: Dict[int, int], braid: Iterable[Tuple[int, int]] = ()) -> "_Sum":
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.constant(coeff)
        if c:
            lo = loops_from_dict({i: e for i, e in loops.items() if e})
            self.out = self.out + with_loops(self.n, lo, hecke_word(self.n, braid), c)
        return self

    def add_word(self, coeff, letters: Sequence[Letter]) -> "_Sum":
        """A term whose letters are not in loops-then-braid order."""
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.constant(coeff)
        if c:
            self.out = self.out + normal_form(Word(self.n, tuple(letters))).scale(c)
        return self


def _need(n: int, *indices: int) -> None:
    for i in indices:
        if not 0 <= i <= n - 1:
            raise IndexOutOfRange(f"index {i} does not fit on {n} strands")


def _gletters(braid: Iterable[Tuple[int, int]]) -> List[Letter]:
    return [("g", i, s) for i, s in braid]


# ---------------------------------------------------------------------------
# g_{m+1}^{+-1} t_m^{+-k} and t_i^k g_i


def g_next_t_power_word(m: int, k: int, sign: int, n: int | None = None) -> Word:
    n = m + 2 if n is None else n
    return Word(n, (("g", m + 1, sign), ("t", m, sign * k)))


def expand_g_next_t_power(m: int, k: int, sign: int = 1, n: int | None = None) -> AlgebraElement:
    """``g_{m+1} t_m^k`` (sign 1) or ``g_{m+1}^{-1} t_m^{-k}`` (sign -1), k >= 1.

    >>> print(expand_g_next_t_power(0, 1))
    (-1 + q^(-1))*t[1] + q^(-1)*t[1]*g[1]
    """
    n = m + 2 if n is None else n
    if k < 1:
        raise ValueError("k must be positive")
    _need(n, m + 1)
    e = sign
    c = QI - 1 if e > 0 else q - 1
    lead = QI ** (k - 1) if e > 0 else q ** (k - 1)
    s = _Sum(n).add(lead, {m + 1: e * k}, [(m + 1, -e)])
    for j in range(1, k):
        coeff = (QI ** (k - 1 - j) if e > 0 else q ** (k - 1 - j)) * c
        s.add(coeff, {m: e * j, m + 1: e * (k - j)})
    return s.out


def t_power_times_g_word(i: int, k: int, n: int | None = None) -> Word:
    n = i + 1 if n is None else n
    return Word(n, (("t", i, k), ("g", i, 1)))


def expand_t_power_times_g(i: int, k: int, n: int | None = None) -> AlgebraElement:
    """``t_i^k g_i`` for nonzero k, with the braid generator moved left.

    For k > 0 the result is a sum of loop products plus ``q^k g_i t_{i-1}^k``;
    for k < 0 the braid generator comes out inverted.
    """
    n = i + 1 if n is None else n
    if i < 1 or k == 0:
        raise ValueError("need i >= 1 and k != 0")
    _need(n, i)
    s = _Sum(n)
    if k > 0:
        for j in range(k):
            s.add(q ** j * (q - 1), {i - 1: j, i: k - j})
        s.add_word(q ** k, [("g", i, 1), ("t", i - 1, k)])
    else:
        K = -k
        for u in range(1, K):
            s.add(QI ** (u - 1) * (QI - 1), {i - 1: -u, i: -(K - u)})
        s.add_word(QI ** (K - 1), [("g", i, -1), ("t", i - 1, -K)])
    return s.out


# ---------------------------------------------------------------------------
# (g_r g_{r-1} ... g_{r-s}) t_k^{+-1}


def desc_block_times_t_word(r: int, s: int, k: int, sign: int, n: int | None = None) -> Word:
    n = max(r, k) + 1 if n is None else n
    return Word(n, tuple(_gletters(_desc(r, r - s))) + (("t", k, sign),))


def expand_desc_block_times_t(r: int, s: int, k: int, sign: int = 1, n: int | None = None) -> AlgebraElement:
    """``(g_r ... g_{r-s}) t_k`` or ``(g_r ... g_{r-s}) t_k^{-1}``."""
    n = max(r, k) + 1 if n is None else n
    if s < 0 or r - s < 1:
        raise IndexOutOfRange("need s >= 0 and r - s >= 1")
    _need(n, r, k)
    lo = r - s
    block = _desc(r, lo)
    out = _Sum(n)
    if sign > 0:
        if k > r or k < lo - 1:
            out.add(1, {k: 1}, block)
        elif k == lo - 1:
            out.add(1, {r: 1}, _desc(r, lo, -1))
        elif k == r:
            out.add(q, {r - 1: 1}, block)
            out.add(q - 1, {r: 1}, _desc(r - 1, lo))
        elif k == lo:
            out.add(q, {lo - 1: 1}, block)
            out.add(q - 1, {r: 1}, _desc(r, lo + 1, -1))
        elif lo < k < r:
            out.add(q, {k - 1: 1}, block)
            out.add(q - 1, {r: 1}, _desc(r, k + 1, -1) + _desc(k - 1, lo))
        else:  # pragma: no cover - the cases above are exhaustive
            raise IndexOutOfRange("no case applies")
    else:
        if k > r or k < lo - 1:
            out.add(1, {k: -1}, block)
        elif lo <= k <= r:
            out.add(1, {k - 1: -1}, _desc(r, k + 1) + [(k, -1)] + _desc(k - 1, lo))
        elif k == lo - 1:
            out.add(q ** (s + 1), {r: -1}, block)
            for j in range(1, s + 2):
                out.add((q - 1) * q ** (s - j + 1), {r - j: -1}, _desc(r, r - j + 2) + _desc(r - j, lo))
        else:  # pragma: no cover
            raise IndexOutOfRange("no case applies")
    return out.out


# ---------------------------------------------------------------------------
# t_k (g_k ... g_r)


def t_times_desc_block_word(k: int, r: int, n: int | None = None) -> Word:
    n = k + 1 if n is None else n
    return Word(n, (("t", k, 1),) + tuple(_gletters(_desc(k, r))))


def expand_t_times_desc_block(k: int, r: int, n: int | None = None) -> AlgebraElement:
    """``t_k (g_k ... g_r)`` with the loop moved to the right of the braid."""
    n = k + 1 if n is None else n
    if not k >= r >= 1:
        raise IndexOutOfRange("need k >= r >= 1")
    _need(n, k)
    out = _Sum(n)
    for i in range(0, k - r + 1):
        braid = DeltaWord(k, r, omitted=k - i).letters()
        out.add_word(q ** i * (q - 1), _gletters(braid) + [("t", k - i, 1)])
    out.add_word(q ** (k - r + 1), _gletters(_desc(k, r)) + [("t", r - 1, 1)])
    return out.out


# ---------------------------------------------------------------------------
# (g_r g_{r+1} ... g_{r+s}) t_k^{+-1}


def asc_block_times_t_word(r: int, s: int, k: int, sign: int, n: int | None = None) -> Word:
    n = max(r + s, k) + 1 if n is None else n
    return Word(n, tuple(_gletters(_asc(r, r + s))) + (("t", k, sign),))


def expand_asc_block_times_t(r: int, s: int, k: int, sign: int = 1, n: int | None = None) -> AlgebraElement:
    """``(g_r ... g_{r+s}) t_k`` or ``(g_r ... g_{r+s}) t_k^{-1}``."""
    n = max(r + s, k) + 1 if n is None else n
    if s < 0 or r < 1:
        raise IndexOutOfRange("need s >= 0 and r >= 1")
    _need(n, r + s, k)
    top = r + s
    block = _asc(r, top)
    out = _Sum(n)
    if k >= top + 1 or k < r - 1:
        out.add(1, {k: sign}, block)
    elif sign > 0 and k < top:
        out.add(1, {k + 1: 1}, _asc(r, k) + [(k + 1, -1)] + _asc(k + 2, top))
    elif sign > 0:
        for i in range(r, top + 1):
            out.add((q - 1) * q ** (top - i), {i: 1}, DeltaWord(r, top, omitted=i).letters())
        out.add(q ** (s + 1), {r - 1: 1}, block)
    elif k < top:
        out.add(q, {k + 1: -1}, block)
        out.add(q - 1, {r - 1: -1}, _asc(r, k, -1) + _asc(k + 2, top))
    else:
        out.add(1, {r - 1: -1}, _asc(r, top, -1))
    return out.out


# ---------------------------------------------------------------------------
# loops through the blocks g_1 ... g_i^2 ... g_1 and their inverses

BRIDGE_VARIANTS = ("i", "ii", "iii", "iv")


def _bridge_block(i: int, sign: int) -> List[Tuple[int, int]]:
    """g_1 ... g_{i-1} g_i^2 g_{i-1} ... g_1 (all exponents times ``sign``)."""
    return _asc(1, i, sign) + _desc(i, 1, sign)


def _bridge_block_inv_down(k: int) -> List[Tuple[int, int]]:
    """g_k^{-1} ... g_2^{-1} g_1^{-2} g_2^{-1} ... g_k^{-1}."""
    return _desc(k, 1, -1) + _asc(1, k, -1)


def bridge_word(i: int, variant: str, n: int | None = None) -> Word:
    n = i + 1 if n is None else n
    if variant == "i":
        return Word(n, tuple(_gletters(_bridge_block(i, 1))) + (("t", 0, 1),))
    if variant == "ii":
        return Word(n, tuple(_gletters(_bridge_block(i, -1))) + (("t", 0, -1),))
    if variant == "iii":
        return Word(n, tuple(_gletters(_bridge_block_inv_down(i))) + (("t", i, 1),))
    if variant == "iv":
        return Word(n, tuple(_gletters(_bridge_block_inv_down(i))) + (("t", i, -1),))
    raise ValueError(f"unknown variant {variant!r}")


def expand_bridge(i: int, variant: str, n: int | None = None) -> AlgebraElement:
    """A loop passing through a full double twist of the first strands.

    Variants: (i) ``(g_1..g_i^2..g_1) t``; (ii) the same with all
    exponents inverted; (iii) ``(g_i^{-1}..g_1^{-2}..g_i^{-1}) t_i``;
    (iv) the same block times ``t_i^{-1}``.
    """
    n = i + 1 if n is None else n
    if i < 1:
        raise IndexOutOfRange("index must be at least 1")
    _need(n, i)
    out = _Sum(n)
    if variant == "i":
        for k in range(1, i + 1):
            out.add((q - 1) * q ** (i - k), {k: 1}, _asc(1, k - 1) + [(k, -1)] + _desc(k - 1, 1, -1))
        out.add(q ** i, {0: 1})
    elif variant == "ii":
        for k in range(1, i + 1):
            out.add((QI - 1) * QI ** (i - k), {k: -1}, _asc(1, k - 1, -1) + [(k, 1)] + _desc(k - 1, 1))
        out.add(QI ** i, {0: -1})
    elif variant == "iii":
        for j in range(0, i):
            out.add((QI - 1) * QI ** j, {j: 1}, _desc(i, j + 2, -1) + [(j + 1, 1)] + _asc(j + 2, i))
        out.add(QI ** i, {i: 1})
    elif variant == "iv":
        return _bridge_iv(i, n)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return out.out


def _bridge_iv(k: int, n: int) -> AlgebraElement:
    """``B_k t_k^{-1}`` by the recurrence in k, B_k the inverse double twist.

    With c = q^{-1} - 1 and B_k = g_k^{-1} B_{k-1} g_k^{-1}:
    ``B_k t_k^{-1} = q^{-1} g_k^{-1} (B_{k-1} t_{k-1}^{-1}) g_k^{-1}
    + c q^{-1} t_{k-1}^{-1} g_k^{-1} B_{k-1} + c^2 t_k^{-1} B_{k-1}``
    and ``g_k^{-1}`` passes ``t_{k-1}^{-1}`` as ``t_k^{-1} g_k``.
    """
    c = QI - 1
    # {(j, braid letters): coeff} for the terms coeff * t_j^{-1} * braid
    terms: Dict[Tuple[int, Tuple[Tuple[int, int], ...]], LaurentPoly] = {
        (1, ()): QI + c * c, (0, ((1, -1),)): c * QI}
    for j in range(2, k + 1):
        nxt: Dict[Tuple[int, Tuple[Tuple[int, int], ...]], LaurentPoly] = {}

        def acc(key, v):
            v = nxt.get(key, LaurentPoly.zero()) + v
            if v:
                nxt[key] = v
            else:
                nxt.pop(key, None)

        for (idx, braid), v in terms.items():
            if idx == j - 1:
                acc((j, ((j, 1),) + braid + ((j, -1),)), v * QI)
            else:
                acc((idx, ((j, -1),) + braid + ((j, -1),)), v * QI)
        prev = tuple(_bridge_block_inv_down(j - 1))
        acc((j - 1, ((j, -1),) + prev), c * QI)
        acc((j, prev), c * c)
        terms = nxt
    out = _Sum(n)
    for (idx, braid), v in terms.items():
        out.add(v, {idx: -1}, braid)
    return out.out


# ---------------------------------------------------------------------------
# t'-powers


def tprime_power_word(m: int, k: int, n: int | None = None) -> Word:
    n = m + 1 if n is None else n
    return Word(n, (("tp", m, k),))


def expand_tprime1_power(k: int, sign: int = 1, n: int = 2) -> AlgebraElement:
    """``t'_1^{k}`` (sign 1) or ``t'_1^{-k}`` (sign -1) for k >= 1.

    >>> print(expand_tprime1_power(1, -1))
    (-q + 2 - q^(-1))*t^-1 + (1 - q^(-1))*t^-1*g[1] + q*t[1]^-1
    """
    if k < 1:
        raise ValueError("k must be positive")
    _need(n, 1)
    out = _Sum(n)
    if sign < 0:
        out.add(q ** k, {1: -k})
        for j in range(1, k + 1):
            out.add(q ** (k - j) * (q - 1), {0: -j, 1: j - k}, [(1, -1)])
    else:
        out.add(QI ** k, {1: k})
        for j in range(1, k + 1):
            out.add(QI ** (k - j) * (QI - 1), {0: j - 1, 1: k + 1 - j}, [(1, -1)])
    return out.out


def expand_tprime_inverse(k: int, n: int | None = None) -> AlgebraElement:
    """``t'_k^{-1}`` as ``q^k t_k^{-1}`` plus lower loops times braids."""
    n = k + 1 if n is None else n
    if k < 1:
        raise IndexOutOfRange("index must be at least 1")
    _need(n, k)
    out = _Sum(n).add(q ** k, {k: -1})
    for i in range(0, k):
        out.add((q - 1) * q ** i, {i: -1}, _desc(k, i + 2) + _asc(i + 1, k, -1))
    return out.out


# A t'-power is kept as {(loops, perm): coeff} on the minimal number of
# strands m + 1, with every braid part inside H_{m+1}.

_Expansion = Dict[Tuple[Loops, tuple], LaurentPoly]


def _g_times_loop_power(m: int, a: int) -> List[Tuple[Dict[int, int], List[Tuple[int, int]], LaurentPoly]]:
    """``g_m t_{m-1}^a`` as a list of (loops, braid letters, coeff), loops first."""
    if a > 0:
        out = [({m: a}, [(m, -1)], QI ** (a - 1))]
        for j in range(1, a):
            out.append(({m - 1: j, m: a - j}, [], QI ** (a - 1 - j) * (QI - 1)))
        return out
    # g_m = q g_m^{-1} + (q - 1)
    K = -a
    out = [({m - 1: a}, [], q - 1), ({m: a}, [(m, 1)], q * q ** (K - 1))]
    for j in range(1, K):
        out.append(({m - 1: -j, m: -(K - j)}, [], q * q ** (K - 1 - j) * (q - 1)))
    return out


@lru_cache(maxsize=1024)
def _tprime_power(m: int, k: int) -> Tuple[Tuple[Tuple[Loops, tuple], LaurentPoly], ...]:
    n = m + 1
    if m == 0:
        return (((((0, k),), identity(1)), ONE),)
    if m == 1:
        e = expand_tprime1_power(abs(k), 1 if k > 0 else -1, 2)
        return tuple(e.items())
    prev = _tprime_power(m - 1, k)
    ginv = hecke_word(n, [(m, -1)])
    out = AlgebraElement.zero(n)
    for (lo, w), c in prev:
        d = dict(lo)
        a = d.pop(m - 1, 0)
        W = {perm_extend(w, n): ONE}
        if a == 0:
            # g_m commutes with the loops; g_m W g_m^{-1}
            R = hecke_mul(hecke_mul(hecke_word(n, [(m, 1)]), W), ginv)
            out = out + with_loops(n, loops_from_dict(d), R, c)
            continue
        for extra, braid, v in _g_times_loop_power(m, a):
            lo2 = loops_mul(loops_from_dict(d), loops_from_dict(extra))
            R = hecke_mul(hecke_mul(hecke_word(n, braid), W), ginv)
            out = out + with_loops(n, lo2, R, c * v)
    return tuple(out.items())


def expand_tprime_power(m: int, k: int, n: int | None = None) -> AlgebraElement:
    """``t'_m^k`` for nonzero k, built from ``t'_{m-1}^k`` by conjugation with g_m."""
    n = m + 1 if n is None else n
    if k == 0:
        raise ValueError("exponent must be nonzero")
    if m < 0:
        raise IndexOutOfRange("negative index")
    _need(n, m)
    return _lift({key: c for key, c in _tprime_power(m, k)}, m + 1, n)


def _lift(terms: _Expansion, n0: int, n: int) -> AlgebraElement:
    if n == n0:
        return AlgebraElement(n, dict(terms), True)
    return AlgebraElement(n, {(lo, perm_extend(w, n)): c for (lo, w), c in terms.items()}, True)


# ---------------------------------------------------------------------------
# monomials


def _check_prime_monomial(m: Loops) -> None:
    for p, (i, e) in enumerate(m):
        if not isinstance(i, int) or not isinstance(e, int):
            raise GrammarViolation("indices and exponents must be integers")
        if i < 0:
            raise GrammarViolation("negative loop index")
        if e == 0:
            raise GrammarViolation("zero exponent")
        if p and m[p - 1][0] >= i:
            raise GrammarViolation("loop indices must be strictly increasing")


def prime_monomial_word(m: Loops, n: int | None = None) -> Word:
    m = tuple(m)
    _check_prime_monomial(m)
    top = m[-1][0] if m else 0
    n = top + 1 if n is None else n
    return Word(n, tuple(("tp" if i else "t", i, e) for i, e in m))


@lru_cache(maxsize=None)
def _basis_mul(v: tuple, w: tuple) -> Tuple[Tuple[tuple, LaurentPoly], ...]:
    """``T_v T_w`` in the permutation basis."""
    return tuple((u, ONE if f == ONE else f) for u, f in hecke_mul({v: ONE}, {w: ONE}).items())


def convert_monomial(m, n: int | None = None) -> AlgebraElement:
    """Expand ``t^{k_0} t'_1^{k_1} ... t'_r^{k_r}`` in the t/g normal form.

    ``m`` is a tuple of ``(index, exponent)`` pairs with strictly
    increasing indices.  Each new power commutes with the braid part of
    the product so far, so only loop products and Hecke products occur.

    >>> print(convert_monomial(((0, 2),)))
    t^2
    """
    m = tuple(m) if not isinstance(m, dict) else loops_from_dict(m)
    _check_prime_monomial(m)
    top = m[-1][0] if m else 0
    n = top + 1 if n is None else n
    if top > n - 1:
        raise IndexOutOfRange(f"loop index {top} does not fit on {n} strands")
    cur: Dict[Tuple[Loops, tuple], LaurentPoly] = {((), identity(1)): ONE}
    width = 1
    for i, e in m:
        w2 = i + 1
        power = _tprime_power(i, e)
        nxt: Dict[Tuple[Loops, tuple], LaurentPoly] = {}
        for (lo, w), c in cur.items():
            w = perm_extend(w, w2)
            for (lo2, v), d in power:
                cd = c * d
                key_lo = loops_mul(lo, lo2)
                for u, f in _basis_mul(v, w):
                    key = (key_lo, u)
                    term = cd if f is ONE else cd * f
                    old = nxt.get(key)
                    val = term if old is None else old + term
                    if val:
                        nxt[key] = val
                    else:
                        del nxt[key]
        cur = nxt
        width = w2
    return _lift(cur, width, n)
