"""Normal forms in the generalized Hecke algebra H_{1,n}(q).

An element is stored in the basis of products ``X^lam * T_w`` where
``X^lam = t_0^{l_0} t_1^{l_1} ...`` is a monomial in the commuting looping
elements ``t_i = g_i ... g_1 t g_1 ... g_i`` and ``T_w`` is the Hecke basis
element of the permutation ``w``.

Loop monomials are sorted tuples of ``(index, exponent)`` pairs with
nonzero exponents.  Permutations are tuples of 0-based images, so
``(1, 0, 2)`` is the transposition of the first two strands.  The generator
``g_i`` (``1 <= i <= n-1``) swaps positions ``i-1`` and ``i``.

Only the defining relations are used:

* ``T_w g_i = T_{w s_i}`` if the length goes up, else
  ``(q-1) T_w + q T_{w s_i}``;
* ``g_i^{-1} = q^{-1} g_i + (q^{-1} - 1)``;
* a loop letter is moved to the left through each ``g_i`` with

  - ``g_i t_k^e = t_k^e g_i`` for ``k`` not in ``{i-1, i}``
  - ``g_i t_{i-1} = t_i g_i^{-1}``
  - ``g_i t_i = q t_{i-1} g_i + (q-1) t_i``
  - ``g_i t_{i-1}^{-1} = q t_i^{-1} g_i + (q-1) t_{i-1}^{-1}``
  - ``g_i t_i^{-1} = t_{i-1}^{-1} g_i^{-1}``

  Every branch strictly decreases the number of braid letters left of
  the moving loop letter, so the push terminates.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .rings import LaurentPoly

Loops = Tuple[Tuple[int, int], ...]
Perm = Tuple[int, ...]
Letter = Tuple[str, int, int]  # (kind, index, exponent); kind in "t", "tp", "g"

ONE = LaurentPoly.one()
Q = LaurentPoly.q()
QINV = LaurentPoly.q(-1)
QM1 = Q - 1
QINVM1 = QINV - 1

DEFAULT_TERM_CAP = 10 ** 6
DEFAULT_DEPTH_CAP = 10 ** 4


class EngineError(Exception):
    """Base class of algebra errors."""


class IndexOutOfRange(EngineError):
    pass


class TermCapExceeded(EngineError):
    pass


class DepthCapExceeded(EngineError):
    pass


class StrandMismatch(EngineError):
    pass


class ShrinkNotAllowed(EngineError):
    pass


_overrides: Dict[str, int] = {}


def set_caps(term_cap: int | None = None, depth_cap: int | None = None) -> None:
    """Override the caps for this process (command line flags use this)."""
    if term_cap is not None:
        _overrides["term"] = term_cap
    if depth_cap is not None:
        _overrides["depth"] = depth_cap


def saved_caps() -> Dict[str, int]:
    return dict(_overrides)


def restore_caps(saved: Dict[str, int]) -> None:
    _overrides.clear()
    _overrides.update(saved)


def term_cap() -> int:
    if "term" in _overrides:
        return _overrides["term"]
    return int(os.environ.get("SKEIN_TERM_CAP", DEFAULT_TERM_CAP))


def depth_cap() -> int:
    if "depth" in _overrides:
        return _overrides["depth"]
    return int(os.environ.get("SKEIN_DEPTH_CAP", DEFAULT_DEPTH_CAP))


# ---------------------------------------------------------------------------
# loop monomials


def loops_from_dict(d: Dict[int, int]) -> Loops:
    return tuple(sorted((i, e) for i, e in d.items() if e))


def loops_mul(a: Loops, b: Loops) -> Loops:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return loops_from_dict(d)


def loops_times_letter(a: Loops, idx: int, e: int) -> Loops:
    out = []
    done = False
    for i, x in a:
        if i == idx:
            done = True
            x += e
            if x:
                out.append((i, x))
        else:
            if not done and i > idx:
                out.append((idx, e))
                done = True
            out.append((i, x))
    if not done:
        out.append((idx, e))
    return tuple(out)


def loops_max_index(a: Loops) -> int:
    return a[-1][0] if a else -1


# ---------------------------------------------------------------------------
# permutations


def identity(n: int) -> Perm:
    return tuple(range(n))


def perm_length(w: Perm) -> int:
    n = len(w)
    return sum(1 for a in range(n) for b in range(a + 1, n) if w[a] > w[b])


@lru_cache(maxsize=None)
def reduced_word(w: Perm) -> Tuple[int, ...]:
    """A reduced word ``(a_1, ..., a_l)`` with ``T_w = g_{a_1} ... g_{a_l}``.

    >>> reduced_word((1, 0, 2))
    (1,)
    >>> reduced_word((2, 1, 0))
    (2, 1, 2)
    """
    for i in range(len(w) - 1, 0, -1):
        if w[i - 1] > w[i]:
            v = list(w)
            v[i - 1], v[i] = v[i], v[i - 1]
            return reduced_word(tuple(v)) + (i,)
    return ()


def perm_from_word(n: int, word: Iterable[int]) -> Perm:
    w = list(range(n))
    for i in word:
        w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def moved_max(w: Perm) -> int:
    """Largest point moved by ``w``, or -1 for the identity."""
    for p in range(len(w) - 1, -1, -1):
        if w[p] != p:
            return p
    return -1


def perm_restrict(w: Perm, n: int) -> Perm:
    if any(w[p] != p for p in range(n, len(w))):
        raise ShrinkNotAllowed("permutation moves a dropped strand")
    return w[:n]


def perm_extend(w: Perm, n: int) -> Perm:
    return w + tuple(range(len(w), n))


# ---------------------------------------------------------------------------
# Hecke multiplication on dictionaries perm -> LaurentPoly


def _acc(out: dict, key, c: LaurentPoly) -> None:
    old = out.get(key)
    if old is None:
        if c:
            out[key] = c
    else:
        v = old + c
        if v:
            out[key] = v
        else:
            del out[key]


@lru_cache(maxsize=None)
def _right_g(w: Perm, i: int) -> Tuple[Tuple[Perm, LaurentPoly], ...]:
    v = list(w)
    v[i - 1], v[i] = v[i], v[i - 1]
    v = tuple(v)
    if w[i - 1] < w[i]:
        return ((v, ONE),)
    return ((w, QM1), (v, Q))


@lru_cache(maxsize=None)
def _left_g(w: Perm, i: int) -> Tuple[Tuple[Perm, LaurentPoly], ...]:
    # s_i w swaps the values i-1 and i
    v = tuple(i if x == i - 1 else (i - 1 if x == i else x) for x in w)
    if w.index(i - 1) < w.index(i):
        return ((v, ONE),)
    return ((w, QM1), (v, Q))


def hecke_left_g(R: Dict[Perm, LaurentPoly], i: int, inverse: bool = False) -> Dict[Perm, LaurentPoly]:
    out: Dict[Perm, LaurentPoly] = {}
    for w, c in R.items():
        if inverse:
            for v, d in _left_g(w, i):
                _acc(out, v, c * d * QINV)
            _acc(out, w, c * QINVM1)
        else:
            for v, d in _left_g(w, i):
                _acc(out, v, c * d)
    return out


@lru_cache(maxsize=None)
def _push_loop(w: Perm, k: int, e: int) -> Tuple[Tuple[int, Tuple[Tuple[Perm, LaurentPoly], ...]], ...]:
    """``T_w * t_k^e`` as a sum of ``t_j^e * R_j`` (R_j in the Hecke algebra)."""
    n = len(w)
    states: Dict[int, Dict[Perm, LaurentPoly]] = {k: {identity(n): ONE}}
    for i in reversed(reduced_word(w)):
        new: Dict[int, Dict[Perm, LaurentPoly]] = {}

        def add(idx, R, c=None):
            tgt = new.setdefault(idx, {})
            for p, v in R.items():
                _acc(tgt, p, v if c is None else v * c)

        for kk, R in states.items():
            if kk != i and kk != i - 1:
                add(kk, hecke_left_g(R, i))
            elif e > 0 and kk == i - 1:
                add(i, hecke_left_g(R, i, inverse=True))
            elif e > 0:
                add(i - 1, hecke_left_g(R, i), Q)
                add(i, R, QM1)
            elif kk == i - 1:
                add(i, hecke_left_g(R, i), Q)
                add(i - 1, R, QM1)
            else:
                add(i - 1, hecke_left_g(R, i, inverse=True))
        states = {kk: R for kk, R in new.items() if R}
    return tuple((kk, tuple(R.items())) for kk, R in sorted(states.items()))


# ---------------------------------------------------------------------------
# elements


Key = Tuple[Loops, Perm]


class AlgebraElement:
    """An element of H_{1,n}(q) in normal form.

    ``terms`` maps ``(loops, perm)`` to a nonzero LaurentPoly.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Dict[Key, LaurentPoly] | None = None, _trusted: bool = False):
        self.n = n
        if terms is None:
            terms = {}
        elif not _trusted:
            clean = {}
            for (lo, w), c in terms.items():
                if len(w) != n:
                    raise StrandMismatch(f"permutation {w} is not on {n} strands")
                if lo and lo[-1][0] > n - 1:
                    raise IndexOutOfRange(f"loop index {lo[-1][0]} needs more than {n} strands")
                if c:
                    clean[(lo, w)] = c
            terms = clean
        self._terms = terms

    # -- constructors
    @classmethod
    def one(cls, n: int) -> "AlgebraElement":
        return cls(n, {((), identity(n)): ONE}, True)

    @classmethod
    def zero(cls, n: int) -> "AlgebraElement":
        return cls(n, {}, True)

    @classmethod
    def monomial(cls, n: int, loops: Loops | Dict[int, int] = (), perm: Perm | None = None,
                 coeff: LaurentPoly | int = 1) -> "AlgebraElement":
        if isinstance(loops, dict):
            loops = loops_from_dict(loops)
        if perm is None:
            perm = identity(n)
        if isinstance(coeff, int):
            coeff = LaurentPoly.constant(coeff)
        return cls(n, {(tuple(loops), tuple(perm)): coeff})

    # -- protocol
    @property
    def terms(self) -> Dict[Key, LaurentPoly]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def coefficient(self, loops: Loops | Dict[int, int] = (), perm: Perm | None = None) -> LaurentPoly:
        if isinstance(loops, dict):
            loops = loops_from_dict(loops)
        if perm is None:
            perm = identity(self.n)
        return self._terms.get((tuple(loops), tuple(perm)), LaurentPoly.zero())

    def _check(self, other: "AlgebraElement"):
        if self.n != other.n:
            raise StrandMismatch(f"{self.n} strands vs {other.n} strands")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            _acc(out, k, c)
        return AlgebraElement(self.n, out, True)

    def __neg__(self):
        return AlgebraElement(self.n, {k: -c for k, c in self._terms.items()}, True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> "AlgebraElement":
        if isinstance(c, int):
            c = LaurentPoly.constant(c)
        if not c:
            return AlgebraElement.zero(self.n)
        return AlgebraElement(self.n, {k: v * c for k, v in self._terms.items()}, True)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    # -- JSON
    def to_json(self) -> dict:
        rows = []
        for (lo, w), c in sorted(self._terms.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            rows.append({"loops": [[i, e] for i, e in lo],
                         "perm": [x + 1 for x in w],
                         "coeff": c.to_json()})
        return {"n": self.n, "terms": rows}

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraElement":
        n = data["n"]
        out: Dict[Key, LaurentPoly] = {}
        for t in data["terms"]:
            lo = loops_from_dict({i: e for i, e in t["loops"]})
            w = tuple(x - 1 for x in t["perm"])
            if sorted(w) != list(range(n)):
                raise ValueError(f"not a permutation of {n} points: {t['perm']}")
            _acc(out, (lo, w), LaurentPoly.from_json(t["coeff"]))
        return cls(n, out)

    def __repr__(self):
        return f"AlgebraElement(n={self.n}, {format_element(self)})"

    def __str__(self):
        return format_element(self)

    # -- structure
    def max_loop_index(self) -> int:
        return max((loops_max_index(lo) for lo, _ in self._terms), default=-1)

    def strands_used(self) -> int:
        """Smallest strand count able to hold the element."""
        m = 0
        for lo, w in self._terms:
            m = max(m, loops_max_index(lo) + 1, moved_max(w) + 1)
        return max(m, 1)


def format_loops(lo: Loops) -> str:
    parts = []
    for i, e in lo:
        name = "t" if i == 0 else f"t[{i}]"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_perm(w: Perm) -> str:
    return "*".join(f"g[{i}]" for i in reduced_word(w))


def format_element(x: AlgebraElement) -> str:
    if not x._terms:
        return "0"
    chunks = []
    for (lo, w), c in sorted(x._terms.items()):
        mono = "*".join(p for p in (format_loops(lo), format_perm(w)) if p)
        cs = str(c)
        if not mono:
            chunks.append(f"({cs})" if len(c) > 1 else cs)
        elif cs == "1":
            chunks.append(mono)
        elif cs == "-1":
            chunks.append("-" + mono)
        else:
            chunks.append(f"({cs})*{mono}" if len(c) > 1 else f"{cs}*{mono}")
    text = chunks[0]
    for s in chunks[1:]:
        text += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
    return text


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class Word:
    """A word over t^{+-1}, g_i^{+-1} and the macros t_i^{+-1}, t'_i^{+-1}.

    Letters are ``(kind, index, exponent)`` with kind ``"t"`` (looping
    element t_i, index 0 is t itself), ``"tp"`` (t'_i) or ``"g"``.
    Exponents may be any nonzero integer and mean repetition.
    """

    n: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for kind, idx, e in self.letters:
            if kind not in ("t", "tp", "g"):
                raise ValueError(f"unknown letter kind {kind!r}")
            if e == 0:
                raise ValueError("zero exponent in word")
            if kind == "g" and not 1 <= idx <= self.n - 1:
                raise IndexOutOfRange(f"g[{idx}] needs 1 <= index <= {self.n - 1}")
            if kind != "g" and not 0 <= idx <= self.n - 1:
                raise IndexOutOfRange(f"loop index {idx} needs at most {self.n - 1}")

    def __mul__(self, other: "Word") -> "Word":
        n = max(self.n, other.n)
        return Word(n, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.n, tuple((k, i, -e) for k, i, e in reversed(self.letters)))

    def on(self, n: int) -> "Word":
        if n < self.n:
            raise ShrinkNotAllowed("cannot shrink a word")
        return Word(n, self.letters)

    def __str__(self):
        parts = []
        for kind, idx, e in self.letters:
            if kind == "g":
                s = f"g[{idx}]"
            elif kind == "tp":
                s = f"t'[{idx}]"
            else:
                s = "t" if idx == 0 else f"t[{idx}]"
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts) if parts else "1"


def g_word(n: int, *indices: int, sign: int = 1) -> Word:
    return Word(n, tuple(("g", i, sign) for i in indices))


def expand_macro(letter: Letter) -> List[Letter]:
    """Definition of t_i and t'_i in terms of t and the g_j.

    >>> expand_macro(("t", 1, 1))
    [('g', 1, 1), ('t', 0, 1), ('g', 1, 1)]
    >>> expand_macro(("tp", 1, -1))
    [('g', 1, 1), ('t', 0, -1), ('g', 1, -1)]
    """
    kind, i, e = letter
    if kind == "g" or i == 0:
        return [letter]
    if i < 0:
        raise IndexOutOfRange("negative loop index")
    down = list(range(i, 0, -1))
    up = list(range(1, i + 1))
    out: List[Letter] = []
    if kind == "t":
        # t_i^{-1} is the reversed word with every exponent inverted
        s = 1 if e > 0 else -1
        one = ([("g", j, s) for j in down] + [("t", 0, s)] + [("g", j, s) for j in up])
        for _ in range(abs(e)):
            out.extend(one)
        return out
    if kind == "tp":
        return [("g", j, 1) for j in down] + [("t", 0, e)] + [("g", j, -1) for j in up]
    raise ValueError(f"unknown letter kind {kind!r}")


def _guard(out: dict) -> None:
    if len(out) > term_cap():
        raise TermCapExceeded(f"more than {term_cap()} terms")


def append_letter(x: AlgebraElement, letter: Letter) -> AlgebraElement:
    """``x * letter`` in normal form.

    Loop letters ``t_k^e`` of any index are pushed directly; ``t'_k``
    letters are expanded first.  Powers are applied one letter at a time.
    """
    kind, idx, e = letter
    n = x.n
    if kind == "tp" and idx > 0:
        for sub in expand_macro(letter):
            x = append_letter(x, sub)
        return x
    if kind == "g":
        if not 1 <= idx <= n - 1:
            raise IndexOutOfRange(f"g[{idx}] on {n} strands")
    elif not 0 <= idx <= n - 1:
        raise IndexOutOfRange(f"t[{idx}] on {n} strands")
    s = 1 if e > 0 else -1
    terms = x._terms
    for _ in range(abs(e)):
        out: Dict[Key, LaurentPoly] = {}
        if kind == "g":
            for (lo, w), c in terms.items():
                for v, d in _right_g(w, idx):
                    _acc(out, (lo, v), c * d * QINV if s < 0 else c * d)
                if s < 0:
                    _acc(out, (lo, w), c * QINVM1)
        else:
            for (lo, w), c in terms.items():
                for kk, R in _push_loop(w, idx, s):
                    lo2 = loops_times_letter(lo, kk, s)
                    for v, d in R:
                        _acc(out, (lo2, v), c * d)
        _guard(out)
        terms = out
    return AlgebraElement(n, terms, True)


def normal_form(w: Word | Sequence[Letter], n: int | None = None) -> AlgebraElement:
    """Reduce a word to normal form using only t, g_i and the relations."""
    if isinstance(w, Word):
        n, letters = w.n, w.letters
    else:
        letters = tuple(w)
        if n is None:
            raise ValueError("strand count required")
        Word(n, letters)
    x = AlgebraElement.one(n)
    for letter in letters:
        for sub in expand_macro(letter):
            x = append_letter(x, sub)
    return x


def perm_element(n: int, w: Perm, coeff: LaurentPoly | int = 1) -> AlgebraElement:
    return AlgebraElement.monomial(n, (), w, coeff)


def _times_basis(x: AlgebraElement, lo: Loops, w: Perm) -> AlgebraElement:
    for idx, e in lo:
        x = append_letter(x, ("t", idx, e))
    for i in reduced_word(w):
        x = append_letter(x, ("g", i, 1))
    return x


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product in H_{1,n}(q)."""
    a._check(b)
    n = a.n
    out: Dict[Key, LaurentPoly] = {}
    by_loops: Dict[Loops, AlgebraElement] = {}
    for (lo, w), c in b._terms.items():
        left = by_loops.get(lo)
        if left is None:
            left = a
            for idx, e in lo:
                left = append_letter(left, ("t", idx, e))
            by_loops[lo] = left
        part = left
        for i in reduced_word(w):
            part = append_letter(part, ("g", i, 1))
        for k, v in part._terms.items():
            _acc(out, k, v * c)
        _guard(out)
    return AlgebraElement(n, out, True)


def embed(x: AlgebraElement, n2: int) -> AlgebraElement:
    """The same element viewed in H_{1,n2}(q) for n2 >= n."""
    if n2 < x.n:
        raise ShrinkNotAllowed(f"cannot embed {x.n} strands into {n2}")
    if n2 == x.n:
        return x
    return AlgebraElement(n2, {(lo, perm_extend(w, n2)): c for (lo, w), c in x._terms.items()}, True)


def restrict(x: AlgebraElement, n2: int) -> AlgebraElement:
    """Inverse of ``embed``; fails if the element uses a dropped strand."""
    if n2 == x.n:
        return x
    out = {}
    for (lo, w), c in x._terms.items():
        if lo and lo[-1][0] >= n2:
            raise ShrinkNotAllowed("loop on a dropped strand")
        out[(lo, perm_restrict(w, n2))] = c
    return AlgebraElement(n2, out, True)


def equal(a: AlgebraElement, b: AlgebraElement) -> bool:
    a._check(b)
    return a._terms == b._terms


def element(x: Word | AlgebraElement) -> AlgebraElement:
    return x if isinstance(x, AlgebraElement) else normal_form(x)


def word_element(n: int, letters: Sequence[Letter]) -> AlgebraElement:
    return normal_form(Word(n, tuple(letters)))


def reverse(x: AlgebraElement) -> AlgebraElement:
    """The anti-automorphism fixing t and every g_i (it fixes each t_i).

    Reversing a basis element ``X^lam T_w`` gives ``T_{w^{-1}} X^lam``,
    which is renormalized.
    """
    n = x.n
    out: Dict[Key, LaurentPoly] = {}
    for (lo, w), c in x._terms.items():
        inv = [0] * n
        for p, v in enumerate(w):
            inv[v] = p
        part = perm_element(n, tuple(inv), c)
        for idx, e in lo:
            part = append_letter(part, ("t", idx, e))
        for k, v in part._terms.items():
            _acc(out, k, v)
    return AlgebraElement(n, out, True)


# ---------------------------------------------------------------------------
# Hecke algebra H_n(q) alone, as dictionaries perm -> LaurentPoly

Hecke = Dict[Perm, LaurentPoly]


def hecke_right_g(R: Hecke, i: int, inverse: bool = False) -> Hecke:
    out: Hecke = {}
    for w, c in R.items():
        for v, d in _right_g(w, i):
            _acc(out, v, c * d * QINV if inverse else c * d)
        if inverse:
            _acc(out, w, c * QINVM1)
    return out


def hecke_mul(A: Hecke, B: Hecke) -> Hecke:
    out: Hecke = {}
    for v, c in B.items():
        part = A
        for i in reduced_word(v):
            part = hecke_right_g(part, i)
        for w, d in part.items():
            _acc(out, w, d * c)
    return out


def hecke_word(n: int, letters: Iterable[Tuple[int, int]]) -> Hecke:
    """Product of ``g_i^{s}`` for ``(i, s)`` in order."""
    R: Hecke = {identity(n): ONE}
    for i, s in letters:
        R = hecke_right_g(R, i, inverse=s < 0)
    return R


def hecke_reverse(R: Hecke) -> Hecke:
    """Image under the anti-automorphism: T_w -> T_{w^{-1}}."""
    out: Hecke = {}
    for w, c in R.items():
        inv = [0] * len(w)
        for p, v in enumerate(w):
            inv[v] = p
        out[tuple(inv)] = c
    return out


def with_loops(n: int, lo: Loops, R: Hecke, coeff: LaurentPoly | None = None) -> AlgebraElement:
    """The element ``X^lo * R``."""
    if coeff is None:
        return AlgebraElement(n, {(lo, w): c for w, c in R.items()}, True)
    return AlgebraElement(n, {(lo, w): c * coeff for w, c in R.items() if c * coeff}, True)


def push_right(n: int, k: int, e: int, R: Hecke) -> List[Tuple[int, Hecke]]:
    """``t_k^e * R`` written as ``sum_j R_j * t_j^e`` (loop letter on the right)."""
    out: Dict[int, Hecke] = {}
    for w, c in R.items():
        inv = [0] * n
        for p, v in enumerate(w):
            inv[v] = p
        for j, S in _push_loop(tuple(inv), k, e):
            tgt = out.setdefault(j, {})
            for v, d in hecke_reverse(dict(S)).items():
                _acc(tgt, v, d * c)
    return [(j, S) for j, S in sorted(out.items()) if S]


def _bar_poly(c: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({-e: v for e, v in c.items()})


def hecke_bar(R: Hecke) -> Hecke:
    """The ring involution q -> q^{-1}, g_i -> g_i^{-1} of H_n(q)."""
    out: Hecke = {}
    for w, c in R.items():
        part = hecke_word(len(w), [(i, -1) for i in reduced_word(w)])
        for v, d in part.items():
            _acc(out, v, d * _bar_poly(c))
    return out


def inverse_basis_coefficients(R: Hecke) -> Hecke:
    """Coordinates of ``R`` in the basis of reduced words in the g_i^{-1}.

    The key ``w`` stands for the product of ``g_i^{-1}`` along the reduced
    word of ``w``.
    """
    return {w: _bar_poly(c) for w, c in hecke_bar(R).items()}


def braid_free_coefficient(x: AlgebraElement, lo: Loops) -> LaurentPoly:
    """Coefficient of ``X^lo * 1`` when braid parts are written in the g_i^{-1}.

    This is the coefficient of the loop monomial with no braid letters in an
    expansion whose braid words use inverse generators only.
    """
    R = {w: c for (m, w), c in x.items() if m == lo}
    return inverse_basis_coefficients(R).get(identity(x.n), LaurentPoly.zero())
