"""Reduction of algebra elements to coordinates over gap-free loop monomials.

Each basis term ``X^lam T_w`` on ``n`` strands is rewritten by exactly one
of the following moves, chosen in this order:

1. drop strands that carry neither a loop nor a crossing;
2. if the top strand carries no loop (so ``w`` moves it), write
   ``T_w = T_{w'} g_{n-1} D`` with ``w'`` fixing the top strand, conjugate
   ``D`` to the front and stabilize;
3. if ``h``, the highest point moved by ``w``, carries a loop ``t_h^k``,
   trade one unit of that exponent for a crossing of the opposite sign:
   ``t_h g_h^{-1} = g_h t_{h-1}`` (``k > 0``, after ``g_h = q g_h^{-1} + q - 1``)
   or ``t_h^{-1} g_h = g_h^{-1} t_{h-1}^{-1}`` (``k < 0``); the freed loop
   letter is pushed through the rest of the braid and conjugated to the
   front;
4. otherwise remove the lowest gap (see ``gaps``).

Every move strictly lowers ``(strands, sum_i i*|lam_i|, length(w))`` in the
lexicographic order, so the reduction terminates.  With ``canonical`` on,
a monomial whose exponents are not in the least possible arrangement
(absolute values weakly decreasing, negative before positive on ties) is
conjugated by ``g_{i+1}^{-1}`` at its highest out-of-order position ``i``.
This gives a unit multiple of the monomial with the two exponents swapped,
which is smaller in the monomial order, plus terms that reduce to smaller
monomials.  The swap in the other direction would bring the monomial back
with a coefficient ``1 - beta`` that is not a unit.
"""

from __future__ import annotations

import heapq
from typing import Dict, List, Optional, Tuple, Union

from . import engine as E
from .engine import AlgebraElement, Loops, Perm, Word
from .gaps import (ClosurePermute, Conjugate, ExactRewrite, RewriteTrace, Stabilize, State,
                   Step, WitnessError, destabilize, gap_step, replay, run_ops, state_add,
                   state_from_element, _conj)
from .order import arrangement_key, format_monomial, is_gap_free, is_canonical_arrangement, level, loops_from_json, sort_key
from .rings import CoeffPoly, LaurentPoly

ONE = LaurentPoly.one()
Q = LaurentPoly.q()
QINV = LaurentPoly.q(-1)


class NotStabilizable(ValueError):
    pass


class ModuleElement:
    """A finite combination of loop monomials with coefficients in q, z."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[Loops, CoeffPoly] | None = None):
        clean = {}
        for lo, c in (terms or {}).items():
            if isinstance(c, (int, LaurentPoly)):
                c = CoeffPoly.coerce(c) if isinstance(c, LaurentPoly) else CoeffPoly.constant(c)
            if c:
                clean[tuple(lo)] = c
        self._terms = clean

    @classmethod
    def basis(cls, lo: Loops) -> "ModuleElement":
        return cls({tuple(lo): CoeffPoly.one()})

    @property
    def terms(self) -> Dict[Loops, CoeffPoly]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, lo: Loops) -> CoeffPoly:
        return self._terms.get(tuple(lo), CoeffPoly.zero())

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        out = dict(self._terms)
        for lo, c in other._terms.items():
            v = out.get(lo, CoeffPoly.zero()) + c
            if v:
                out[lo] = v
            else:
                out.pop(lo, None)
        return ModuleElement(out)

    def __neg__(self):
        return ModuleElement({lo: -c for lo, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ModuleElement":
        if isinstance(c, int):
            c = CoeffPoly.constant(c)
        elif isinstance(c, LaurentPoly):
            c = CoeffPoly.coerce(c)
        return ModuleElement({lo: v * c for lo, v in self._terms.items()})

    def monomials(self) -> List[Loops]:
        return sorted(self._terms, key=sort_key)

    def to_json(self) -> dict:
        return {"terms": [{"loops": [[i, e] for i, e in lo], "coeff": self._terms[lo].to_json()}
                          for lo in self.monomials()]}

    @classmethod
    def from_json(cls, data) -> "ModuleElement":
        out: Dict[Loops, CoeffPoly] = {}
        for t in data["terms"]:
            lo = loops_from_json(t["loops"])
            out[lo] = out.get(lo, CoeffPoly.zero()) + CoeffPoly.from_json(t["coeff"])
        return cls(out)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for lo in reversed(self.monomials()):
            c = self._terms[lo]
            parts.append(f"({c})*{format_monomial(lo)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ModuleElement({self})"


# ---------------------------------------------------------------------------
# single moves


def stabilize(e: AlgebraElement, sign: int = 1) -> Tuple[AlgebraElement, CoeffPoly]:
    """``a g_{n-1}^{sign}`` to ``(a, weight)``.

    The weight is z for sign +1 and ``q^{-1} z + q^{-1} - 1`` for sign -1.
    """
    try:
        a = destabilize(e, sign)
    except E.ShrinkNotAllowed as exc:
        raise NotStabilizable(str(exc)) from None
    back = E.append_letter(E.embed(a, e.n), ("g", e.n - 1, sign))
    if back != e:
        raise NotStabilizable("element is not of the form a*g_{n-1}^sign")
    z = CoeffPoly.z()
    if sign > 0:
        return a, z
    return a, z * CoeffPoly.q(-1) + CoeffPoly.q(-1) - 1


def _strip_top(w: Perm, h: int) -> Tuple[Perm, int]:
    """``w = w' c`` with ``c = s_h s_{h-1} ... s_j`` and ``w'`` fixing ``h``.

    ``w`` must fix every point above ``h``.  Returns ``(w', j)``.
    """
    p0 = w.index(h)
    wp = tuple(x for x in w[:h + 1] if x != h) + (h,) + w[h + 1:]
    return wp, p0 + 1


def _descending(n: int, top: int, bottom: int) -> Perm:
    return E.perm_from_word(n, range(top, bottom - 1, -1))


def restrict_step(n: int, lo: Loops, w: Perm) -> Optional[Step]:
    need = max(E.loops_max_index(lo) + 1, E.moved_max(w) + 1, 1)
    if need >= n:
        return None
    after = AlgebraElement(need, {(lo, w[:need]): ONE}, True)
    return Step((n, lo, w), [ExactRewrite(after)])


def stabilize_step(n: int, lo: Loops, w: Perm) -> Step:
    wp, j = _strip_top(w, n - 1)
    d_letters = tuple(("g", i, 1) for i in range(n - 2, j - 1, -1))
    ops = []
    base = E.with_loops(n, lo, E.hecke_right_g({wp: ONE}, n - 1))
    if d_letters:
        u = Word(n, d_letters)
        piece = AlgebraElement(n, {(lo, w): ONE}, True)
        after = E.multiply(E.normal_form(u), base)
        ops.append(Conjugate(((u, piece),), after))
    ops.append(Stabilize(1))
    return Step((n, lo, w), ops)


def loop_step(n: int, lo: Loops, w: Perm, h: int) -> Step:
    d = dict(lo)
    k = d[h]
    e = 1 if k > 0 else -1
    wp, j = _strip_top(w, h)
    RD = {_descending(n, h - 1, j): ONE}
    rest = dict(d)
    rest[h] = k - e
    lo2 = E.loops_from_dict(rest)
    head = E.hecke_right_g({wp: ONE}, h, inverse=e < 0)
    parts = []
    after = AlgebraElement.zero(n)
    coeff = Q if e > 0 else ONE
    for s, S in E.push_right(n, h - 1, e, RD):
        B = E.hecke_mul(head, S)
        piece = E.append_letter(E.with_loops(n, lo2, B, coeff), ("t", s, e))
        image = E.with_loops(n, E.loops_times_letter(lo2, s, e), B, coeff)
        parts.append((Word(n, (("t", s, e),)), piece))
        after = after + image
    if e > 0:
        piece = E.with_loops(n, lo, E.hecke_mul({wp: ONE}, RD), Q - 1)
        parts.append((Word(n, ()), piece))
        after = after + piece
    return Step((n, lo, w), [Conjugate(tuple(parts), after)])


def closure_step(n: int, lo: Loops) -> Step:
    keys = [arrangement_key(e) for _, e in lo]
    p = max(i for i in range(len(keys) - 1) if keys[i] > keys[i + 1])
    u = Word(n, (("g", p + 1, -1),))
    x = AlgebraElement(n, {(lo, E.identity(n)): ONE}, True)
    return Step((n, lo, E.identity(n)), [ClosurePermute(p, u, _conj(u, x))])


def plan(n: int, lo: Loops, w: Perm, canonical: bool) -> Optional[Step]:
    """The move applied to a basis term, or None for a finished term."""
    st = restrict_step(n, lo, w)
    if st is not None:
        return st
    h = E.moved_max(w)
    m = E.loops_max_index(lo)
    if h > m:
        return stabilize_step(n, lo, w)
    if h >= 0 and dict(lo).get(h, 0):
        return loop_step(n, lo, w, h)
    st = gap_step(n, lo, w)
    if st is not None:
        return st
    if h >= 0:
        raise AssertionError("unreachable: crossing without loop on a gap-free monomial")
    if canonical and not is_canonical_arrangement(lo):
        return closure_step(n, lo)
    return None


def _potential(key):
    n, lo, w = key
    return (-n, -sum(i * abs(e) for i, e in lo), -E.perm_length(w), lo, w)


def reduce_state(state: State, canonical: bool = True, budget: Optional[int] = None
                 ) -> Tuple[State, RewriteTrace]:
    state = dict(state)
    trace = RewriteTrace()
    if budget is None:
        budget = E.depth_cap() * max(1, len(state))
    heap = [_potential(k) for k in state]
    heapq.heapify(heap)
    while heap:
        item = heapq.heappop(heap)
        key = (-item[0], item[3], item[4])
        if key not in state:
            continue
        step = plan(*key, canonical)
        if step is None:
            continue
        if len(trace.steps) >= budget:
            raise E.DepthCapExceeded(f"more than {budget} rewrite steps")
        c = state.pop(key)
        trace.steps.append(step)
        for k2, m in run_ops(key, step.ops, verify=False).items():
            state_add(state, k2, m * c)
            if k2 in state:
                heapq.heappush(heap, _potential(k2))
        if len(state) > E.term_cap():
            raise E.TermCapExceeded(f"more than {E.term_cap()} pending terms")
    return state, trace


def state_to_module(state: State, canonical: bool = True) -> ModuleElement:
    out: Dict[Loops, CoeffPoly] = {}
    for (n, lo, w), c in state.items():
        if E.moved_max(w) >= 0 or not is_gap_free(lo):
            raise WitnessError(f"unfinished term {lo} {w}")
        if canonical and not is_canonical_arrangement(lo):
            raise WitnessError(f"unsorted term {lo}")
        out[lo] = out.get(lo, CoeffPoly.zero()) + c
    return ModuleElement(out)


def reduce_to_basis(x: Union[Word, AlgebraElement], canonical: bool = True
                    ) -> Tuple[ModuleElement, RewriteTrace]:
    """Coordinates of ``x`` over gap-free loop monomials, with a witness."""
    x = E.element(x)
    state, trace = reduce_state(state_from_element(x), canonical)
    return state_to_module(state, canonical), trace


def eliminate_tail(tau: Loops, w: Union[Perm, AlgebraElement, Word, None] = None, canonical: bool = True
                   ) -> Tuple[ModuleElement, RewriteTrace]:
    """Reduce ``X^tau * w`` where ``w`` is a braid (permutation, word or element)."""
    tau = tuple(tau)
    if not is_gap_free(tau):
        raise ValueError("loop monomial must be gap-free; regularize it first")
    n = E.loops_max_index(tau) + 1
    if w is None:
        w = E.identity(max(n, 1))
    if isinstance(w, Word):
        w = E.normal_form(w)
    if isinstance(w, tuple):
        w = E.perm_element(len(w), w)
    n = max(n, w.n, 1)
    x = E.multiply(AlgebraElement.monomial(n, tau), E.embed(w, n))
    return reduce_to_basis(x, canonical)


def verify_reduction(x: Union[Word, AlgebraElement], result: ModuleElement, trace: RewriteTrace,
                     canonical: bool = True) -> bool:
    """Replay ``trace`` from ``x`` with full engine checks."""
    x = E.element(x)
    final = replay(state_from_element(x), trace, verify=True)
    return state_to_module(final, canonical) == result
