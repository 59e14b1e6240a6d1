"""Replayable witnesses and gap removal by conjugation.

A loop monomial has a gap when some index below its top index is
missing.  Gaps are removed with the identity (valid whenever the other
loop letters commute with ``g_i``, i.e. ``t_{i-1}`` is absent)::

    t_i^{ek} a  ~  sum_{u=1}^{k-1} q^{e(u-1)} (q^e - 1) t_{i-1}^{eu} t_i^{e(k-u)} (a g_i^e)
                   + q^{e(k-1)} t_{i-1}^{ek} (g_i^e a g_i^e)

which is conjugation by ``g_i^{-e}``.  Every step moves exponent mass
down by at least one index, so repeated application terminates.

Witnesses
---------
A ``RewriteTrace`` records, for each processed basis term, the chain of
operations that rewrote it.  Replaying starts from the input, pops the
source term of each step together with its current coefficient, re-runs
the operations with full verification through the engine, and adds the
outcome back.  The final state must equal the reported output.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from . import engine as E
from .engine import AlgebraElement, Loops, Perm, Word, Hecke
from .rings import CoeffPoly, LaurentPoly

ONE = LaurentPoly.one()
Q = LaurentPoly.q()
QINV = LaurentPoly.q(-1)

TermKey = Tuple[int, Loops, Perm]  # (strands, loops, permutation)


class NotAGap(ValueError):
    pass


class WitnessError(AssertionError):
    """A witness failed to replay."""


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class ExactRewrite:
    """Replace the current element by an equal one (possibly on fewer strands)."""
    after: AlgebraElement


@dataclass(frozen=True)
class Conjugate:
    """Split the current element into pieces and conjugate each piece.

    ``parts`` is a list of ``(u, piece)``; the pieces must sum to the
    current element and the new element is ``sum u * piece * u^{-1}``.
    A single part is an ordinary conjugation.
    """
    parts: Tuple[Tuple[Word, AlgebraElement], ...]
    after: AlgebraElement


@dataclass(frozen=True)
class Stabilize:
    """Remove the top strand: ``a g_{n-1}^{sign}`` becomes ``weight * a``."""
    sign: int = 1


@dataclass(frozen=True)
class ClosurePermute:
    """Conjugation by ``by`` (a power of ``g_{i+1}``) used to move a
    larger exponent from index ``i`` to index ``i+1``."""
    i: int
    by: Word
    after: AlgebraElement


Op = Union[ExactRewrite, Conjugate, Stabilize, ClosurePermute]


@dataclass
class Step:
    source: TermKey
    ops: List[Op]


@dataclass
class RewriteTrace:
    steps: List[Step] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def extend(self, other: "RewriteTrace") -> None:
        self.steps.extend(other.steps)

    def to_json(self) -> dict:
        return {"steps": [_step_json(s) for s in self.steps]}

    @classmethod
    def from_json(cls, data: dict) -> "RewriteTrace":
        return cls([_step_from_json(s) for s in data["steps"]])


def _word_json(w: Word):
    return {"n": w.n, "letters": [list(x) for x in w.letters]}


def _word_from_json(d) -> Word:
    return Word(d["n"], tuple((k, i, e) for k, i, e in d["letters"]))


def _op_json(op: Op) -> dict:
    if isinstance(op, ExactRewrite):
        return {"op": "exact", "after": op.after.to_json()}
    if isinstance(op, Conjugate):
        return {"op": "conjugate",
                "parts": [{"by": _word_json(u), "piece": p.to_json()} for u, p in op.parts],
                "after": op.after.to_json()}
    if isinstance(op, Stabilize):
        return {"op": "stabilize", "sign": op.sign}
    return {"op": "closure_permute", "i": op.i, "by": _word_json(op.by), "after": op.after.to_json()}


def _op_from_json(d) -> Op:
    kind = d["op"]
    if kind == "exact":
        return ExactRewrite(AlgebraElement.from_json(d["after"]))
    if kind == "conjugate":
        parts = tuple((_word_from_json(p["by"]), AlgebraElement.from_json(p["piece"])) for p in d["parts"])
        return Conjugate(parts, AlgebraElement.from_json(d["after"]))
    if kind == "stabilize":
        return Stabilize(d["sign"])
    if kind == "closure_permute":
        return ClosurePermute(d["i"], _word_from_json(d["by"]), AlgebraElement.from_json(d["after"]))
    raise ValueError(f"unknown witness op {kind!r}")


def _step_json(s: Step) -> dict:
    n, lo, w = s.source
    return {"source": {"n": n, "loops": [list(x) for x in lo], "perm": [x + 1 for x in w]},
            "ops": [_op_json(op) for op in s.ops]}


def _step_from_json(d) -> Step:
    src = d["source"]
    key = (src["n"], E.loops_from_dict({i: e for i, e in src["loops"]}), tuple(x - 1 for x in src["perm"]))
    return Step(key, [_op_from_json(o) for o in d["ops"]])


# ---------------------------------------------------------------------------
# applying operations
#
# The intermediate value of a step is a map z-exponent -> AlgebraElement,
# all on the same number of strands.


Inter = Dict[int, AlgebraElement]

Z = CoeffPoly.z()


def _single(inter: Inter) -> AlgebraElement:
    live = {k: v for k, v in inter.items() if v}
    if len(live) > 1 or (live and 0 not in live):
        raise WitnessError("conjugation applied to a stabilized value")
    return live.get(0) or next(iter(inter.values()))


def _conj(u: Word, x: AlgebraElement) -> AlgebraElement:
    if not u.letters:
        return x
    uu = E.normal_form(u.on(x.n) if u.n < x.n else u)
    ui = E.normal_form(u.inverse().on(x.n) if u.n < x.n else u.inverse())
    return E.multiply(E.multiply(uu, x), ui)


def destabilize(x: AlgebraElement, sign: int = 1) -> AlgebraElement:
    """The element ``a`` on one strand fewer with ``x = a g_{n-1}^{sign}``."""
    n = x.n
    if n < 2:
        raise E.ShrinkNotAllowed("nothing to stabilize on one strand")
    if sign > 0:
        out = {}
        for (lo, w), c in x.items():
            if lo and lo[-1][0] >= n - 1:
                raise E.ShrinkNotAllowed("loop on the top strand")
            v = list(w)
            v[n - 2], v[n - 1] = v[n - 1], v[n - 2]
            if v[n - 1] != n - 1:
                raise E.ShrinkNotAllowed("term does not end in g_{n-1}")
            out[(lo, tuple(v[:n - 1]))] = c
        a = AlgebraElement(n - 1, out, True)
    else:
        a = E.restrict(E.append_letter(x, ("g", n - 1, 1)), n - 1)
    return a


def apply_op(op: Op, inter: Inter, verify: bool) -> Inter:
    if isinstance(op, ExactRewrite):
        x = _single(inter)
        if verify:
            a = op.after
            if a.n < x.n:
                ok = E.embed(a, x.n) == x
            else:
                ok = a == E.embed(x, a.n)
            if not ok:
                raise WitnessError("exact rewrite changes the element")
        return {0: op.after}
    if isinstance(op, (Conjugate, ClosurePermute)):
        x = _single(inter)
        if verify:
            parts = op.parts if isinstance(op, Conjugate) else ((op.by, x),)
            total = AlgebraElement.zero(x.n)
            image = AlgebraElement.zero(x.n)
            for u, piece in parts:
                total = total + piece
                image = image + _conj(u, piece)
            if total != x:
                raise WitnessError("conjugation pieces do not sum to the element")
            if image != op.after:
                raise WitnessError("conjugation image mismatch")
            if isinstance(op, ClosurePermute):
                (u, _), = parts
                if any(k != "g" or i != op.i + 1 for k, i, _ in u.letters):
                    raise WitnessError("closure permutation must conjugate by g_{i+1}")
        return {0: op.after}
    if isinstance(op, Stabilize):
        out: Inter = {}
        for ze, x in inter.items():
            a = destabilize(x, op.sign)
            if verify:
                back = E.embed(a, x.n)
                back = E.append_letter(back, ("g", x.n - 1, op.sign))
                if back != x:
                    raise WitnessError("stabilization source is not a*g_{n-1}^sign")
            if op.sign > 0:
                _add_inter(out, ze + 1, a)
            else:
                _add_inter(out, ze + 1, a.scale(QINV))
                _add_inter(out, ze, a.scale(QINV - 1))
        return out
    raise TypeError(op)


def _add_inter(out: Inter, ze: int, a: AlgebraElement) -> None:
    out[ze] = out[ze] + a if ze in out else a


def run_ops(source: TermKey, ops: List[Op], verify: bool) -> Dict[TermKey, CoeffPoly]:
    n, lo, w = source
    inter: Inter = {0: AlgebraElement(n, {(lo, w): ONE}, True)}
    for op in ops:
        inter = apply_op(op, inter, verify)
    out: Dict[TermKey, CoeffPoly] = {}
    for ze, x in inter.items():
        zf = CoeffPoly.z(ze)
        for (lo2, w2), c in x.items():
            key = (x.n, lo2, w2)
            v = out.get(key, CoeffPoly.zero()) + CoeffPoly.coerce(c) * zf
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# states: linear combinations of basis terms on varying strand counts

State = Dict[TermKey, CoeffPoly]


def state_from_element(x: AlgebraElement) -> State:
    return {(x.n, lo, w): CoeffPoly.coerce(c) for (lo, w), c in x.items()}


def state_add(state: State, key: TermKey, c: CoeffPoly) -> None:
    v = state.get(key)
    v = c if v is None else v + c
    if v:
        state[key] = v
    else:
        state.pop(key, None)


def replay(start: State, trace: RewriteTrace, verify: bool = True) -> State:
    """Re-run a witness from ``start``; returns the final state."""
    state = dict(start)
    for step in trace.steps:
        if step.source not in state:
            raise WitnessError(f"step source {step.source} is not in the current state")
        c = state.pop(step.source)
        for key, m in run_ops(step.source, step.ops, verify).items():
            state_add(state, key, m * c)
    return state


# ---------------------------------------------------------------------------
# gap moves


def lowest_gap(lo: Loops) -> Optional[Tuple[int, int]]:
    """``(j, i)``: the lowest missing index j and the next present index i."""
    for p, (idx, _) in enumerate(lo):
        if idx != p:
            return p, idx
    return None


def conj_shift_image(n: int, lo: Loops, i: int, R: Hecke) -> AlgebraElement:
    """Closed form of ``g_i^{-e} (X^lo R) g_i^{e}`` when ``t_{i-1}`` is absent.

    ``e`` is the sign of the exponent of ``t_i`` in ``lo``.
    """
    d = dict(lo)
    if d.get(i, 0) == 0 or d.get(i - 1, 0) != 0:
        raise NotAGap(f"index {i} must be present and {i - 1} absent")
    k = abs(d[i])
    e = 1 if d[i] > 0 else -1
    rest = dict(d)
    del rest[i]
    out = AlgebraElement.zero(n)
    Rg = E.hecke_right_g(R, i, inverse=e < 0)
    for u in range(1, k):
        m = dict(rest)
        m[i - 1] = e * u
        m[i] = e * (k - u)
        coeff = Q ** (e * (u - 1)) * (Q ** e - 1)
        out = out + E.with_loops(n, E.loops_from_dict(m), Rg, coeff)
    m = dict(rest)
    m[i - 1] = e * k
    gRg = E.hecke_left_g(Rg, i, inverse=e < 0)
    out = out + E.with_loops(n, E.loops_from_dict(m), gRg, Q ** (e * (k - 1)))
    return out


def gap_step(n: int, lo: Loops, w: Perm) -> Optional[Step]:
    """One gap move on a basis term, or None when there is no gap."""
    g = lowest_gap(lo)
    if g is None:
        return None
    _, i = g
    e = 1 if dict(lo)[i] > 0 else -1
    after = conj_shift_image(n, lo, i, {w: ONE})
    u = Word(n, (("g", i, -e),))
    piece = AlgebraElement(n, {(lo, w): ONE}, True)
    return Step((n, lo, w), [Conjugate(((u, piece),), after)])


def _potential(key: TermKey):
    n, lo, w = key
    phi = sum(i * abs(e) for i, e in lo)
    return (n, phi, E.perm_length(w))


def run_gap_moves(x: AlgebraElement) -> Tuple[AlgebraElement, RewriteTrace]:
    """Apply gap moves until every loop monomial is gap-free."""
    state = state_from_element(x)
    trace = RewriteTrace()
    heap = [(_neg(_potential(k)), k) for k in state]
    heapq.heapify(heap)
    budget = E.depth_cap() * max(1, len(state))
    while heap:
        _, key = heapq.heappop(heap)
        if key not in state:
            continue
        step = gap_step(*key)
        if step is None:
            continue
        if len(trace.steps) >= budget:
            raise E.DepthCapExceeded(f"more than {budget} gap moves")
        c = state.pop(key)
        trace.steps.append(step)
        for k2, m in run_ops(key, step.ops, verify=False).items():
            state_add(state, k2, m * c)
            heapq.heappush(heap, (_neg(_potential(k2)), k2))
    out: Dict = {}
    for (n, lo, w), c in state.items():
        out[(lo, w)] = _as_laurent(c)
    return AlgebraElement(x.n, out, True), trace


def _neg(t):
    return tuple(-v for v in t)


def _as_laurent(c: CoeffPoly) -> LaurentPoly:
    d = {}
    for (qe, ze), v in c.items():
        if ze:
            raise ValueError("unexpected z in a conjugation-only computation")
        d[qe] = v
    return LaurentPoly(d)


def check_replay(x: AlgebraElement, trace: RewriteTrace, result: AlgebraElement) -> bool:
    final = replay(state_from_element(x), trace)
    return final == state_from_element(result)


# ---------------------------------------------------------------------------
# public operations


def conj_shift(i: int, k: int, sign: int, alpha: AlgebraElement) -> Tuple[AlgebraElement, RewriteTrace]:
    """Rewrite ``t_i^{sign*k} * alpha`` up to conjugation by ``g_i^{-sign}``.

    ``alpha`` must commute with nothing in particular, but the loop part
    of the product has to avoid ``t_{i-1}`` for the closed form; the
    witness is checked against the engine either way.
    """
    n = alpha.n
    if not 1 <= i <= n - 1:
        raise E.IndexOutOfRange(f"index {i} on {n} strands")
    if k < 1 or sign not in (1, -1):
        raise ValueError("k must be positive and sign +-1")
    lead = AlgebraElement.monomial(n, {i: sign * k})
    x = E.multiply(lead, alpha)
    u = Word(n, (("g", i, -sign),))
    after = _conj(u, x)
    trace = RewriteTrace()
    for (lo, w), c in x.items():
        piece = AlgebraElement(n, {(lo, w): ONE}, True)
        trace.steps.append(Step((n, lo, w), [Conjugate(((u, piece),), _conj(u, piece))]))
    return after, trace


def conj_shift_formula(i: int, k: int, sign: int, alpha: AlgebraElement) -> AlgebraElement:
    """The right-hand side of the shift identity, built term by term."""
    n = alpha.n
    g = E.word_element(n, [("g", i, sign)])
    out = AlgebraElement.zero(n)
    for u in range(1, k):
        lead = AlgebraElement.monomial(n, {i - 1: sign * u, i: sign * (k - u)}, None,
                                       Q ** (sign * (u - 1)) * (Q ** sign - 1))
        out = out + E.multiply(lead, E.multiply(alpha, g))
    lead = AlgebraElement.monomial(n, {i - 1: sign * k}, None, Q ** (sign * (k - 1)))
    return out + E.multiply(lead, E.multiply(E.multiply(g, alpha), g))


def shift_gap_simple(m: Loops, j: int, sign: int, n: Optional[int] = None) -> Tuple[AlgebraElement, RewriteTrace]:
    """Move a lone ``t_j^{sign}`` down onto the first free index above the
    consecutive prefix of ``m``.

    ``m`` holds the consecutive prefix ``0..i`` and possibly ``t_j^{sign}``
    itself; the result is ``prefix * t_{i+1}^{sign} * (g_{i+2}..g_{j-1}
    g_j^2 g_{j-1}..g_{i+2})^{sign}`` in normal form.
    """
    d = dict(m)
    d.pop(j, None)
    prefix = E.loops_from_dict(d)
    if not E.loops_from_dict(d) == tuple((p, d[p]) for p in range(len(d))):
        raise NotAGap("prefix must be consecutive from 0")
    top = len(prefix) - 1
    if j <= top + 1:
        raise NotAGap(f"t_{j} is adjacent to the prefix")
    if n is None:
        n = j + 1
    d[j] = sign
    lo = E.loops_from_dict(d)
    x = AlgebraElement(n, {(lo, E.identity(n)): ONE}, True)
    trace = RewriteTrace()
    cur = x
    for i in range(j, top + 1, -1):
        new = AlgebraElement.zero(n)
        for (l2, w2), c in cur.items():
            st = gap_step(n, l2, w2)
            if st is None or lowest_gap(l2)[1] != i:
                raise NotAGap("unexpected intermediate")
            trace.steps.append(st)
            new = new + st.ops[0].after.scale(c)
        cur = new
    return cur, trace


def regularize_one_gap(prefix: Loops, j: int, kj: int, alpha: AlgebraElement
                       ) -> Tuple[List[Tuple[Loops, AlgebraElement]], RewriteTrace]:
    """Remove the single gap of ``prefix * t_j^{kj} * alpha``.

    Returns ``(loops, braid tail)`` pairs grouped by gap-free loop monomial.
    """
    if kj == 0:
        raise ValueError("exponent must be nonzero")
    top = E.loops_max_index(prefix)
    if prefix != tuple((p, dict(prefix)[p]) for p in range(top + 1)):
        raise NotAGap("prefix must be consecutive from 0")
    if j <= top + 1:
        raise NotAGap(f"t_{j} is adjacent to the prefix")
    n = max(alpha.n, j + 1)
    alpha = E.embed(alpha, n)
    x = E.multiply(AlgebraElement.monomial(n, E.loops_times_letter(prefix, j, kj)), alpha)
    out, trace = run_gap_moves(x)
    return group_by_loops(out), trace


def group_by_loops(x: AlgebraElement) -> List[Tuple[Loops, AlgebraElement]]:
    from .order import sort_key
    groups: Dict[Loops, Dict] = {}
    for (lo, w), c in x.items():
        groups.setdefault(lo, {})[((), w)] = c
    return [(lo, AlgebraElement(x.n, groups[lo], True))
            for lo in sorted(groups, key=sort_key, reverse=True)]


def regularize(m: Loops, tail: Optional[AlgebraElement] = None, n: Optional[int] = None
               ) -> Tuple[AlgebraElement, RewriteTrace]:
    """Remove every gap of ``X^m * tail`` by conjugation (leftmost gap first)."""
    m = tuple(m)
    need = E.loops_max_index(m) + 1
    if tail is not None:
        need = max(need, tail.n)
    if n is None:
        n = max(need, 1)
    if tail is None:
        tail = AlgebraElement.one(n)
    tail = E.embed(tail, n)
    x = E.multiply(AlgebraElement.monomial(n, m), tail)
    return run_gap_moves(x)
