"""The Markov trace and the normalized invariant X.

The trace is evaluated through the change of basis: an element is reduced
to coordinates over the gap-free monomials ``t^{k_0} t_1^{k_1} ...``, each of
those is written over the t'-monomials by triangular back-substitution, and
on a t'-monomial the trace is the product ``s_{k_0} s_{k_1} ...``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, Union

from . import engine as E
from .convert import GrammarViolation, _check_prime_monomial, convert_monomial
from .engine import AlgebraElement, DepthCapExceeded, Loops, Word
from .order import compare, format_monomial, is_gap_free, is_canonical_arrangement
from .rings import CoeffPoly, TraceValue
from .tails import ModuleElement, reduce_to_basis

_memo: Dict[Loops, Dict[Loops, CoeffPoly]] = {}
_lock = threading.RLock()


def clear_cache() -> None:
    with _lock:
        _memo.clear()


def tr_lambda_prime(m) -> TraceValue:
    """Trace of a t'-monomial.

    >>> print(tr_lambda_prime(((0, -1), (1, 2))))
    s[-1]*s[2]
    >>> print(tr_lambda_prime(()))
    1
    """
    m = tuple(m)
    _check_prime_monomial(m)
    return TraceValue.s(*(e for _, e in m))


def lambda_to_lambda_prime(tau, canonical: bool = True) -> Dict[Loops, CoeffPoly]:
    """Write a basis monomial ``tau`` over t'-monomials.

    The reduction of the homologous t'-monomial is ``d * tau`` plus strictly
    smaller basis monomials, with ``d`` a unit; solving for ``tau`` and
    recursing on the smaller monomials gives a finite combination.
    """
    tau = tuple(tau)
    if not is_gap_free(tau) or (canonical and not is_canonical_arrangement(tau)):
        raise GrammarViolation(f"{format_monomial(tau)} is not a basis monomial")
    if not canonical:
        return _solve(tau, False, 0)
    with _lock:
        return dict(_solve(tau, True, 0))


_memo_raw: Dict[Loops, Dict[Loops, CoeffPoly]] = {}


def _solve(tau: Loops, canonical: bool, depth: int) -> Dict[Loops, CoeffPoly]:
    memo = _memo if canonical else _memo_raw
    if tau in memo:
        return memo[tau]
    if depth > E.depth_cap():
        raise DepthCapExceeded("change of basis recursion too deep")
    if len(tau) <= 1:
        out = {tau: CoeffPoly.one()}
        memo[tau] = out
        return out
    col, _ = reduce_to_basis(convert_monomial(tau), canonical)
    d = col.coefficient(tau)
    out: Dict[Loops, CoeffPoly] = {tau: CoeffPoly.one().div_unit(d)}
    for sigma, c in col.items():
        if sigma == tau:
            continue
        if compare(sigma, tau) >= 0:
            raise ArithmeticError(f"{format_monomial(sigma)} is not below {format_monomial(tau)}")
        f = -c.div_unit(d)
        for mu, v in _solve(sigma, canonical, depth + 1).items():
            s = out.get(mu, CoeffPoly.zero()) + f * v
            if s:
                out[mu] = s
            else:
                out.pop(mu, None)
    memo[tau] = out
    return out


def trace_of_module(x: ModuleElement, canonical: bool = True) -> TraceValue:
    total = TraceValue.zero()
    for tau, c in x.items():
        for mu, v in lambda_to_lambda_prime(tau, canonical).items():
            total = total + TraceValue.coerce(c * v) * tr_lambda_prime(mu)
    return total


def markov_trace(x: Union[Word, AlgebraElement]) -> TraceValue:
    """Markov trace of a word or algebra element.

    >>> from stskein.engine import Word
    >>> print(markov_trace(Word(2, (("g", 1, 1),))))
    z
    """
    me, _ = reduce_to_basis(E.element(x), True)
    return trace_of_module(me, True)


@dataclass(frozen=True)
class NormalizedInvariant:
    """``numerator / (L^denom_L_exp * (1 - q)^denom_one_minus_q_exp)``.

    ``L`` is a formal square root of the normalizing parameter.
    """

    numerator: TraceValue
    denom_L_exp: int = 0
    denom_one_minus_q_exp: int = 0

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "denom_L_exp": self.denom_L_exp,
                "denom_one_minus_q_exp": self.denom_one_minus_q_exp}

    @classmethod
    def from_json(cls, data: dict) -> "NormalizedInvariant":
        return cls(TraceValue.from_json(data["numerator"]), data["denom_L_exp"],
                   data["denom_one_minus_q_exp"])

    def __str__(self):
        den = []
        if self.denom_L_exp:
            den.append("L" if self.denom_L_exp == 1 else f"L^{self.denom_L_exp}")
        if self.denom_one_minus_q_exp:
            b = self.denom_one_minus_q_exp
            den.append("(1 - q)" if b == 1 else f"(1 - q)^{b}")
        num = str(self.numerator)
        return f"({num}) / ({'*'.join(den)})" if den else num


def invariant_x(w: Word) -> NormalizedInvariant:
    """The link invariant of the closure of a mixed braid word.

    It is ``(-(1 - L^2 q) / (L (1 - q)))^(n-1) * L^e * tr(w)`` where ``e`` is
    the exponent sum of the braid letters, macros expanded.
    """
    if not isinstance(w, Word):
        raise TypeError("invariant_x needs a word")
    n = w.n
    e = 0
    for kind, idx, x in w.letters:
        if kind == "g":
            e += x
        elif kind == "t":
            # t_i is g_i ... g_1 t g_1 ... g_i; t'_i has exponent sum 0
            e += 2 * idx * x
    tr = markov_trace(w)
    factor = -(TraceValue.one() - TraceValue.L(2) * TraceValue.q())
    num = tr * factor ** (n - 1)
    net = e - (n - 1)
    if net >= 0:
        num = num * TraceValue.L(net)
        dl = 0
    else:
        dl = -net
    return NormalizedInvariant(num, dl, n - 1)
