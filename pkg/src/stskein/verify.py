"""Verification suites: every closed form and pipeline property checked
against the brute-force engine.

A suite returns a ``Report``; failures carry the case and a command line
that reproduces the run.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from . import convert as C
from . import engine as E
from .engine import AlgebraElement, Word, normal_form
from .order import (EQUAL, GREATER, LESS, canonical_arrangement, compare, enumerate_level, is_basis_monomial,
                    sort_key)
from .rings import LaurentPoly

SUITES = ("relations", "lemmas", "order", "pipeline", "matrix", "trace")


@dataclass
class Report:
    suite: str
    checked: int = 0
    failures: List[Dict[str, str]] = field(default_factory=list)
    repro: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, case: str, detail: str = "") -> None:
        self.failures.append({"case": case, "detail": detail, "repro": self.repro})

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checked": self.checked,
                "failures": self.failures[:20], "failure_count": len(self.failures)}


# ---------------------------------------------------------------------------
# defining relations

def _w(n: int, *letters) -> Word:
    return Word(n, tuple(letters))


def relation_cases(n_max: int) -> Iterator[Tuple[str, Word, AlgebraElement]]:
    """Pairs (name, word, expected normal form) for the defining relations."""
    q = LaurentPoly.q()
    for n in range(1, n_max + 1):
        yield f"n={n}: t t^-1 = 1", _w(n, ("t", 0, 1), ("t", 0, -1)), AlgebraElement.one(n)
        yield f"n={n}: t^-1 t = 1", _w(n, ("t", 0, -1), ("t", 0, 1)), AlgebraElement.one(n)
        for i in range(1, n):
            gi, gin = ("g", i, 1), ("g", i, -1)
            yield f"n={n}: g{i} g{i}^-1 = 1", _w(n, gi, gin), AlgebraElement.one(n)
            yield f"n={n}: g{i}^-1 g{i} = 1", _w(n, gin, gi), AlgebraElement.one(n)
            quad = normal_form(_w(n, gi)).scale(q - 1) + AlgebraElement.one(n).scale(q)
            yield f"n={n}: g{i}^2 = (q-1) g{i} + q", _w(n, gi, gi), quad
            inv = normal_form(_w(n, gi)).scale(q ** -1) + AlgebraElement.one(n).scale(q ** -1 - 1)
            yield f"n={n}: g{i}^-1 = q^-1 g{i} + q^-1 - 1", _w(n, gin), inv
            if i + 1 < n:
                gj = ("g", i + 1, 1)
                yield (f"n={n}: braid relation at {i}", _w(n, gi, gj, gi),
                       normal_form(_w(n, gj, gi, gj)))
            for j in range(i + 2, n):
                gj = ("g", j, 1)
                yield f"n={n}: g{i} g{j} = g{j} g{i}", _w(n, gi, gj), normal_form(_w(n, gj, gi))
            if i > 1:
                for e in (1, -1):
                    yield (f"n={n}: t^{e} g{i} = g{i} t^{e}", _w(n, ("t", 0, e), gi),
                           normal_form(_w(n, gi, ("t", 0, e))))
        if n >= 2:
            t, g1 = ("t", 0, 1), ("g", 1, 1)
            yield f"n={n}: t g1 t g1 = g1 t g1 t", _w(n, t, g1, t, g1), normal_form(_w(n, g1, t, g1, t))


def run_relations(n_max: int = 5) -> Report:
    rep = Report("relations", repro=f"stskein verify --suite relations --n-max {n_max}")
    for name, word, expected in relation_cases(n_max):
        rep.checked += 1
        if normal_form(word) != expected:
            rep.fail(name)
    return rep


# ---------------------------------------------------------------------------
# closed forms against the engine

LemmaCase = Tuple[str, Callable[[], AlgebraElement], Word]


def lemma_cases(n_max: int = 5, exp_max: int = 3, ops: Optional[Dict[str, Callable]] = None
                ) -> Iterator[LemmaCase]:
    """Every closed form with its left-hand side, for all parameters in range.

    ``ops`` may replace any named operation (used to test the suite itself).
    """
    op = dict(vars(C))
    if ops:
        op.update(ops)
    ks = range(1, exp_max + 1)
    signed = [s * k for k in ks for s in (1, -1)]
    for n in range(2, n_max + 1):
        for m in range(0, n - 1):
            for k in ks:
                for s in (1, -1):
                    yield (f"expand_g_next_t_power(m={m}, k={k}, sign={s}, n={n})",
                           lambda m=m, k=k, s=s, n=n: op["expand_g_next_t_power"](m, k, s, n),
                           C.g_next_t_power_word(m, k, s, n))
        for i in range(1, n):
            for k in signed:
                yield (f"expand_t_power_times_g(i={i}, k={k}, n={n})",
                       lambda i=i, k=k, n=n: op["expand_t_power_times_g"](i, k, n),
                       C.t_power_times_g_word(i, k, n))
        for r in range(1, n):
            for s_ in range(0, r):
                for k in range(0, n):
                    for sg in (1, -1):
                        yield (f"expand_desc_block_times_t(r={r}, s={s_}, k={k}, sign={sg}, n={n})",
                               lambda r=r, s_=s_, k=k, sg=sg, n=n: op["expand_desc_block_times_t"](r, s_, k, sg, n),
                               C.desc_block_times_t_word(r, s_, k, sg, n))
        for k in range(1, n):
            for r in range(1, k + 1):
                yield (f"expand_t_times_desc_block(k={k}, r={r}, n={n})",
                       lambda k=k, r=r, n=n: op["expand_t_times_desc_block"](k, r, n),
                       C.t_times_desc_block_word(k, r, n))
        for r in range(1, n):
            for s_ in range(0, n - r):
                for k in range(0, n):
                    for sg in (1, -1):
                        yield (f"expand_asc_block_times_t(r={r}, s={s_}, k={k}, sign={sg}, n={n})",
                               lambda r=r, s_=s_, k=k, sg=sg, n=n: op["expand_asc_block_times_t"](r, s_, k, sg, n),
                               C.asc_block_times_t_word(r, s_, k, sg, n))
        for i in range(1, n):
            for v in C.BRIDGE_VARIANTS:
                yield (f"expand_bridge(i={i}, variant={v}, n={n})",
                       lambda i=i, v=v, n=n: op["expand_bridge"](i, v, n), C.bridge_word(i, v, n))
        for k in ks:
            for s in (1, -1):
                yield (f"expand_tprime1_power(k={k}, sign={s}, n={n})",
                       lambda k=k, s=s, n=n: op["expand_tprime1_power"](k, s, n),
                       C.tprime_power_word(1, s * k, n))
        for k in range(1, n):
            yield (f"expand_tprime_inverse(k={k}, n={n})",
                   lambda k=k, n=n: op["expand_tprime_inverse"](k, n), C.tprime_power_word(k, -1, n))
        for m in range(0, n):
            for k in signed:
                yield (f"expand_tprime_power(m={m}, k={k}, n={n})",
                       lambda m=m, k=k, n=n: op["expand_tprime_power"](m, k, n),
                       C.tprime_power_word(m, k, n))
    # whole monomials: every gap-free exponent pattern of index < n_max,
    # smallest index first
    vals = [e for e in range(-exp_max, exp_max + 1) if e]
    for top in range(0, n_max):
        for exps in _patterns(vals, top + 1):
            mono = tuple(enumerate(exps))
            yield (f"convert_monomial({list(mono)})",
                   lambda mono=mono: op["convert_monomial"](mono), C.prime_monomial_word(mono))


def _patterns(vals, length):
    if length == 0:
        yield ()
        return
    for head in vals:
        for rest in _patterns(vals, length - 1):
            yield (head,) + rest


def run_lemmas(n_max: int = 5, exp_max: int = 3, ops: Optional[Dict[str, Callable]] = None,
               deadline: Optional[float] = None) -> Report:
    """Closed forms against the engine.  ``deadline`` is a budget in seconds;
    running out of it is reported as a failure naming the first unchecked case."""
    rep = Report("lemmas", repro=f"stskein verify --suite lemmas --n-max {n_max} --exp-max {exp_max}")
    start = time.monotonic()
    cases = list(lemma_cases(n_max, exp_max, ops))
    for pos, (name, fn, word) in enumerate(cases):
        if deadline is not None and time.monotonic() - start > deadline:
            rep.fail("time budget", f"{deadline:.0f}s spent after {pos} of {len(cases)} cases; next: {name}")
            break
        rep.checked += 1
        try:
            got = fn()
        except Exception as exc:  # a raising op is a failed case
            rep.fail(name, f"{type(exc).__name__}: {exc}")
            continue
        if got != normal_form(word):
            rep.fail(name, f"left side {word}")
    return rep


# ---------------------------------------------------------------------------
# order


def random_monomial(rng: random.Random, max_index: int, max_abs_exp: int) -> Tuple[Tuple[int, int], ...]:
    top = rng.randint(0, max_index)
    vals = [e for e in range(-max_abs_exp, max_abs_exp + 1) if e]
    return tuple((i, rng.choice(vals)) for i in range(top + 1))


def run_order(count: int = 300, seed: int = 0, max_index: int = 3, max_abs_exp: int = 3) -> Report:
    rep = Report("order", repro=f"stskein verify --suite order --count {count} --seed {seed}")
    rng = random.Random(seed)
    for _ in range(count):
        a, b, c = (random_monomial(rng, max_index, max_abs_exp) for _ in range(3))
        rep.checked += 1
        if compare(a, b) != -compare(b, a):
            rep.fail(f"antisymmetry {a} {b}")
        if (compare(a, a) != EQUAL):
            rep.fail(f"reflexivity {a}")
        if compare(a, b) <= 0 and compare(b, c) <= 0 and compare(a, c) > 0:
            rep.fail(f"transitivity {a} {b} {c}")
    for k in range(-2, 3):
        mons = enumerate_level(k, max_index, 2)
        rep.checked += 1
        if any(compare(x, y) != LESS for x, y in zip(mons, mons[1:])):
            rep.fail(f"enumeration of level {k} not strictly ascending")
        if mons and mons[0] != (((0, k),) if k else ()):
            rep.fail(f"minimum of level {k}")
    return rep


# ---------------------------------------------------------------------------
# pipeline


def random_word(rng: random.Random, n: int, length: int) -> Word:
    letters = []
    for _ in range(length):
        if rng.random() < 0.4:
            letters.append(("t", 0, rng.choice((1, -1))))
        else:
            letters.append(("g", rng.randint(1, n - 1), rng.choice((1, -1))))
    return Word(n, tuple(letters))


def run_pipeline(count: int = 200, seed: int = 0, max_index: int = 2, max_abs_exp: int = 2) -> Report:
    """Witness replay on converted monomials, idempotence, conjugation invariance."""
    from .tails import ModuleElement, reduce_to_basis, verify_reduction

    rep = Report("pipeline", repro=f"stskein verify --suite pipeline --count {count} --seed {seed}")
    rng = random.Random(seed)
    for _ in range(count):
        m = random_monomial(rng, max_index, max_abs_exp)
        x = C.convert_monomial(m)
        res, trace = reduce_to_basis(x)
        rep.checked += 1
        if not verify_reduction(x, res, trace):
            rep.fail(f"witness for {m}")
        if any(lv != sum(e for _, e in m) for lv in (sum(e for _, e in lo) for lo in res.monomials())):
            rep.fail(f"level of {m}")
        tau = canonical_arrangement(m)
        got, _ = reduce_to_basis(AlgebraElement.monomial(len(tau), tau))
        rep.checked += 1
        if got != ModuleElement.basis(tau):
            rep.fail(f"idempotence on {tau}")
    for _ in range(count):
        n = rng.randint(2, 4)
        x = random_word(rng, n, rng.randint(1, 8))
        u = random_word(rng, n, rng.randint(1, 4))
        rep.checked += 1
        a, _ = reduce_to_basis(x)
        b, _ = reduce_to_basis(u * x * u.inverse())
        if a != b:
            rep.fail(f"conjugation invariance x={x} u={u}")
    return rep


# ---------------------------------------------------------------------------
# matrix


def run_matrix(levels=range(-2, 3), max_index: int = 2, max_abs_exp: int = 2, canonical: bool = True) -> Report:
    from .matrix import build_block, check_triangular, invert_block, is_identity, multiply_blocks

    rep = Report("matrix", repro=f"stskein verify --suite matrix --max-index {max_index} --exp-max {max_abs_exp}")
    for k in levels:
        B = build_block(k, max_index, max_abs_exp, canonical)
        rep.checked += 1
        r = check_triangular(B)
        if not r.ok:
            for v in r.violations:
                rep.fail(f"level {k}", v)
            continue
        if not is_identity(multiply_blocks(B, invert_block(B))):
            rep.fail(f"level {k}", "B * B^-1 is not the identity")
    return rep


# ---------------------------------------------------------------------------
# trace


def run_trace(count: int = 100, seed: int = 0, max_index: int = 2, max_abs_exp: int = 2) -> Report:
    from .rings import TraceValue
    from .trace import markov_trace, tr_lambda_prime

    rep = Report("trace", repro=f"stskein verify --suite trace --count {count} --seed {seed}")
    rng = random.Random(seed)
    for _ in range(count):
        m = random_monomial(rng, max_index, max_abs_exp)
        rep.checked += 1
        if markov_trace(C.prime_monomial_word(m)) != tr_lambda_prime(m):
            rep.fail(f"closed form on {m}")
    rep.checked += 1
    if markov_trace(Word(2, (("g", 1, 1),))) != TraceValue.z():
        rep.fail("tr(g1) = z")
    for _ in range(count):
        n = rng.randint(2, 4)
        a = random_word(rng, n, rng.randint(1, 6))
        b = random_word(rng, n, rng.randint(1, 6))
        rep.checked += 1
        if markov_trace(a * b) != markov_trace(b * a):
            rep.fail(f"tr(ab) = tr(ba) for a={a} b={b}")
    return rep


def run_verification_suite(suite: str, n_max: int = 5, exp_max: int = 3, count: int = 100,
                           seed: int = 0) -> Report:
    if suite == "relations":
        return run_relations(n_max)
    if suite == "lemmas":
        return run_lemmas(n_max, exp_max)
    if suite == "order":
        return run_order(count, seed)
    if suite == "pipeline":
        return run_pipeline(count, seed)
    if suite == "matrix":
        return run_matrix(max_abs_exp=min(exp_max, 2))
    if suite == "trace":
        return run_trace(count, seed)
    raise ValueError(f"unknown suite {suite!r}")
