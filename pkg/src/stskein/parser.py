"""Concrete syntax for words and linear combinations.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*       a leading '-' is allowed
    term   := factor ('*'? factor)*          juxtaposition multiplies
    factor := base ('^' exponent)?
    base   := 't' | 't' '[' uint ']' | "t'" '[' uint ']' | 'g' '[' uint ']'
            | 'q' | 'z' | uint | '(' expr ')'
    exponent := '-'? uint | '(' '-'? uint ')'

A parsed expression is a sum of terms ``coefficient * word`` where the
coefficient is a polynomial in q and z and the word is a sequence of
letters.  Letters never commute, coefficients commute with everything.

>>> e = parse_expression("(q-1)*t[1] + q*g[1]")
>>> len(e.terms)
2
>>> str(parse_expression("g[1]g[1]"))
'g[1]^2'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .engine import AlgebraElement, IndexOutOfRange, Letter, Word, normal_form
from .rings import CoeffPoly, LaurentPoly


class ParseError(SyntaxError):
    """Syntax error with the byte offset and the set of expected tokens."""

    def __init__(self, message: str, offset: int, expected: Sequence[str] = ()):
        self.position = offset
        self.expected = tuple(expected)
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected one of: {', '.join(expected)})"
        super().__init__(detail)


_TOKEN = re.compile(r"\s*(?:(\d+)|(t')|([tgqz])|(.))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            out.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            out.append(("tp", "t'", start))
        elif m.group(3) is not None:
            out.append((m.group(3), m.group(3), start))
        elif m.group(4) is not None:
            ch = m.group(4)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*^()[]":
                raise ParseError(f"unexpected character {ch!r}", start)
            out.append((ch, ch, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


Word_ = Tuple[Letter, ...]


def _merge(letters: Sequence[Letter]) -> Word_:
    """Combine adjacent equal letters into powers; drop cancelled letters."""
    out: List[Letter] = []
    for kind, idx, e in letters:
        if out and out[-1][0] == kind and out[-1][1] == idx:
            e2 = out[-1][2] + e
            out.pop()
            if e2:
                out.append((kind, idx, e2))
        else:
            out.append((kind, idx, e))
    return tuple(out)


@dataclass(frozen=True)
class Expression:
    """``sum coeff * word``; words are tuples of letters with merged powers."""

    terms: Tuple[Tuple[CoeffPoly, Word_], ...]

    @staticmethod
    def from_dict(d: Dict[Word_, CoeffPoly]) -> "Expression":
        return Expression(tuple((c, w) for w, c in sorted(d.items(), key=lambda kv: _word_key(kv[0])) if c))

    def as_dict(self) -> Dict[Word_, CoeffPoly]:
        out: Dict[Word_, CoeffPoly] = {}
        for c, w in self.terms:
            v = out.get(w, CoeffPoly.zero()) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return out

    def __add__(self, other: "Expression") -> "Expression":
        d = self.as_dict()
        for w, c in other.as_dict().items():
            v = d.get(w, CoeffPoly.zero()) + c
            if v:
                d[w] = v
            else:
                d.pop(w, None)
        return Expression.from_dict(d)

    def __neg__(self) -> "Expression":
        return Expression(tuple((-c, w) for c, w in self.terms))

    def __mul__(self, other: "Expression") -> "Expression":
        d: Dict[Word_, CoeffPoly] = {}
        for c1, w1 in self.terms:
            for c2, w2 in other.terms:
                w = _merge(w1 + w2)
                v = d.get(w, CoeffPoly.zero()) + c1 * c2
                if v:
                    d[w] = v
                else:
                    d.pop(w, None)
        return Expression.from_dict(d)

    def strands(self) -> int:
        """1 + the largest loop or crossing index."""
        top = 0
        for _, w in self.terms:
            for _, idx, _ in w:
                top = max(top, idx)
        return top + 1

    def is_scalar(self) -> bool:
        return all(not w for _, w in self.terms)

    def words(self, n: Optional[int] = None) -> List[Tuple[CoeffPoly, Word]]:
        n = self.strands() if n is None else n
        if n < self.strands():
            raise IndexOutOfRange(f"expression needs {self.strands()} strands")
        return [(c, Word(n, w)) for c, w in self.terms]

    def to_element(self, n: Optional[int] = None) -> AlgebraElement:
        """Normal form in the algebra; coefficients must not involve z."""
        n = self.strands() if n is None else n
        out = AlgebraElement.zero(n)
        for c, w in self.words(n):
            out = out + normal_form(w).scale(q_only(c))
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, w in self.terms:
            ws = format_word(w)
            if c == CoeffPoly.one():
                parts.append(ws)
            elif not w:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{ws}")
        return " + ".join(parts)


def _word_key(w: Word_):
    return (len(w), [(k, i, e) for k, i, e in w])


def q_only(c: CoeffPoly) -> LaurentPoly:
    out = {}
    for (qe, ze), v in c.items():
        if ze:
            raise ValueError("z may only appear in coefficients of reduced results")
        out[qe] = v
    return LaurentPoly(out)


def format_word(w: Word_) -> str:
    return str(Word(max([i for _, i, _ in w] + [0]) + 1, w)) if w else "1"


def _scalar(c: CoeffPoly) -> Expression:
    return Expression(((c, ()),)) if c else Expression(())


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str, expected: Sequence[str] = ()):
        tok = self.toks[self.i]
        if tok[0] != kind:
            raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], expected or (kind,))
        self.i += 1
        return tok

    def parse(self) -> Expression:
        e = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], ("+", "-", "*", "end of input"))
        return e

    def expr(self) -> Expression:
        neg = False
        if self.peek()[0] == "-":
            self.i += 1
            neg = True
        e = self.term()
        if neg:
            e = -e
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take(self.peek()[0])[0]
            t = self.term()
            e = e + (t if op == "+" else -t)
        return e

    _STARTS = ("t", "tp", "g", "q", "z", "int", "(")

    def term(self) -> Expression:
        e = self.factor()
        while True:
            k = self.peek()[0]
            if k == "*":
                self.i += 1
                e = e * self.factor()
            elif k in self._STARTS:
                e = e * self.factor()
            else:
                return e

    def exponent(self) -> int:
        paren = False
        if self.peek()[0] == "(":
            self.i += 1
            paren = True
        sign = 1
        if self.peek()[0] == "-":
            self.i += 1
            sign = -1
        v = int(self.take("int", ("integer",))[1]) * sign
        if paren:
            self.take(")")
        return v

    def index(self) -> int:
        self.take("[")
        v = int(self.take("int", ("index",))[1])
        self.take("]")
        return v

    def factor(self) -> Expression:
        tok = self.peek()
        base, letter = self.base()
        if self.peek()[0] != "^":
            return base
        self.i += 1
        pos = self.peek()[2]
        k = self.exponent()
        if letter is not None:
            if k == 0:
                return _scalar(CoeffPoly.one())
            kind, idx = letter
            return Expression(((CoeffPoly.one(), ((kind, idx, k),)),))
        if base.is_scalar() and len(base.terms) == 1:
            c = base.terms[0][0]
            if k < 0:
                if not c.is_unit():
                    raise ParseError("only units may carry negative exponents", pos)
                return _scalar(CoeffPoly.one().div_unit(c) ** (-k))
            return _scalar(c ** k)
        if k < 0:
            raise ParseError("negative power of a sum", pos)
        out = _scalar(CoeffPoly.one())
        for _ in range(k):
            out = out * base
        return out

    def base(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "t":
            self.i += 1
            if self.peek()[0] == "[":
                idx = self.index()
            else:
                idx = 0
            return Expression(((CoeffPoly.one(), (("t", idx, 1),)),)), ("t", idx)
        if kind == "tp":
            self.i += 1
            idx = self.index()
            name = "tp" if idx else "t"
            return Expression(((CoeffPoly.one(), ((name, idx, 1),)),)), (name, idx)
        if kind == "g":
            self.i += 1
            pos = self.peek()[2]
            idx = self.index()
            if idx < 1:
                raise ParseError("crossing indices start at 1", pos)
            return Expression(((CoeffPoly.one(), (("g", idx, 1),)),)), ("g", idx)
        if kind == "q":
            self.i += 1
            return _scalar(CoeffPoly.q()), None
        if kind == "z":
            self.i += 1
            return _scalar(CoeffPoly.z()), None
        if kind == "int":
            self.i += 1
            return _scalar(CoeffPoly.constant(int(tok[1]))), None
        if kind == "(":
            self.i += 1
            e = self.expr()
            self.take(")", (")",))
            return e, None
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2],
                         ("t", "t'", "g", "q", "z", "integer", "("))


def parse_expression(text: str) -> Expression:
    return _Parser(text).parse()


def parse_word(text: str, n: Optional[int] = None) -> Word:
    """Parse a single word with coefficient 1."""
    e = parse_expression(text)
    if len(e.terms) != 1 or e.terms[0][0] != CoeffPoly.one():
        raise ValueError("expected a single word with coefficient 1")
    return e.words(n)[0][1]


def parse_loops(text: str):
    """Parse a monomial in t, t[i] (or t'[i]) into sorted (index, exponent) pairs."""
    w = parse_word(text)
    out: Dict[int, int] = {}
    last = -1
    for kind, idx, e in w.letters:
        if kind == "g":
            raise ValueError("a loop monomial has no crossings")
        if idx <= last:
            raise ValueError("loop indices must increase")
        last = idx
        out[idx] = e
    return tuple(sorted(out.items())), any(k == "tp" for k, _, _ in w.letters)
