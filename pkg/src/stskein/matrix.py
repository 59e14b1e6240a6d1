"""Finite blocks of the change of basis from t'-monomials to t-monomials.

Column ``c`` of the level-``k`` block holds the coordinates of the
t'-monomial ``c`` over the gap-free t-monomials.  Rows and columns carry the
same monomials, sorted ascending, so the homologous pair ``(c, c)`` sits on
the diagonal.  A block is grown from an enumeration until every monomial in
the support of a column also labels a column of its own.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import engine as E
from .convert import convert_monomial
from .engine import Loops
from .order import compare, enumerate_level, format_monomial, level, loops_from_json, loops_json, sort_key
from .rings import CoeffPoly
from .tails import reduce_to_basis


class NotTriangular(ArithmeticError):
    """The block is not lower triangular with unit diagonal."""


@dataclass
class BlockMatrix:
    level: int
    rows: List[Loops]
    cols: List[Loops]
    entries: Dict[Tuple[Loops, Loops], CoeffPoly] = field(default_factory=dict)

    def entry(self, r: Loops, c: Loops) -> CoeffPoly:
        return self.entries.get((r, c), CoeffPoly.zero())

    def column(self, c: Loops) -> Dict[Loops, CoeffPoly]:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def to_json(self) -> dict:
        ri = {r: i for i, r in enumerate(self.rows)}
        ci = {c: j for j, c in enumerate(self.cols)}
        ent = sorted(((ri[r], ci[c], v) for (r, c), v in self.entries.items()), key=lambda x: x[:2])
        return {"level": self.level,
                "rows": [loops_json(r) for r in self.rows],
                "cols": [loops_json(c) for c in self.cols],
                "entries": [{"r": i, "c": j, "coeff": v.to_json()} for i, j, v in ent]}

    @classmethod
    def from_json(cls, data: dict) -> "BlockMatrix":
        rows = [loops_from_json(r) for r in data["rows"]]
        cols = [loops_from_json(c) for c in data["cols"]]
        ent = {(rows[e["r"]], cols[e["c"]]): CoeffPoly.from_json(e["coeff"]) for e in data["entries"]}
        return cls(data["level"], rows, cols, {k: v for k, v in ent.items() if v})

    def to_csv(self) -> str:
        """The q^0 part of every entry (a polynomial in z), as a grid."""
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow([""] + [format_monomial(c, prime=True) for c in self.cols])
        for r in self.rows:
            line = [format_monomial(r)]
            for c in self.cols:
                v = self.entry(r, c)
                part = CoeffPoly({k: x for k, x in v.items() if k[0] == 0})
                line.append(str(part) if part else "0")
            w.writerow(line)
        return buf.getvalue()


def _column(c: Loops, canonical: bool) -> Dict[Loops, CoeffPoly]:
    me, _ = reduce_to_basis(convert_monomial(c), canonical)
    return dict(me.items())


def build_block(k: int, max_index: int, max_abs_exp: int, canonical: bool = True,
                max_size: Optional[int] = None) -> BlockMatrix:
    """Level-``k`` block seeded by the enumeration within the bounds."""
    if max_index < 0 or max_abs_exp < 0:
        raise ValueError("bounds must be non-negative")
    cap = E.term_cap() if max_size is None else max_size
    todo = list(enumerate_level(k, max_index, max_abs_exp, canonical))
    cols: Dict[Loops, Dict[Loops, CoeffPoly]] = {}
    while todo:
        c = todo.pop()
        if c in cols:
            continue
        if len(cols) >= cap:
            raise E.TermCapExceeded(f"block exceeds {cap} columns")
        col = _column(c, canonical)
        cols[c] = col
        for r in col:
            if level(r) != k:
                raise ArithmeticError(f"{format_monomial(r)} has the wrong level")
            if r not in cols:
                todo.append(r)
    labels = sorted(cols, key=sort_key)
    entries = {(r, c): v for c, col in cols.items() for r, v in col.items()}
    return BlockMatrix(k, labels, list(labels), entries)


def diagonal_exponent(m: Loops) -> int:
    """``-sum_i i*k_i``, the q-exponent expected on the diagonal."""
    return -sum(i * e for i, e in m)


@dataclass
class TriangularReport:
    ok: bool
    violations: List[str]


def check_triangular(B: BlockMatrix) -> TriangularReport:
    bad: List[str] = []
    if B.rows != B.cols:
        bad.append("rows and columns carry different monomials")
    for (r, c), v in sorted(B.entries.items(), key=lambda kv: (sort_key(kv[0][1]), sort_key(kv[0][0]))):
        if v and compare(r, c) > 0:
            bad.append(f"entry above the diagonal at row {format_monomial(r)}, column {format_monomial(c, True)}")
    for c in B.cols:
        d = B.entry(c, c)
        if not d.is_unit():
            bad.append(f"diagonal entry at {format_monomial(c, True)} is not a unit: {d}")
        elif d != CoeffPoly.q(diagonal_exponent(c)):
            bad.append(f"diagonal entry at {format_monomial(c, True)} is {d}, expected q^{diagonal_exponent(c)}")
    return TriangularReport(not bad, bad)


def invert_block(B: BlockMatrix) -> BlockMatrix:
    """Exact inverse of a lower triangular block with unit diagonal."""
    rep = check_triangular(B)
    if not rep.ok:
        raise NotTriangular("; ".join(rep.violations[:5]))
    labels = B.cols
    # columns of B as sparse maps; solve B X = I column by column
    bcol = {c: B.column(c) for c in labels}
    inv: Dict[Tuple[Loops, Loops], CoeffPoly] = {}
    for j, c in enumerate(labels):
        # x_c = d_c^{-1}; then for rows below, x_r = -d_r^{-1} sum_{s<r... } B[r,s] x_s
        x: Dict[Loops, CoeffPoly] = {c: CoeffPoly.one().div_unit(B.entry(c, c))}
        for r in reversed(labels[:j]):
            total = CoeffPoly.zero()
            for s, xs in x.items():
                v = bcol[s].get(r)
                if v:
                    total = total + v * xs
            if total:
                x[r] = (-total).div_unit(B.entry(r, r))
        for r, v in x.items():
            if v:
                inv[(r, c)] = v
    return BlockMatrix(B.level, list(labels), list(labels), inv)


def multiply_blocks(A: BlockMatrix, B: BlockMatrix) -> BlockMatrix:
    if A.cols != B.rows:
        raise ValueError("incompatible blocks")
    out: Dict[Tuple[Loops, Loops], CoeffPoly] = {}
    bycol: Dict[Loops, List[Tuple[Loops, CoeffPoly]]] = {}
    for (r, c), v in A.entries.items():
        bycol.setdefault(c, []).append((r, v))
    for (s, c), v in B.entries.items():
        for r, a in bycol.get(s, ()):
            t = out.get((r, c), CoeffPoly.zero()) + a * v
            if t:
                out[(r, c)] = t
            else:
                out.pop((r, c), None)
    return BlockMatrix(A.level, list(A.rows), list(B.cols), out)


def is_identity(B: BlockMatrix) -> bool:
    one = CoeffPoly.one()
    for (r, c), v in B.entries.items():
        if (r == c and v != one) or (r != c and v):
            return False
    return all(B.entry(c, c) == one for c in B.cols)


def independence_certificate(B: BlockMatrix) -> bool:
    """True iff the block is lower triangular with unit diagonal."""
    if not B.cols and not B.rows:
        return True
    return check_triangular(B).ok
