"""Exact computations in the HOMFLYPT skein module of the solid torus.

The pieces, bottom up: Laurent polynomial rings (``rings``), normal forms in
the algebra of mixed braids (``engine``), the monomial order (``order``),
closed-form expansions of t'-monomials (``convert``), gap removal
(``gaps``), reduction to the module basis (``tails``), the Markov trace
(``trace``), change-of-basis blocks (``matrix``), and the command line
(``cli``).
"""

from __future__ import annotations

from .convert import convert_monomial
from .engine import AlgebraElement, Word, normal_form
from .matrix import build_block, check_triangular, invert_block
from .order import compare, enumerate_level
from .parser import parse_expression
from .rings import CoeffPoly, LaurentPoly, TraceValue
from .tails import ModuleElement, reduce_to_basis
from .trace import invariant_x, markov_trace

__all__ = [
    "AlgebraElement", "CoeffPoly", "LaurentPoly", "ModuleElement", "TraceValue", "Word",
    "build_block", "check_triangular", "compare", "convert_monomial", "enumerate_level",
    "invariant_x", "invert_block", "markov_trace", "normal_form", "parse_expression",
    "reduce_to_basis",
]
