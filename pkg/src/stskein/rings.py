"""Sparse exact polynomial rings.

Three rings are used:

* ``LaurentPoly``: Laurent polynomials in ``q`` with integer coefficients.
* ``CoeffPoly``: Laurent polynomials in ``q`` and ``z``.
* ``TraceValue``: Laurent polynomials in ``q``, ``z``, ``L`` and the
  commuting symbols ``s_k`` (``k`` any integer).  Monomials in the ``s_k``
  are stored as sorted tuples of indices.

All values are immutable.  Zero is the empty term map and no zero
coefficient is ever stored, so equality is structural equality.
"""

from __future__ import annotations

from typing import Any, Dict, Iterable, Tuple


class NotAUnit(ArithmeticError):
    """Raised when dividing by a polynomial that is not a signed monomial."""


class _Sparse:
    """Base class: a canonical map from monomial keys to nonzero ints."""

    __slots__ = ("_terms", "_hash")

    # Subclasses define the monomial structure.
    ONE_KEY: Any = None

    def __init__(self, terms: Dict[Any, int] | None = None):
        if terms:
            terms = {k: c for k, c in terms.items() if c}
        else:
            terms = {}
        object.__setattr__(self, "_terms", terms)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, terms: Dict[Any, int]):
        # terms already canonical (no zeros); caller gives up ownership
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    # -- monomial arithmetic, overridden per ring
    @staticmethod
    def _mul_keys(a, b):
        raise NotImplementedError

    @staticmethod
    def _inv_key(a):
        raise NotImplementedError

    # -- basic protocol
    @property
    def terms(self) -> Dict[Any, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.constant(other)
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((type(self).__name__, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def constant(cls, c: int):
        return cls._raw({cls.ONE_KEY: c} if c else {})

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls.constant(1)

    def _coerce(self, other):
        if type(other) is type(self):
            return other
        if isinstance(other, int):
            return self.constant(other)
        conv = getattr(type(self), "coerce", None)
        if conv is not None:
            return conv(other)
        raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.zero()
            return self._raw({k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return self.zero()
        mk = self._mul_keys
        out: Dict[Any, int] = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = mk(ka, kb)
                v = out.get(k, 0) + ca * cb
                if v:
                    out[k] = v
                else:
                    del out[k]
        return self._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.one().div_unit(self) ** (-e)
        result = self.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_unit(self) -> bool:
        """True iff the value is plus or minus a single monomial."""
        if len(self._terms) != 1:
            return False
        (c,) = self._terms.values()
        return c in (1, -1)

    def div_unit(self, u):
        """Exact quotient ``self / u`` where ``u`` is a unit."""
        u = self._coerce(u)
        if not u.is_unit():
            raise NotAUnit(f"{u} is not a unit")
        ((k, c),) = u._terms.items()
        inv = self._raw({self._inv_key(k): c})
        return self * inv

    def sort_key(self):
        return sorted(self._terms.items(), key=lambda kv: _key_order(kv[0]))


def _key_order(k):
    return k if isinstance(k, tuple) else (k,)


def _fmt_power(name: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return name
    return f"{name}^{e}" if e > 0 else f"{name}^({e})"


def _fmt_sum(parts: Iterable[Tuple[int, str]]) -> str:
    out = []
    for c, mono in parts:
        if mono:
            if c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
        else:
            s = str(c)
        out.append(s)
    if not out:
        return "0"
    text = out[0]
    for s in out[1:]:
        text += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
    return text


class LaurentPoly(_Sparse):
    """Laurent polynomial in q, keyed by the exponent of q.

    >>> q = LaurentPoly.q()
    >>> (q - 1) * (q + 1)
    LaurentPoly(q^2 - 1)
    >>> (q**-1 - 1) ** 2
    LaurentPoly(1 - 2*q^(-1) + q^(-2))
    """

    __slots__ = ()
    ONE_KEY = 0

    @staticmethod
    def _mul_keys(a, b):
        return a + b

    @staticmethod
    def _inv_key(a):
        return -a

    def __mul__(self, other):
        # integer keys: same algorithm as the base class with the key sum inlined
        if type(other) is not LaurentPoly:
            return _Sparse.__mul__(self, other)
        a, b = self._terms, other._terms
        if not a or not b:
            return LaurentPoly._raw({})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((kb, cb),) = b.items()
            return LaurentPoly._raw({ka + kb: ca * cb for ka, ca in a.items()})
        out: Dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    @classmethod
    def q(cls, e: int = 1):
        return cls._raw({e: 1})

    @classmethod
    def monomial(cls, e: int, c: int = 1):
        return cls._raw({e: c} if c else {})

    def degree_range(self):
        if not self._terms:
            return None
        return min(self._terms), max(self._terms)

    def to_json(self):
        return [{"q": e, "z": 0, "c": c} for e, c in sorted(self._terms.items(), reverse=True)]

    @classmethod
    def from_json(cls, data):
        out: Dict[int, int] = {}
        for t in data:
            if t.get("z", 0):
                raise ValueError("z does not occur in a q-polynomial")
            out[t["q"]] = out.get(t["q"], 0) + t["c"]
        return cls(out)

    def __str__(self):
        return _fmt_sum((c, _fmt_power("q", e)) for e, c in sorted(self._terms.items(), reverse=True))

    def __repr__(self):
        return f"LaurentPoly({self})"


class CoeffPoly(_Sparse):
    """Laurent polynomial in q and z, keyed by (q-exponent, z-exponent)."""

    __slots__ = ()
    ONE_KEY = (0, 0)

    @staticmethod
    def _mul_keys(a, b):
        return (a[0] + b[0], a[1] + b[1])

    @staticmethod
    def _inv_key(a):
        return (-a[0], -a[1])

    @classmethod
    def coerce(cls, other):
        if isinstance(other, LaurentPoly):
            return cls._raw({(e, 0): c for e, c in other.items()})
        raise TypeError(f"cannot coerce {type(other).__name__} to CoeffPoly")

    @classmethod
    def q(cls, e: int = 1):
        return cls._raw({(e, 0): 1})

    @classmethod
    def z(cls, e: int = 1):
        return cls._raw({(0, e): 1})

    def to_json(self):
        return [{"q": k[0], "z": k[1], "c": c}
                for k, c in sorted(self._terms.items(), key=lambda kv: (-kv[0][1], -kv[0][0]))]

    @classmethod
    def from_json(cls, data):
        out: Dict[Tuple[int, int], int] = {}
        for t in data:
            k = (t.get("q", 0), t.get("z", 0))
            out[k] = out.get(k, 0) + t["c"]
        return cls(out)

    def __str__(self):
        items = sorted(self._terms.items(), key=lambda kv: (-kv[0][1], -kv[0][0]))
        return _fmt_sum(
            (c, "*".join(p for p in (_fmt_power("q", k[0]), _fmt_power("z", k[1])) if p))
            for k, c in items)

    def __repr__(self):
        return f"CoeffPoly({self})"


class TraceValue(_Sparse):
    """Polynomial in q, z, L and the symbols s_k.

    Keys are ``(q_exp, z_exp, L_exp, s)`` where ``s`` is a sorted tuple of
    the indices k of the s_k factors (with repetition).  The s_k are
    polynomial variables, so ``s`` only ever grows under multiplication.
    """

    __slots__ = ()
    ONE_KEY = (0, 0, 0, ())

    @staticmethod
    def _mul_keys(a, b):
        s = a[3] + b[3]
        if a[3] and b[3]:
            s = tuple(sorted(s))
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2], s)

    @staticmethod
    def _inv_key(a):
        if a[3]:
            raise NotAUnit("s_k symbols are not invertible")
        return (-a[0], -a[1], -a[2], ())

    def is_unit(self) -> bool:
        if not super().is_unit():
            return False
        ((k, _),) = self._terms.items()
        return not k[3]

    @classmethod
    def coerce(cls, other):
        if isinstance(other, LaurentPoly):
            return cls._raw({(e, 0, 0, ()): c for e, c in other.items()})
        if isinstance(other, CoeffPoly):
            return cls._raw({(k[0], k[1], 0, ()): c for k, c in other.items()})
        raise TypeError(f"cannot coerce {type(other).__name__} to TraceValue")

    @classmethod
    def s(cls, *indices: int):
        return cls._raw({(0, 0, 0, tuple(sorted(indices))): 1})

    @classmethod
    def q(cls, e: int = 1):
        return cls._raw({(e, 0, 0, ()): 1})

    @classmethod
    def z(cls, e: int = 1):
        return cls._raw({(0, e, 0, ()): 1})

    @classmethod
    def L(cls, e: int = 1):
        return cls._raw({(0, 0, e, ()): 1})

    def _sorted(self):
        return sorted(self._terms.items(),
                      key=lambda kv: (kv[0][3], -kv[0][2], -kv[0][1], -kv[0][0]))

    def to_json(self):
        return [{"q": k[0], "z": k[1], "L": k[2], "s": list(k[3]), "c": c}
                for k, c in self._sorted()]

    @classmethod
    def from_json(cls, data):
        out: Dict[Any, int] = {}
        for t in data:
            k = (t.get("q", 0), t.get("z", 0), t.get("L", 0), tuple(sorted(t.get("s", []))))
            out[k] = out.get(k, 0) + t["c"]
        return cls(out)

    def __str__(self):
        def mono(k):
            parts = [_fmt_power("q", k[0]), _fmt_power("z", k[1]), _fmt_power("L", k[2])]
            parts += [f"s[{i}]" for i in k[3]]
            return "*".join(p for p in parts if p)
        return _fmt_sum((c, mono(k)) for k, c in self._sorted())

    def __repr__(self):
        return f"TraceValue({self})"


# Functional spellings of the ring operations.

def poly_add(a, b):
    return a + b


def poly_mul(a, b):
    return a * b


def poly_is_unit(p) -> bool:
    return p.is_unit()


def poly_div_unit(p, u):
    return p.div_unit(u)


Q = LaurentPoly.q()
ONE = LaurentPoly.one()
