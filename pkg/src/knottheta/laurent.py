"""Exact Laurent polynomial arithmetic.

``LaurentPoly1`` is an integer Laurent polynomial in ``T``.  It is stored as a
FLINT ``fmpz_poly`` together with a valuation shift, so that a polynomial
``T^v * p(T)`` keeps ``p(0) != 0``.  ``LaurentPoly2`` is a rational Laurent
polynomial in ``T1, T2`` stored as a dictionary; ``RatFun`` is a quotient of a
``LaurentPoly2`` by a multiset of canonical factors.

Nothing here uses floating point.
"""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping, Union

import flint

__all__ = [
    "LaurentPoly1",
    "LaurentPoly2",
    "RatFun",
    "T",
    "T1",
    "T2",
    "T3",
    "try_exact_divide",
    "parse_poly",
]

Number = Union[int, Fraction]

_ZERO = flint.fmpz_poly([])


class LaurentPoly1:
    """Integer Laurent polynomial in one variable ``T``."""

    __slots__ = ("_p", "_v")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        if not coeffs:
            self._p, self._v = _ZERO, 0
            return
        items = {int(e): int(c) for e, c in coeffs.items() if c}
        if not items:
            self._p, self._v = _ZERO, 0
            return
        lo = min(items)
        dense = [0] * (max(items) - lo + 1)
        for e, c in items.items():
            dense[e - lo] = c
        self._p, self._v = flint.fmpz_poly(dense), lo

    @classmethod
    def _raw(cls, p: flint.fmpz_poly, v: int) -> "LaurentPoly1":
        """Wrap ``T^v * p`` and restore the nonzero-constant-term invariant."""
        obj = cls.__new__(cls)
        if p.is_zero():
            obj._p, obj._v = _ZERO, 0
            return obj
        k = 0
        while p[k] == 0:
            k += 1
        if k:
            p = p.right_shift(k)
        obj._p, obj._v = p, v + k
        return obj

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "LaurentPoly1":
        return cls._raw(flint.fmpz_poly([c]), e)

    @classmethod
    def const(cls, c: int) -> "LaurentPoly1":
        return cls._raw(flint.fmpz_poly([c]), 0)

    # -- structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __bool__(self) -> bool:
        return not self._p.is_zero()

    @property
    def min_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no exponents")
        return self._v

    @property
    def max_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no exponents")
        return self._v + self._p.degree()

    def items(self) -> list[tuple[int, int]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing exponent."""
        v = self._v
        return [(v + k, int(c)) for k, c in enumerate(self._p.coeffs()) if c != 0]

    def to_dict(self) -> dict[int, int]:
        return dict(self.items())

    def dense(self) -> tuple[int, list[int]]:
        """``(low exponent, coefficient list)``; raw FLINT layout."""
        return self._v, [int(c) for c in self._p.coeffs()]

    def __getitem__(self, e: int) -> int:
        k = e - self._v
        if k < 0 or self.is_zero() or k > self._p.degree():
            return 0
        return int(self._p[k])

    def l1_norm(self) -> int:
        return sum(abs(int(c)) for c in self._p.coeffs())

    # -- arithmetic -------------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "LaurentPoly1":
        if isinstance(x, LaurentPoly1):
            return x
        if isinstance(x, int):
            return LaurentPoly1.const(x)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self._v == o._v:
            return LaurentPoly1._raw(self._p + o._p, self._v)
        if self._v < o._v:
            return LaurentPoly1._raw(self._p + o._p.left_shift(o._v - self._v), self._v)
        return LaurentPoly1._raw(self._p.left_shift(self._v - o._v) + o._p, o._v)

    __radd__ = __add__

    def __neg__(self):
        obj = LaurentPoly1.__new__(LaurentPoly1)
        obj._p, obj._v = -self._p, self._v
        return obj

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly1()
            obj = LaurentPoly1.__new__(LaurentPoly1)
            obj._p, obj._v = self._p * other, self._v
            return obj
        if not isinstance(other, LaurentPoly1):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentPoly1()
        obj = LaurentPoly1.__new__(LaurentPoly1)
        obj._p, obj._v = self._p * other._p, self._v + other._v
        return obj

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.items()) != 1 or abs(self.items()[0][1]) != 1:
                raise ValueError("only unit monomials have negative powers")
            (e, c), = self.items()
            return LaurentPoly1.monomial(-e * -k, c ** (-k))
        return LaurentPoly1._raw(self._p ** k, self._v * k)

    def exact_div(self, other: "LaurentPoly1") -> "LaurentPoly1 | None":
        """Quotient when ``other`` divides ``self`` in Z[T, 1/T], else None."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly1()
        q, r = divmod(self._p, other._p)
        if not r.is_zero():
            return None
        return LaurentPoly1._raw(q, self._v - other._v)

    def __floordiv__(self, other):
        o = self._coerce(other)
        q = self.exact_div(o)
        if q is None:
            raise ArithmeticError(f"{o} does not divide {self}")
        return q

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly1.const(other)
        if not isinstance(other, LaurentPoly1):
            return NotImplemented
        return self._v == other._v and self._p == other._p

    def __hash__(self) -> int:
        return hash((self._v, tuple(int(c) for c in self._p.coeffs())))

    # -- calculus and evaluation --------------------------------------------------

    def evaluate(self, at: Number) -> Fraction:
        at = Fraction(at)
        if at == 0:
            raise ZeroDivisionError("cannot evaluate a Laurent polynomial at 0")
        return sum((Fraction(c) * at ** e for e, c in self.items()), Fraction(0))

    def derivative(self, k: int = 1) -> "LaurentPoly1":
        """k-th formal derivative with respect to ``T``."""
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        out = {}
        for e, c in self.items():
            f = c
            for r in range(k):
                f *= e - r
            if f:
                out[e - k] = f
        return LaurentPoly1(out)

    def reflect(self) -> "LaurentPoly1":
        """``p(1/T)``."""
        return LaurentPoly1({-e: c for e, c in self.items()})

    def substitute(self, target: str) -> "LaurentPoly2":
        """Rename ``T`` to ``T1``, ``T2`` or ``T1*T2`` (written ``T3``)."""
        if target in ("T1", "1"):
            return LaurentPoly2({(e, 0): c for e, c in self.items()})
        if target in ("T2", "2"):
            return LaurentPoly2({(0, e): c for e, c in self.items()})
        if target in ("T3", "T1T2", "3"):
            return LaurentPoly2({(e, e): c for e, c in self.items()})
        raise ValueError(f"unknown substitution target {target!r}")

    def normalize_symmetric(self) -> "LaurentPoly1":
        """The associate ``+-T^m * p`` symmetric under ``T -> 1/T`` with value
        ``+1`` at ``T = 1``."""
        if self.is_zero():
            raise ValueError("cannot normalize the zero polynomial")
        lo, hi = self.min_exp, self.max_exp
        if (lo + hi) % 2:
            raise ValueError(f"{self} has no symmetric associate (odd span)")
        shifted = self * LaurentPoly1.monomial(-(lo + hi) // 2)
        if shifted.reflect() != shifted:
            raise ValueError(f"{self} is not symmetric up to a unit")
        at1 = shifted.evaluate(1)
        if at1 == -1:
            shifted = -shifted
        elif at1 != 1:
            raise ValueError(f"{self} evaluates to {at1} at T=1, not +-1")
        return shifted

    # -- text --------------------------------------------------------------------

    def __str__(self) -> str:
        return _render([((e,), Fraction(c)) for e, c in self.items()], ("T",))

    def __repr__(self) -> str:
        return f"LaurentPoly1({str(self)!r})"


def normalize_symmetric(p: LaurentPoly1) -> LaurentPoly1:
    return p.normalize_symmetric()


class LaurentPoly2:
    """Rational Laurent polynomial in ``T1, T2``; ``T3 = T1*T2``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[tuple[int, int], Number] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                if v:
                    c[(int(k[0]), int(k[1]))] = Fraction(v)
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "LaurentPoly2":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, e1: int, e2: int, c: Number = 1) -> "LaurentPoly2":
        return cls({(e1, e2): c})

    @classmethod
    def const(cls, c: Number) -> "LaurentPoly2":
        return cls({(0, 0): c})

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def items(self) -> list[tuple[tuple[int, int], Fraction]]:
        """Terms sorted lexicographically by ``(e1, e2)``."""
        return sorted(self._c.items())

    def to_dict(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._c)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self._c.get(key, Fraction(0))

    def __len__(self) -> int:
        return len(self._c)

    def support_box(self) -> tuple[int, int, int, int]:
        """``(min e1, max e1, min e2, max e2)``."""
        if not self._c:
            raise ValueError("zero polynomial has no support")
        e1 = [k[0] for k in self._c]
        e2 = [k[1] for k in self._c]
        return min(e1), max(e1), min(e2), max(e2)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    @staticmethod
    def _coerce(x) -> "LaurentPoly2":
        if isinstance(x, LaurentPoly2):
            return x
        if isinstance(x, (int, Fraction)):
            return LaurentPoly2.const(x)
        if isinstance(x, LaurentPoly1):
            return x.substitute("T1")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        c = dict(self._c)
        for k, v in o._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return LaurentPoly2._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly2()
            return LaurentPoly2._raw({k: v * other for k, v in self._c.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        c: dict = {}
        for (a1, a2), x in self._c.items():
            for (b1, b2), y in o._c.items():
                k = (a1 + b1, a2 + b2)
                c[k] = c.get(k, 0) + x * y
        return LaurentPoly2._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials have negative powers")
            ((e1, e2), c), = self._c.items()
            return LaurentPoly2({(e1 * k, e2 * k): Fraction(c) ** k})
        out = LaurentPoly2.const(1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, d1: int, d2: int) -> "LaurentPoly2":
        return LaurentPoly2._raw({(a + d1, b + d2): v for (a, b), v in self._c.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly2.const(other)
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self.items()))
        return self._hash

    def evaluate(self, x1: Number, x2: Number) -> Fraction:
        x1, x2 = Fraction(x1), Fraction(x2)
        if x1 == 0 or x2 == 0:
            raise ZeroDivisionError("cannot evaluate a Laurent polynomial at 0")
        return sum((v * x1 ** a * x2 ** b for (a, b), v in self._c.items()), Fraction(0))

    def swap(self) -> "LaurentPoly2":
        """Exchange ``T1`` and ``T2``."""
        return LaurentPoly2._raw({(b, a): v for (a, b), v in self._c.items()})

    def __str__(self) -> str:
        return _render([(k, v) for k, v in self.items()], ("T1", "T2"))

    def __repr__(self) -> str:
        return f"LaurentPoly2({str(self)!r})"


T = LaurentPoly1.monomial(1)
T1 = LaurentPoly2.monomial(1, 0)
T2 = LaurentPoly2.monomial(0, 1)
T3 = LaurentPoly2.monomial(1, 1)


# -- exact division -----------------------------------------------------------


def _to_poly_part(p: LaurentPoly2) -> tuple[LaurentPoly2, tuple[int, int]]:
    lo1, _, lo2, _ = p.support_box()
    return p.shift(-lo1, -lo2), (lo1, lo2)


def try_exact_divide(num: LaurentPoly2, den: LaurentPoly2) -> LaurentPoly2 | None:
    """Return ``q`` with ``q * den == num`` in Q[T1^+-1, T2^+-1], or None.

    Both sides are moved to the polynomial ring by monomial shifts (units),
    then divided with the lexicographic division algorithm, which tells
    divisibility exactly.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return LaurentPoly2()
    n, (n1, n2) = _to_poly_part(num)
    d, (d1, d2) = _to_poly_part(den)
    lead_key, lead_c = max(d._c.items())
    rem = dict(n._c)
    quot: dict = {}
    dterms = list(d._c.items())
    while rem:
        key = max(rem)
        e1, e2 = key[0] - lead_key[0], key[1] - lead_key[1]
        if e1 < 0 or e2 < 0:
            return None
        f = rem[key] / lead_c
        quot[(e1, e2)] = f
        for (a, b), v in dterms:
            k = (a + e1, b + e2)
            s = rem.get(k, 0) - f * v
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    return LaurentPoly2._raw(quot).shift(n1 - d1, n2 - d2)


# -- rational functions -------------------------------------------------------


def _canonical_factor(f: LaurentPoly2) -> tuple[LaurentPoly2, LaurentPoly2]:
    """Split ``f = unit * g`` with ``g`` a canonical associate.

    ``g`` has minimal exponents zero, lexicographically largest coefficient
    positive and coprime integer coefficients; ``unit`` is a rational
    multiple of a monomial.
    """
    g, (s1, s2) = _to_poly_part(f)
    lead = max(g._c.items())[1]
    coeffs = list(g._c.values())
    den = 1
    for v in coeffs:
        den = den * v.denominator // _gcd(den, v.denominator)
    ints = [int(v * den) for v in coeffs]
    content = 0
    for x in ints:
        content = _gcd(content, abs(x))
    scale = Fraction(content, den)
    if lead < 0:
        scale = -scale
    g = g * (1 / scale)
    return LaurentPoly2.monomial(s1, s2, scale), g


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


class RatFun:
    """``numerator / prod(denominator factors)`` with canonical factors."""

    __slots__ = ("num", "den")

    def __init__(self, num, den: Iterable[LaurentPoly2] = ()):
        num = LaurentPoly2._coerce(num)
        factors: list[LaurentPoly2] = []
        for f in den:
            f = LaurentPoly2._coerce(f)
            if f.is_zero():
                raise ZeroDivisionError("zero denominator factor")
            unit, g = _canonical_factor(f)
            # the unit is a monomial, so dividing by it keeps num polynomial
            ((e1, e2), c), = unit._c.items()
            num = num.shift(-e1, -e2) * (1 / c)
            if g != 1:
                factors.append(g)
        self.num = num
        self.den = Counter()
        for g in factors:
            self.den[g] += 1
        self._cancel()

    @classmethod
    def _from_parts(cls, num: LaurentPoly2, den: Counter) -> "RatFun":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = Counter({k: v for k, v in den.items() if v > 0})
        obj._cancel()
        return obj

    def _cancel(self) -> None:
        if self.num.is_zero():
            self.den = Counter()
            return
        for g in list(self.den):
            while self.den[g] > 0:
                q = try_exact_divide(self.num, g)
                if q is None:
                    break
                self.num = q
                self.den[g] -= 1
            if self.den[g] == 0:
                del self.den[g]

    def is_polynomial(self) -> bool:
        return not self.den

    def to_poly(self) -> LaurentPoly2:
        if self.den:
            raise ArithmeticError(f"denominator did not clear: {self}")
        return self.num

    def denominator(self) -> LaurentPoly2:
        out = LaurentPoly2.const(1)
        for g, k in sorted(self.den.items(), key=lambda kv: kv[0].items()):
            out = out * g ** k
        return out

    @staticmethod
    def _coerce(x) -> "RatFun":
        if isinstance(x, RatFun):
            return x
        p = LaurentPoly2._coerce(x)
        if p is NotImplemented:
            return p
        return RatFun._from_parts(p, Counter())

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        common = self.den | o.den
        a = self.num
        for g, k in (common - self.den).items():
            a = a * g ** k
        b = o.num
        for g, k in (common - o.den).items():
            b = b * g ** k
        return RatFun._from_parts(a + b, common)

    __radd__ = __add__

    def __neg__(self):
        return RatFun._from_parts(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFun._from_parts(self.num * o.num, self.den + o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by a zero rational function")
        inv = RatFun(o.denominator(), [o.num])
        return self * inv

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        diff = self - o
        return diff.num.is_zero()

    def __hash__(self):
        return hash((self.num, tuple(sorted((hash(g), k) for g, k in self.den.items()))))

    def __str__(self) -> str:
        if not self.den:
            return str(self.num)
        return f"({self.num}) / ({self.denominator()})"

    def __repr__(self) -> str:
        return f"RatFun({str(self)!r})"


# -- canonical text ------------------------------------------------------------------


def _render(terms, names: tuple[str, ...]) -> str:
    if not terms:
        return "0"
    pieces = []
    for exps, c in terms:
        mono = []
        for name, e in zip(names, exps):
            if e == 1:
                mono.append(name)
            elif e:
                mono.append(f"{name}^{e}")
        mag = abs(c)
        if mono:
            body = "*".join(mono) if mag == 1 else f"{mag}*" + "*".join(mono)
        else:
            body = str(mag)
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    out = [("-" if sign == "-" else "") + body]
    for sign, body in pieces[1:]:
        out.append(f" {sign} {body}")
    return "".join(out)


_TERM = re.compile(
    r"""\s*([+-])?\s*
        (?:(\d+)(?:\s*/\s*(\d+))?)?     # coefficient
        \s*\*?\s*
        ((?:[Tt][123]?(?:\s*\^\s*\(?\s*[+-]?\d+\s*\)?)?\s*\*?\s*)*)   # monomial
    """,
    re.VERBOSE,
)
_FACTOR = re.compile(r"([Tt])([123]?)(?:\s*\^\s*\(?\s*([+-]?\d+)\s*\)?)?")


def parse_poly(text: str, nvars: int | None = None) -> LaurentPoly1 | LaurentPoly2:
    """Parse the canonical text form (and common variants such as ``2*t^2``).

    ``T``/``t`` gives a univariate result; any of ``T1, T2, T3`` gives a
    bivariate one.  ``nvars`` forces the arity.
    """
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial text")
    pos = 0
    terms: list[tuple[int, int, int, Fraction]] = []
    uni = False
    multi = False
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at position {pos}: {src[pos:]!r}")
        sign, num, den, mono = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing sign at position {pos}")
        if num is None and not mono.strip():
            raise ValueError(f"empty term at position {pos}")
        c = Fraction(int(num) if num else 1, int(den) if den else 1)
        if sign == "-":
            c = -c
        e0 = e1 = e2 = 0
        for f in _FACTOR.finditer(mono):
            which, exp = f.group(2), int(f.group(3)) if f.group(3) else 1
            if which == "":
                uni = True
                e0 += exp
            else:
                multi = True
                if which == "1":
                    e1 += exp
                elif which == "2":
                    e2 += exp
                else:
                    e1 += exp
                    e2 += exp
        terms.append((e0, e1, e2, c))
        pos = m.end()
        first = False
    if uni and multi:
        raise ValueError("mixed univariate and bivariate variables")
    arity = nvars or (2 if multi else 1)
    if arity == 1:
        if multi:
            raise ValueError("bivariate text where univariate was requested")
        acc: dict[int, Fraction] = {}
        for e0, _, _, c in terms:
            acc[e0] = acc.get(e0, 0) + c
        if any(v.denominator != 1 for v in acc.values()):
            raise ValueError("univariate polynomials have integer coefficients")
        return LaurentPoly1({e: int(v) for e, v in acc.items()})
    acc2: dict[tuple[int, int], Fraction] = {}
    for e0, e1, e2, c in terms:
        k = (e1 + e0, e2)
        acc2[k] = acc2.get(k, 0) + c
    return LaurentPoly2(acc2)
