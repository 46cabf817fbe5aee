"""Exact polynomials over Q in x, y, z and the hypersurface rings Q[x,y,z]/(x^m + y^n + z^2).

Coefficients are :class:`fractions.Fraction`; a polynomial is an immutable
sparse map from exponent triples to nonzero coefficients.  Elements of the
quotient ring are kept in the unique normal form with z-degree at most one,
obtained by rewriting z^2 -> -(x^m + y^n).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Tuple, Union

Rational = Fraction
Monomial = Tuple[int, int, int]
Scalar = Union[int, Fraction]

VARS = ("x", "y", "z")


class RingMismatchError(ValueError):
    """Operands live in different hypersurface rings."""


def grevlex_key(mono: Monomial) -> tuple:
    """Sort key for graded reverse lexicographic order with x > y > z.

    Larger key means larger monomial.
    """
    a, b, c = mono
    return (a + b + c, -c, -b)


def mono_mul(p: Monomial, q: Monomial) -> Monomial:
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def mono_divides(p: Monomial, q: Monomial) -> bool:
    return p[0] <= q[0] and p[1] <= q[1] and p[2] <= q[2]


def mono_div(q: Monomial, p: Monomial) -> Monomial:
    return (q[0] - p[0], q[1] - p[1], q[2] - p[2])


def mono_lcm(p: Monomial, q: Monomial) -> Monomial:
    return (max(p[0], q[0]), max(p[1], q[1]), max(p[2], q[2]))


class Poly:
    """Sparse polynomial in Q[x, y, z].

    Instances are treated as immutable; ``terms`` must not be mutated after
    construction.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[tuple(mono)] = Fraction(coeff)
        self.terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        # caller guarantees: no zero coefficients, Fraction values
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c: int = 0, coeff: Scalar = 1) -> "Poly":
        if min(a, b, c) < 0:
            raise ValueError(f"negative exponent in monomial ({a}, {b}, {c})")
        return cls({(a, b, c): coeff})

    @classmethod
    def var(cls, name: str) -> "Poly":
        e = [0, 0, 0]
        e[VARS.index(name)] = 1
        return cls({tuple(e): 1})

    @classmethod
    def zero(cls) -> "Poly":
        return cls._raw({})

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.sorted_terms())

    def sorted_terms(self):
        """Terms in descending grevlex order."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def lead(self) -> Tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no lead term")
        mono = max(self.terms, key=grevlex_key)
        return mono, self.terms[mono]

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = VARS.index(var)
        return max((m[i] for m in self.terms), default=-1)

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def is_constant(self) -> bool:
        return all(m == (0, 0, 0) for m in self.terms)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = Poly._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = Poly._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = Poly._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero()
            return Poly._raw({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for (a1, b1, c1), k1 in self.terms.items():
            for (a2, b2, c2), k2 in other.terms.items():
                mono = (a1 + a2, b1 + b2, c1 + c2)
                out[mono] = out.get(mono, 0) + k1 * k2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def mul_term(self, mono: Monomial, coeff: Scalar) -> "Poly":
        """Multiply by the single term coeff * mono."""
        if not coeff:
            return Poly.zero()
        a, b, c = mono
        return Poly._raw({(m[0] + a, m[1] + b, m[2] + c): k * coeff for m, k in self.terms.items()})

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def partial(p: Poly, var: str) -> Poly:
    """Formal partial derivative of ``p`` with respect to ``var``."""
    i = VARS.index(var)
    out = {}
    for mono, c in p.terms.items():
        e = mono[i]
        if e:
            m = list(mono)
            m[i] = e - 1
            out[tuple(m)] = c * e
    return Poly._raw(out)


# -- text grammar ----------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_mono(mono: Monomial) -> str:
    parts = []
    for name, e in zip(VARS, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Render ``p`` as a signed sum of terms, highest grevlex term first."""
    if not p.terms:
        return "0"
    out = []
    for i, (mono, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        ms = _format_mono(mono)
        if not ms:
            body = _format_coeff(mag)
        elif mag == 1:
            body = ms
        else:
            body = f"{_format_coeff(mag)}*{ms}"
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([xyz])(?:\^(\d+))?|([+\-*]))")


def parse_poly(text: str) -> Poly:
    """Parse the ``c*x^a*y^b*z^c`` grammar, e.g. ``-1/4*x*y^2 + z^2``."""
    pos = 0
    terms: Dict[Monomial, Fraction] = {}
    sign = 1
    coeff = None
    mono = [0, 0, 0]
    expect_factor = True
    have_term = False
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial")

    def flush():
        nonlocal coeff, mono, sign, have_term
        c = sign * (coeff if coeff is not None else Fraction(1))
        key = tuple(mono)
        terms[key] = terms.get(key, 0) + c
        coeff, mono, sign, have_term = None, [0, 0, 0], 1, False

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        num, var, exp, op = m.groups()
        if num is not None:
            if not expect_factor:
                raise ParseError(f"missing operator before {num!r}")
            coeff = (coeff if coeff is not None else Fraction(1)) * Fraction(num)
            expect_factor, have_term = False, True
        elif var is not None:
            if not expect_factor:
                raise ParseError(f"missing operator before {var!r}")
            mono[VARS.index(var)] += int(exp) if exp else 1
            expect_factor, have_term = False, True
        elif op == "*":
            if expect_factor:
                raise ParseError(f"dangling '*' at {pos}")
            expect_factor = True
        else:
            if have_term:
                if expect_factor:
                    raise ParseError(f"dangling operator at {pos}")
                flush()
            elif not expect_factor:
                raise ParseError(f"misplaced sign at {pos}")
            if op == "-":
                sign = -sign
            expect_factor = True
    if expect_factor or not have_term:
        raise ParseError("polynomial ends with an operator")
    flush()
    return Poly(terms)


# -- quotient ring ---------------------------------------------------------

@dataclass(frozen=True)
class HypersurfaceRing:
    """A = Q[x,y,z]/(x^m + y^n + z^2) with m, n >= 2."""

    m: int
    n: int

    def __post_init__(self):
        for name, v in (("m", self.m), ("n", self.n)):
            if not isinstance(v, int) or isinstance(v, bool) or v < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {v!r}")

    @property
    def f(self) -> Poly:
        return Poly({(self.m, 0, 0): 1, (0, self.n, 0): 1, (0, 0, 2): 1})

    @property
    def z_square(self) -> Poly:
        """The rewrite target of z^2, namely -(x^m + y^n)."""
        return Poly({(self.m, 0, 0): -1, (0, self.n, 0): -1})

    def gradient(self) -> Tuple[Poly, Poly, Poly]:
        return (Poly.monomial(self.m - 1, coeff=self.m),
                Poly.monomial(0, self.n - 1, coeff=self.n),
                Poly.monomial(0, 0, 1, coeff=2))

    def weights(self) -> Tuple[int, int, int]:
        """Weights of x, y, z making f weighted homogeneous of weight 2mn."""
        return (2 * self.n, 2 * self.m, self.m * self.n)

    def __call__(self, value) -> "RingElem":
        if isinstance(value, RingElem):
            if value.ring != self:
                raise RingMismatchError(f"{value.ring} vs {self}")
            return value
        if isinstance(value, str):
            value = parse_poly(value)
        elif isinstance(value, (int, Fraction)):
            value = Poly.const(value)
        return normal_form(value, self)

    def zero(self) -> "RingElem":
        return RingElem(self, Poly.zero())

    def one(self) -> "RingElem":
        return RingElem(self, Poly.const(1))

    def gens(self):
        return tuple(RingElem(self, Poly.var(v)) for v in VARS)

    def __str__(self):
        return f"Q[x,y,z]/(x^{self.m} + y^{self.n} + z^2)"


def normal_form(p: Poly, R: HypersurfaceRing) -> "RingElem":
    """Reduce ``p`` modulo f to its representative with z-degree <= 1."""
    return RingElem(R, _reduce(p, R))


def _reduce(p: Poly, R: HypersurfaceRing) -> Poly:
    if all(mono[2] < 2 for mono in p.terms):
        return p
    g = R.z_square
    powers = [Poly.const(1)]
    out: Dict[Monomial, Fraction] = {}
    for (a, b, c), k in p.terms.items():
        q, r = divmod(c, 2)
        while len(powers) <= q:
            powers.append(powers[-1] * g)
        for (a2, b2, _), k2 in powers[q].terms.items():
            mono = (a + a2, b + b2, r)
            out[mono] = out.get(mono, 0) + k * k2
    return Poly._raw({m: c for m, c in out.items() if c})


def is_zero_mod_f(p: Poly, R: HypersurfaceRing) -> bool:
    return not _reduce(p, R).terms


class RingElem:
    """Element of a :class:`HypersurfaceRing`, stored in normal form."""

    __slots__ = ("ring", "repr")

    def __init__(self, ring: HypersurfaceRing, repr: Poly):
        # repr must already be in normal form; use normal_form() otherwise
        self.ring = ring
        self.repr = repr

    def _other(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return RingElem(self.ring, Poly.const(other))
        if isinstance(other, Poly):
            return normal_form(other, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return RingElem(self.ring, self.repr + other.repr)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return RingElem(self.ring, self.repr - other.repr)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return RingElem(self.ring, other.repr - self.repr)

    def __neg__(self):
        return RingElem(self.ring, -self.repr)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElem(self.ring, self.repr * other)
        other = self._other(other)
        if other is NotImplemented:
            return other
        return RingElem(self.ring, _reduce(self.repr * other.repr, self.ring))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not self.repr.terms

    def __bool__(self):
        return bool(self.repr.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = self._other(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring == other.ring and self.repr == other.repr

    def __hash__(self):
        return hash((self.ring, self.repr))

    def __repr__(self):
        return f"RingElem({self.repr!s}, m={self.ring.m}, n={self.ring.n})"

    def __str__(self):
        return format_poly(self.repr)


def ring_sum(items: Iterable[RingElem], R: HypersurfaceRing) -> RingElem:
    total = Poly.zero()
    for it in items:
        total = total + it.repr
    return RingElem(R, total)


def basis_monomials(degree_bound: int) -> list:
    """Normal-form monomials (z-degree <= 1) of total degree <= ``degree_bound``, grevlex-descending."""
    out = [(a, d - a - c, c) for d in range(degree_bound + 1) for c in (0, 1)
           for a in range(d - c + 1)]
    out.sort(key=grevlex_key, reverse=True)
    return out
