"""Exact rational arithmetic over multilinear polynomials.

Everything here is value-semantic. Rationals are :class:`fractions.Fraction`
instances, which are always kept in lowest terms with a positive
denominator. The search engine works on :data:`Q` (``gmpy2.mpq``), which
compares and hashes equal to ``Fraction`` but is an order of magnitude
faster; the helpers below accept either.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Mapping, Tuple, Union

import gmpy2

from .errors import NonMultilinear

Q = gmpy2.mpq
Rational = Fraction
Monomial = Tuple[Hashable, ...]
Number = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def denominator_of(v: Number) -> int:
    return Fraction(v).denominator


def mediant(lo: Fraction, hi: Fraction) -> Fraction:
    """Return ``(a + c) / (b + d)`` for ``lo = a/b < hi = c/d``.

    The result lies strictly between ``lo`` and ``hi``.
    """
    cls = Q if isinstance(lo, Q) or isinstance(hi, Q) else Fraction
    lo, hi = cls(lo), cls(hi)
    if not lo < hi:
        raise ValueError(f"mediant needs lo < hi, got {lo} >= {hi}")
    return cls(lo.numerator + hi.numerator, lo.denominator + hi.denominator)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    common = set(m1).intersection(m2)
    if common:
        raise NonMultilinear(min(common))
    return tuple(sorted(m1 + m2))


class Polynomial:
    """A multilinear polynomial stored as ``{monomial: coefficient}``.

    Monomials are strictly sorted tuples of variable keys; ``()`` is the
    constant monomial. Zero coefficients are never stored and iteration
    is in sorted monomial order (degree first, then lexicographic).
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | Iterable[tuple[Monomial, Number]] = ()):
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            mono = tuple(mono)
            if len(set(mono)) != len(mono):
                seen = set()
                for v in mono:
                    if v in seen:
                        raise NonMultilinear(v)
                    seen.add(v)
            mono = tuple(sorted(mono))
            acc[mono] = acc.get(mono, ZERO) + Fraction(coeff)
        self._terms = {m: acc[m] for m in sorted(acc, key=_mono_key) if acc[m] != 0}
        self._hash = None

    @classmethod
    def constant(cls, c: Number) -> Polynomial:
        return cls({(): c})

    @classmethod
    def variable(cls, x: Hashable) -> Polynomial:
        return cls({(x,): 1})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), ZERO)

    def without_constant(self) -> Polynomial:
        return Polynomial({m: c for m, c in self._terms.items() if m != ()})

    def variables(self) -> list:
        return sorted({v for m in self._terms for v in m})

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_linear(self) -> bool:
        return self.degree() <= 1

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Polynomial | Number) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return Polynomial(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Polynomial | Number) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> Polynomial:
        return Polynomial.constant(other) - self

    def scale(self, c: Number) -> Polynomial:
        return Polynomial({m: coeff * c for m, coeff in self._terms.items()})

    def __mul__(self, other: Polynomial | Number) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scale(other)
        out = []
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                out.append((_mono_mul(m1, m2), c1 * c2))
        return Polynomial(out)

    __rmul__ = __mul__

    # -- evaluation ---------------------------------------------------------

    def eval(self, alpha: Mapping[Hashable, Number]) -> Fraction:
        return poly_eval(self, alpha)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self._terms.items():
            if m == ():
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(map(str, m)))
            else:
                parts.append(f"{c}*" + "*".join(map(str, m)))
        return " + ".join(parts)


def _mono_key(m: Monomial):
    return (len(m), m)


def poly_eval(p: Polynomial, alpha: Mapping[Hashable, Number]) -> Fraction:
    """Evaluate ``p`` exactly. Every variable of ``p`` must be assigned."""
    total = ZERO
    for mono, coeff in p.items():
        term = coeff
        for v in mono:
            try:
                term = term * alpha[v]
            except KeyError:
                raise KeyError(f"variable {v!r} is unassigned") from None
        total += term
    return Fraction(total)


def linearize(p: Polynomial, x: Hashable, alpha: Mapping[Hashable, Number]) -> tuple[Fraction, Fraction]:
    """Restrict ``p`` to an affine function ``a*x + b`` of the single variable ``x``.

    All other variables of ``p`` take their values from ``alpha``; the
    value of ``x`` in ``alpha`` (if any) is ignored.
    """
    a = ZERO
    b = ZERO
    for mono, coeff in p.items():
        term = coeff
        has_x = False
        for v in mono:
            if v == x:
                has_x = True
            else:
                term = term * alpha[v]
        if has_x:
            a += term
        else:
            b += term
    return Fraction(a), Fraction(b)


class Relation(enum.Enum):
    EQ = "="
    NEQ = "!="
    LE = "<="
    LT = "<"
    GE = ">="
    GT = ">"

    def negate(self) -> Relation:
        return _NEGATION[self]

    def mirror(self) -> Relation:
        """The relation obtained by swapping both sides (or multiplying by -1)."""
        return _MIRROR[self]

    def holds(self, lhs, rhs) -> bool:
        if self is Relation.LE:
            return lhs <= rhs
        if self is Relation.LT:
            return lhs < rhs
        if self is Relation.GE:
            return lhs >= rhs
        if self is Relation.GT:
            return lhs > rhs
        if self is Relation.EQ:
            return lhs == rhs
        return lhs != rhs

    @property
    def symbol(self) -> str:
        return self.value


_NEGATION = {
    Relation.EQ: Relation.NEQ,
    Relation.NEQ: Relation.EQ,
    Relation.LE: Relation.GT,
    Relation.GT: Relation.LE,
    Relation.LT: Relation.GE,
    Relation.GE: Relation.LT,
}

_MIRROR = {
    Relation.EQ: Relation.EQ,
    Relation.NEQ: Relation.NEQ,
    Relation.LE: Relation.GE,
    Relation.GE: Relation.LE,
    Relation.LT: Relation.GT,
    Relation.GT: Relation.LT,
}


@dataclass(frozen=True)
class Bound:
    """A half-line endpoint. ``strict`` excludes ``value`` itself."""

    value: Fraction
    strict: bool = False


# Satisfying domains of a single literal, seen as a function of one variable.


class SatDomain:
    __slots__ = ()

    def contains(self, v) -> bool:
        raise NotImplementedError


class _Empty(SatDomain):
    __slots__ = ()

    def contains(self, v) -> bool:
        return False

    def __repr__(self) -> str:
        return "Empty"


class _Full(SatDomain):
    __slots__ = ()

    def contains(self, v) -> bool:
        return True

    def __repr__(self) -> str:
        return "Full"


Empty = _Empty()
Full = _Full()


@dataclass(frozen=True)
class UpperHalfLine(SatDomain):
    """``(-inf, u]``, or ``(-inf, u)`` when the bound is strict."""

    bound: Bound

    def contains(self, v) -> bool:
        u = self.bound.value
        return v < u if self.bound.strict else v <= u


@dataclass(frozen=True)
class LowerHalfLine(SatDomain):
    """``[l, +inf)``, or ``(l, +inf)`` when the bound is strict."""

    bound: Bound

    def contains(self, v) -> bool:
        low = self.bound.value
        return v > low if self.bound.strict else v >= low


@dataclass(frozen=True)
class Point(SatDomain):
    value: Fraction

    def contains(self, v) -> bool:
        return v == self.value


@dataclass(frozen=True)
class ComplementPoint(SatDomain):
    value: Fraction

    def contains(self, v) -> bool:
        return v != self.value


def solve_relation(a: Number, b: Number, rel: Relation, k: Number) -> SatDomain:
    """Solution set of ``a*x + b rel k`` for the unknown ``x``."""
    if a == 0:
        return Full if rel.holds(b, k) else Empty
    if not isinstance(a, (Fraction, Q)):
        a = Fraction(a)
    t = (k - b) / a
    if a < 0:
        rel = rel.mirror()
    if rel is Relation.LE:
        return UpperHalfLine(Bound(t, False))
    if rel is Relation.LT:
        return UpperHalfLine(Bound(t, True))
    if rel is Relation.GE:
        return LowerHalfLine(Bound(t, False))
    if rel is Relation.GT:
        return LowerHalfLine(Bound(t, True))
    if rel is Relation.EQ:
        return Point(t)
    return ComplementPoint(t)
