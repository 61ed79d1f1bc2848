"""Desugaring of parsed terms and normalization of arithmetic atoms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Union

from ..arith import Polynomial, Relation
from ..errors import DivisionByNonConstant, DivisionByZero, UnsupportedFeature
from .terms import BOOL, REAL, App, BoolConst, Const, Let, Var, mk_and, mk_not, mk_or

_REL = {
    "<=": Relation.LE,
    "<": Relation.LT,
    ">=": Relation.GE,
    ">": Relation.GT,
    "=": Relation.EQ,
}


@dataclass(frozen=True)
class BoolLit:
    var: str
    negated: bool = False

    def negate(self) -> BoolLit:
        return BoolLit(self.var, not self.negated)

    def evaluate(self, alpha) -> bool:
        return bool(alpha[self.var]) != self.negated

    def __str__(self) -> str:
        return f"(not {self.var})" if self.negated else self.var


@dataclass(frozen=True)
class AtomLit:
    """``poly rel k`` where ``poly`` has no constant monomial."""

    poly: Polynomial
    rel: Relation
    k: Fraction

    def negate(self) -> AtomLit:
        return AtomLit(self.poly, self.rel.negate(), self.k)

    def evaluate(self, alpha) -> bool:
        return self.rel.holds(self.poly.eval(alpha), self.k)

    def variables(self) -> list[str]:
        return self.poly.variables()

    def __str__(self) -> str:
        return f"({self.poly} {self.rel.symbol} {self.k})"


Literal = Union[BoolLit, AtomLit]


def desugar(t, env: dict | None = None):
    """Eliminate ``let``, ``ite``, ``distinct``, ``=>``, ``xor``, Boolean ``=``,
    chained comparisons and division, leaving ``and``/``or``/``not`` over
    Boolean variables, constants and binary comparisons of flattened
    ``+``/``*`` arithmetic terms.
    """
    return _Desugarer().run(t, env or {})


class _Desugarer:
    def __init__(self):
        self.memo: dict = {}

    def run(self, t, env: dict):
        if isinstance(t, (Const, BoolConst)):
            return t
        if isinstance(t, Var):
            return env.get(t.name, t)
        if isinstance(t, Let):
            inner = dict(env)
            for name, value in t.bindings:
                inner[name] = self.run(value, env)
            return self.run(t.body, inner)
        if not env:
            cached = self.memo.get(t)
            if cached is not None:
                return cached
        out = self._app(t, [self.run(a, env) for a in t.args])
        if not env:
            self.memo[t] = out
        return out

    def _app(self, t: App, args: list):
        op = t.op
        if op in ("and", "or"):
            return App(op, tuple(args), BOOL)
        if op == "not":
            return mk_not(args[0])
        if op == "=>":
            # right associative
            out = args[-1]
            for a in reversed(args[:-1]):
                out = mk_or(mk_not(a), out)
            return out
        if op == "xor":
            out = args[0]
            for a in args[1:]:
                out = mk_or(mk_and(out, mk_not(a)), mk_and(mk_not(out), a))
            return out
        if op == "ite":
            if t.sort != BOOL:
                raise UnsupportedFeature("real-ite")
            c, a, b = args
            return mk_or(mk_and(c, a), mk_and(mk_not(c), b))
        if op == "distinct":
            return _conj([mk_not(_equal(a, b)) for a, b in combinations(args, 2)])
        if op == "=":
            return _conj([_equal(a, b) for a, b in zip(args, args[1:])])
        if op in _REL:
            return _conj([App(op, (a, b), BOOL) for a, b in zip(args, args[1:])])
        if op == "+":
            return _flatten("+", args)
        if op == "*":
            return _flatten("*", args)
        if op == "-":
            if len(args) == 1:
                return _flatten("*", [Const(Fraction(-1)), args[0]])
            rest = [_flatten("*", [Const(Fraction(-1)), a]) for a in args[1:]]
            return _flatten("+", [args[0]] + rest)
        if op == "/":
            out = args[0]
            for d in args[1:]:
                p = to_polynomial(d)
                if not p.is_constant():
                    raise DivisionByNonConstant(f"division by non-constant term {p}")
                c = p.constant_term()
                if c == 0:
                    raise DivisionByZero("division by zero")
                out = _flatten("*", [out, Const(1 / c)])
            return out
        raise UnsupportedFeature(op)


def _equal(a, b):
    if a.sort == BOOL:
        return mk_or(mk_and(a, b), mk_and(mk_not(a), mk_not(b)))
    return App("=", (a, b), BOOL)


def _conj(parts: list):
    return parts[0] if len(parts) == 1 else mk_and(*parts)


def _flatten(op: str, args: list):
    flat = []
    for a in args:
        if isinstance(a, App) and a.op == op:
            flat.extend(a.args)
        else:
            flat.append(a)
    consts = [a.value for a in flat if isinstance(a, Const)]
    others = [a for a in flat if not isinstance(a, Const)]
    if op == "+":
        c = sum(consts, Fraction(0))
        if c != 0 or not others:
            others.append(Const(c))
    else:
        c = Fraction(1)
        for v in consts:
            c *= v
        if c == 0 or not others:
            return Const(c)
        if c != 1:
            others.insert(0, Const(c))
    if len(others) == 1:
        return others[0]
    return App(op, tuple(others), REAL)


def to_polynomial(t) -> Polynomial:
    """Expand a desugared arithmetic term into a polynomial over variable names.

    Raises :class:`~lsra.errors.NonMultilinear` if a product repeats a variable.
    """
    if isinstance(t, Const):
        return Polynomial.constant(t.value)
    if isinstance(t, Var):
        return Polynomial.variable(t.name)
    if isinstance(t, App):
        parts = [to_polynomial(a) for a in t.args]
        if t.op == "+":
            out = Polynomial()
            for p in parts:
                out = out + p
            return out
        if t.op == "*":
            out = Polynomial.constant(1)
            for p in parts:
                out = out * p
            return out
        if t.op == "-":
            if len(parts) == 1:
                return -parts[0]
            out = parts[0]
            for p in parts[1:]:
                out = out - p
            return out
        if t.op == "/":
            return to_polynomial(desugar(t))
    raise UnsupportedFeature(f"non-arithmetic term {t!r}")


def normalize_atom(t) -> AtomLit | BoolConst:
    """Turn a binary comparison into ``sum(a_i * m_i) rel k``.

    An atom whose polynomial cancels to zero is folded to its truth value.
    """
    if not (isinstance(t, App) and t.op in _REL and len(t.args) == 2):
        raise ValueError(f"not a binary comparison: {t!r}")
    p = to_polynomial(t.args[0]) - to_polynomial(t.args[1])
    k = -p.constant_term()
    lhs = p.without_constant()
    rel = _REL[t.op]
    if lhs.is_zero():
        return BoolConst(rel.holds(0, k))
    return AtomLit(lhs, rel, k)
