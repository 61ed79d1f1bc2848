"""Term trees produced by the parser.

Terms are immutable and hashable so that structurally equal subterms can
share work during clausification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

REAL = "Real"
BOOL = "Bool"

BOOL_OPS = frozenset({"and", "or", "not", "=>", "xor"})
ARITH_OPS = frozenset({"+", "-", "*", "/"})
COMPARISONS = frozenset({"<", "<=", ">", ">=", "="})


@dataclass(frozen=True)
class Const:
    value: Fraction
    sort = REAL


@dataclass(frozen=True)
class BoolConst:
    value: bool
    sort = BOOL


@dataclass(frozen=True)
class Var:
    name: str
    sort: str


@dataclass(frozen=True)
class App:
    op: str
    args: tuple
    sort: str = field(default=BOOL, compare=False)

    def __hash__(self) -> int:
        # Deep trees hash often during clausification; cache it.
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.op, self.args))
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True)
class Let:
    bindings: tuple  # ((name, Term), ...)
    body: "Term"

    @property
    def sort(self) -> str:
        return self.body.sort


Term = Union[Const, BoolConst, Var, App, Let]


def mk_and(*args) -> App:
    return App("and", tuple(args), BOOL)


def mk_or(*args) -> App:
    return App("or", tuple(args), BOOL)


def mk_not(t) -> App:
    return App("not", (t,), BOOL)


def free_vars(t: Term, bound: frozenset = frozenset()) -> dict[str, str]:
    """Declared variables occurring free in ``t``, mapped to their sort."""
    out: dict[str, str] = {}
    stack = [(t, bound)]
    while stack:
        node, bnd = stack.pop()
        if isinstance(node, Var):
            if node.name not in bnd:
                out[node.name] = node.sort
        elif isinstance(node, App):
            stack.extend((a, bnd) for a in node.args)
        elif isinstance(node, Let):
            stack.extend((v, bnd) for _, v in node.bindings)
            stack.append((node.body, bnd | {n for n, _ in node.bindings}))
    return out
