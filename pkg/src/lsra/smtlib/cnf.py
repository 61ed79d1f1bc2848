"""Clausification.

Formulas are put in negation normal form with negated atoms folded into
flipped relations, then encoded with a polarity-aware (Plaisted-Greenbaum)
structural transformation. Formulas that already are conjunctions of
disjunctions of literals are passed through without auxiliary variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .desugar import AtomLit, BoolLit, desugar, normalize_atom
from .parser import Script
from .terms import BOOL, REAL, App, BoolConst, Var, free_vars, mk_and

AUX_PREFIX = "_aux!"


@dataclass
class ClausalFormula:
    real_vars: list[str]
    bool_vars: list[str]  # declared Booleans first, then auxiliaries
    clauses: list[tuple]
    original: list = field(default_factory=list)
    aux_vars: list[str] = field(default_factory=list)
    trivially_false: bool = False

    @property
    def declared_bool_vars(self) -> list[str]:
        aux = set(self.aux_vars)
        return [p for p in self.bool_vars if p not in aux]

    def literal_count(self) -> int:
        return sum(len(c) for c in self.clauses)


# NNF nodes: ("and", children) / ("or", children) / literal / True / False


def _nnf(t, positive: bool, memo: dict):
    key = (t, positive)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(t, BoolConst):
        out = t.value == positive
    elif isinstance(t, Var):
        out = BoolLit(t.name, not positive)
    elif isinstance(t, App) and t.op == "not":
        out = _nnf(t.args[0], not positive, memo)
    elif isinstance(t, App) and t.op in ("and", "or"):
        is_and = (t.op == "and") == positive
        kids = [_nnf(a, positive, memo) for a in t.args]
        out = _junction("and" if is_and else "or", kids)
    elif isinstance(t, App):
        atom = normalize_atom(t)
        if isinstance(atom, BoolConst):
            out = atom.value == positive
        else:
            out = atom if positive else atom.negate()
    else:
        raise TypeError(f"cannot clausify {t!r}")
    memo[key] = out
    return out


def _junction(op: str, kids: list):
    absorbing = op == "or"  # True absorbs an or, False absorbs an and
    flat = []
    seen = set()
    for k in kids:
        if k is absorbing:
            return absorbing
        if k is (not absorbing):
            continue
        parts = k[1] if isinstance(k, tuple) and k[0] == op else (k,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                flat.append(p)
    if not flat:
        return not absorbing
    if len(flat) == 1:
        return flat[0]
    return (op, tuple(flat))


def _is_literal(node) -> bool:
    return isinstance(node, (BoolLit, AtomLit))


class _Encoder:
    def __init__(self, taken: set[str]):
        self.taken = taken
        self.aux: list[str] = []
        self.aux_of: dict = {}
        self.clauses: list[tuple] = []

    def fresh(self) -> str:
        i = len(self.aux)
        while f"{AUX_PREFIX}{i}" in self.taken:
            i += 1
        name = f"{AUX_PREFIX}{i}"
        self.taken.add(name)
        self.aux.append(name)
        return name

    def literal_for(self, node):
        """A literal that implies ``node`` (only positive polarity is needed in NNF)."""
        if _is_literal(node):
            return node
        hit = self.aux_of.get(node)
        if hit is not None:
            return hit
        a = BoolLit(self.fresh())
        self.aux_of[node] = a
        op, kids = node
        if op == "and":
            for k in kids:
                self.clauses.append((a.negate(), self.literal_for(k)))
        else:
            self.clauses.append((a.negate(),) + tuple(self.literal_for(k) for k in kids))
        return a

    def top(self, node) -> None:
        if _is_literal(node):
            self.clauses.append((node,))
        elif node[0] == "or":
            self.clauses.append(tuple(self.literal_for(k) for k in node[1]))
        else:
            for k in node[1]:
                self.top(k)


def cnf_transform(t, real_vars: list[str] | None = None, bool_vars: list[str] | None = None) -> ClausalFormula:
    """Clausify a desugared Boolean term into an equisatisfiable clause set.

    ``real_vars``/``bool_vars`` fix the variable order; by default the free
    variables of ``t`` are used in sorted order.
    """
    fv = free_vars(t)
    if real_vars is None:
        real_vars = sorted(n for n, s in fv.items() if s == REAL)
    if bool_vars is None:
        bool_vars = sorted(n for n, s in fv.items() if s == BOOL)
    nnf = _nnf(t, True, {})
    enc = _Encoder(set(real_vars) | set(bool_vars))
    trivially_false = False
    if nnf is False:
        trivially_false = True
    elif nnf is not True:
        enc.top(nnf)
    return ClausalFormula(
        real_vars=list(real_vars),
        bool_vars=list(bool_vars) + enc.aux,
        clauses=enc.clauses,
        aux_vars=list(enc.aux),
        trivially_false=trivially_false,
    )


def clausify(script: Script) -> ClausalFormula:
    """Desugar, normalize and clausify all assertions of ``script``."""
    assertions = script.assertions
    if not assertions:
        conj = BoolConst(True)
    elif len(assertions) == 1:
        conj = assertions[0]
    else:
        conj = mk_and(*assertions)
    formula = cnf_transform(desugar(conj), script.real_vars(), script.bool_vars())
    formula.original = list(assertions)
    return formula
