"""Incremental search state over a compiled clause set.

Every literal belongs to exactly one clause. For atom literals the state
caches the current polynomial value, so moving one real variable only
touches the clauses in that variable's occurrence list. All numbers are
kept as :data:`~lsra.arith.Q` rationals; :meth:`SearchState.assignment`
converts back to ``Fraction``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from ..arith import Q, Bound, Relation, SatDomain, solve_relation
from ..smtlib.cnf import ClausalFormula
from ..smtlib.desugar import AtomLit
from .config import SearchConfig
from .intervals import ClauseDomain

_ZERO = Q(0)
_MIRROR = {r: r.mirror() for r in Relation}


class IndexedSet:
    """Set of ints with O(1) add/remove and a deterministic item order."""

    __slots__ = ("items", "_pos")

    def __init__(self):
        self.items: list[int] = []
        self._pos: dict[int, int] = {}

    def add(self, x: int) -> None:
        if x not in self._pos:
            self._pos[x] = len(self.items)
            self.items.append(x)

    def remove(self, x: int) -> None:
        i = self._pos.pop(x)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self._pos[last] = i

    def __contains__(self, x: int) -> bool:
        return x in self._pos

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


class CompiledFormula:
    """Integer-indexed view of a :class:`ClausalFormula`."""

    def __init__(self, formula: ClausalFormula):
        self.source = formula
        self.real_names = list(formula.real_vars)
        self.bool_names = list(formula.bool_vars)
        self.real_index = {n: i for i, n in enumerate(self.real_names)}
        self.bool_index = {n: i for i, n in enumerate(self.bool_names)}
        nr, nb = len(self.real_names), len(self.bool_names)

        self.clauses: list[list[int]] = []
        self.lit_clause: list[int] = []
        self.lit_is_atom: list[bool] = []
        self.lit_bvar: list[int] = []
        self.lit_neg: list[bool] = []
        self.lit_rel: list[Relation | None] = []
        self.lit_k: list[Fraction] = []
        self.lit_monos: list[list[tuple[Fraction, tuple[int, ...]]]] = []
        # lit -> {x: [(coeff, other vars of the monomial)]}
        self.lit_cof: list[dict[int, list[tuple[Fraction, tuple[int, ...]]]]] = []
        self.real_occ: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(nr)]
        self.bool_occ: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(nb)]
        self.clause_rvars: list[tuple[int, ...]] = []
        self.clause_bvars: list[tuple[int, ...]] = []
        self.clause_nreal: list[int] = []
        self.clause_nbool: list[int] = []

        for ci, clause in enumerate(formula.clauses):
            lits = []
            rocc: dict[int, list[int]] = {}
            bocc: dict[int, list[int]] = {}
            nreal = 0
            for lit in clause:
                li = len(self.lit_clause)
                lits.append(li)
                self.lit_clause.append(ci)
                if isinstance(lit, AtomLit):
                    nreal += 1
                    monos = [
                        (Q(coeff), tuple(sorted(self.real_index[v] for v in mono)))
                        for mono, coeff in lit.poly.items()
                    ]
                    cof: dict[int, list] = {}
                    for coeff, mono in monos:
                        for x in mono:
                            cof.setdefault(x, []).append((coeff, tuple(y for y in mono if y != x)))
                    for x in cof:
                        rocc.setdefault(x, []).append(li)
                    self.lit_is_atom.append(True)
                    self.lit_bvar.append(-1)
                    self.lit_neg.append(False)
                    self.lit_rel.append(lit.rel)
                    self.lit_k.append(Q(lit.k))
                    self.lit_monos.append(monos)
                    self.lit_cof.append(cof)
                else:
                    p = self.bool_index[lit.var]
                    bocc.setdefault(p, []).append(li)
                    self.lit_is_atom.append(False)
                    self.lit_bvar.append(p)
                    self.lit_neg.append(lit.negated)
                    self.lit_rel.append(None)
                    self.lit_k.append(_ZERO)
                    self.lit_monos.append([])
                    self.lit_cof.append({})
            self.clauses.append(lits)
            for x in sorted(rocc):
                self.real_occ[x].append((ci, tuple(rocc[x])))
            for p in sorted(bocc):
                self.bool_occ[p].append((ci, tuple(bocc[p])))
            self.clause_rvars.append(tuple(sorted(rocc)))
            self.clause_bvars.append(tuple(sorted(bocc)))
            self.clause_nreal.append(nreal)
            self.clause_nbool.append(len(clause) - nreal)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


class Effect(NamedTuple):
    """How moving one real variable can change one clause.

    Only clauses with no true literal independent of the variable get an
    effect. ``domain`` is the union of the satisfying domains of the
    clause's literals that mention the variable.
    """

    clause: int
    sat: bool
    domain: ClauseDomain


def init_assignment(
    formula: CompiledFormula,
    cfg: SearchConfig,
    rng: random.Random | None = None,
    policy: str | None = None,
):
    """Initial values: zeros and ``True`` by default, or seeded random values."""
    nr, nb = len(formula.real_names), len(formula.bool_names)
    if (policy or cfg.init) == "zero":
        return [_ZERO] * nr, [True] * nb
    rng = rng or random.Random(cfg.seed)
    reals = [Q(rng.randint(-10, 10)) for _ in range(nr)]
    bools = [rng.random() < 0.5 for _ in range(nb)]
    return reals, bools


class SearchState:
    def __init__(self, formula: CompiledFormula, real_vals, bool_vals):
        self.f = formula
        self.real_vals: list = [Q(v) for v in real_vals]
        self.bool_vals: list[bool] = list(bool_vals)
        self.weights: list[int] = [1] * formula.num_clauses
        self.last_flip: list[int] = [0] * len(bool_vals)
        self.reset_values(real_vals, bool_vals)

    # -- full evaluation -----------------------------------------------------

    def _lit_value(self, li: int):
        vals = self.real_vals
        total = _ZERO
        for coeff, mono in self.f.lit_monos[li]:
            term = coeff
            for v in mono:
                term *= vals[v]
            total += term
        return total

    def _lit_truth(self, li: int) -> bool:
        f = self.f
        if f.lit_is_atom[li]:
            return f.lit_rel[li].holds(self.lit_val[li], f.lit_k[li])
        return self.bool_vals[f.lit_bvar[li]] != f.lit_neg[li]

    def reset_values(self, real_vals, bool_vals) -> None:
        f = self.f
        self.real_vals = [Q(v) for v in real_vals]
        self.bool_vals = list(bool_vals)
        n = len(f.lit_clause)
        self.lit_val = [self._lit_value(li) if f.lit_is_atom[li] else _ZERO for li in range(n)]
        self.lit_true = [self._lit_truth(li) for li in range(n)]
        self.sat_count = [sum(self.lit_true[li] for li in lits) for lits in f.clauses]
        self.falsified = IndexedSet()
        self.cost = 0
        for ci, cnt in enumerate(self.sat_count):
            if cnt == 0:
                self.falsified.add(ci)
                self.cost += self.weights[ci]

    def reset_weights(self) -> None:
        self.weights = [1] * self.f.num_clauses
        self.cost = sum(self.weights[c] for c in self.falsified)

    def audit(self) -> None:
        """Check every cached quantity against a from-scratch recount."""
        f = self.f
        for li in range(len(f.lit_clause)):
            if f.lit_is_atom[li]:
                assert self.lit_val[li] == self._lit_value(li), f"stale value for literal {li}"
            assert self.lit_true[li] == self._lit_truth(li), f"stale truth for literal {li}"
        for ci, lits in enumerate(f.clauses):
            assert self.sat_count[ci] == sum(self._lit_truth(li) for li in lits), f"clause {ci} miscounted"
            assert (self.sat_count[ci] == 0) == (ci in self.falsified)
        assert self.cost == sum(self.weights[c] for c in self.falsified)
        assert min(self.weights, default=1) >= 1

    # -- queries ---------------------------------------------------------------

    @property
    def weighted_cost(self) -> int:
        return self.cost

    def coefficient(self, li: int, x: int):
        """Coefficient of ``x`` in literal ``li`` once all other variables are fixed."""
        vals = self.real_vals
        a = _ZERO
        for coeff, others in self.f.lit_cof[li][x]:
            for y in others:
                coeff = coeff * vals[y]
            a += coeff
        return a

    def literal_domain(self, li: int, x: int) -> SatDomain:
        a = self.coefficient(li, x)
        b = self.lit_val[li] - a * self.real_vals[x]
        return solve_relation(a, b, self.f.lit_rel[li], self.f.lit_k[li])

    def clause_union(self, x: int, lits, falsified: bool) -> ClauseDomain | None:
        """Union of the satisfying domains of ``lits`` for ``x``.

        Same result as :func:`clause_domain` over :meth:`literal_domain`,
        computed without building the per-literal domain objects.
        """
        f, vals = self.f, self.real_vals
        cur = vals[x]
        ub_v = lb_v = neq = None
        ub_s = lb_s = False
        points = []
        for li in lits:
            a = _ZERO
            for coeff, others in f.lit_cof[li][x]:
                for y in others:
                    coeff = coeff * vals[y]
                a += coeff
            rel, k = f.lit_rel[li], f.lit_k[li]
            if not a:
                if rel.holds(self.lit_val[li], k):
                    if falsified:
                        raise ValueError("literal is already satisfied; clause is not falsified")
                    return None
                continue
            t = (k - self.lit_val[li]) / a + cur
            if a < 0:
                rel = _MIRROR[rel]
            if rel is Relation.LE or rel is Relation.LT:
                strict = rel is Relation.LT
                if ub_v is None or t > ub_v or (t == ub_v and ub_s and not strict):
                    ub_v, ub_s = t, strict
            elif rel is Relation.GE or rel is Relation.GT:
                strict = rel is Relation.GT
                if lb_v is None or t < lb_v or (t == lb_v and lb_s and not strict):
                    lb_v, lb_s = t, strict
            elif rel is Relation.EQ:
                points.append(t)
            else:
                neq = t
        ub = None if ub_v is None else Bound(ub_v, ub_s)
        lb = None if lb_v is None else Bound(lb_v, lb_s)
        if falsified and ub is not None and lb is not None:
            assert ub_v < lb_v or (ub_v == lb_v and ub_s and lb_s), (
                f"upper bound {ub} overlaps lower bound {lb} in a falsified clause"
            )
        return ClauseDomain(ub, lb, tuple(sorted(set(points))), neq)

    def var_effects(self, x: int) -> list[Effect]:
        out = []
        sat_count, lit_true = self.sat_count, self.lit_true
        for ci, lits in self.f.real_occ[x]:
            true_here = 0
            for li in lits:
                true_here += lit_true[li]
            if sat_count[ci] > true_here:
                continue
            sat = true_here > 0
            dom = self.clause_union(x, lits, not sat)
            if dom is not None:
                out.append(Effect(ci, sat, dom))
        return out

    def eval_real(self, x: int, v, effects: list[Effect] | None = None) -> tuple[int, int]:
        """``(make, score)`` of assigning ``v`` to real variable ``x``."""
        if v == self.real_vals[x]:
            return 0, 0
        if effects is None:
            effects = self.var_effects(x)
        w = self.weights
        make = score = 0
        for ci, sat, d in effects:
            # inlined ClauseDomain.contains
            neq = d.neq_point
            if neq is not None and v != neq:
                after = True
            else:
                ub, lb = d.ub, d.lb
                after = (
                    (ub is not None and (v < ub.value or (v == ub.value and not ub.strict)))
                    or (lb is not None and (v > lb.value or (v == lb.value and not lb.strict)))
                    or v in d.eq_points
                )
            if after:
                if not sat:
                    make += 1
                    score += w[ci]
            elif sat:
                score -= w[ci]
        return make, score

    def eval_flip(self, p: int) -> tuple[int, int]:
        """``(make, score)`` of flipping Boolean variable ``p``."""
        w = self.weights
        make = score = 0
        for ci, lits in self.f.bool_occ[p]:
            true_here = 0
            for li in lits:
                true_here += self.lit_true[li]
            before = self.sat_count[ci]
            after = before - true_here + (len(lits) - true_here)
            if before == 0 and after > 0:
                make += 1
                score += w[ci]
            elif before > 0 and after == 0:
                score -= w[ci]
        return make, score

    # -- updates ---------------------------------------------------------------

    def _set_truth(self, li: int, value: bool) -> None:
        self.lit_true[li] = value
        ci = self.f.lit_clause[li]
        if value:
            self.sat_count[ci] += 1
            if self.sat_count[ci] == 1:
                self.falsified.remove(ci)
                self.cost -= self.weights[ci]
        else:
            self.sat_count[ci] -= 1
            if self.sat_count[ci] == 0:
                self.falsified.add(ci)
                self.cost += self.weights[ci]

    def assign_real(self, x: int, v) -> None:
        f = self.f
        v = Q(v)
        delta = v - self.real_vals[x]
        if delta == 0:
            return
        for _, lits in f.real_occ[x]:
            for li in lits:
                a = self.coefficient(li, x)
                if a == 0:
                    continue
                val = self.lit_val[li] + a * delta
                self.lit_val[li] = val
                truth = f.lit_rel[li].holds(val, f.lit_k[li])
                if truth != self.lit_true[li]:
                    self._set_truth(li, truth)
        self.real_vals[x] = Q(v)

    def flip(self, p: int, step: int = 0) -> None:
        self.bool_vals[p] = not self.bool_vals[p]
        for _, lits in self.f.bool_occ[p]:
            for li in lits:
                self._set_truth(li, not self.lit_true[li])
        self.last_flip[p] = step

    def bump_weights(self, clauses, delta: int) -> None:
        for ci in clauses:
            self.weights[ci] += delta
            if ci in self.falsified:
                self.cost += delta

    # -- views -----------------------------------------------------------------

    def real_vars_in_falsified(self) -> list[int]:
        seen = set()
        for ci in self.falsified:
            seen.update(self.f.clause_rvars[ci])
        return sorted(seen)

    def bool_vars_in_falsified(self) -> list[int]:
        seen = set()
        for ci in self.falsified:
            seen.update(self.f.clause_bvars[ci])
        return sorted(seen)

    def literal_proportions(self) -> tuple[float, float]:
        """``(P_r, P_b)``: shares of real/Boolean literals in falsified clauses."""
        nr = nb = 0
        for ci in self.falsified:
            nr += self.f.clause_nreal[ci]
            nb += self.f.clause_nbool[ci]
        total = nr + nb
        if total == 0:
            return 0.0, 0.0
        return nr / total, nb / total

    def assignment(self) -> dict[str, object]:
        out: dict[str, object] = {}
        for i, n in enumerate(self.f.real_names):
            out[n] = Fraction(self.real_vals[i])
        for i, n in enumerate(self.f.bool_names):
            out[n] = self.bool_vals[i]
        return out


@dataclass(frozen=True)
class RealOp:
    var: int
    value: Fraction
    make: int = 0
    score: int = 0


@dataclass(frozen=True)
class BoolFlip:
    var: int
    score: int = 0
    last_flip: int = 0


def make_of(op, state: SearchState) -> int:
    """Number of currently falsified clauses that ``op`` would satisfy."""
    if isinstance(op, RealOp):
        return state.eval_real(op.var, op.value)[0]
    return state.eval_flip(op.var)[0]


def score_of(op, state: SearchState) -> int:
    """Weighted cost before ``op`` minus weighted cost after it."""
    if isinstance(op, RealOp):
        return state.eval_real(op.var, op.value)[1]
    return state.eval_flip(op.var)[1]


def weighted_cost(state: SearchState) -> int:
    return state.cost
