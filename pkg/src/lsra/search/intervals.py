"""Equi-make interval partitions of a real variable's value line.

For a variable ``x`` every falsified clause contributes at most one upper
bound (the largest upper half-line of its literals) and one lower bound
(the smallest lower half-line). Sorting these bounds splits the real line
into intervals on which assigning ``x`` satisfies a constant number of
falsified clauses.

Bounds compare as points of the line extended with infinitesimals: the
strict upper bound ``u`` (the half-line ``(-inf, u)``) sits just below the
non-strict one, and the strict lower bound ``l`` just above its
non-strict counterpart.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..arith import Q, Bound, ComplementPoint, Full, LowerHalfLine, Point, SatDomain, UpperHalfLine, mediant


def _ub_key(b: Bound):
    return (b.value, 0 if b.strict else 1)


def _lb_key(b: Bound):
    return (b.value, 1 if b.strict else 0)


@dataclass(frozen=True)
class ClauseDomain:
    """Summary of a falsified clause's satisfying domain for one variable."""

    ub: Bound | None = None
    lb: Bound | None = None
    eq_points: tuple[Fraction, ...] = ()
    neq_point: Fraction | None = None

    @property
    def has_neq(self) -> bool:
        return self.neq_point is not None

    def contains(self, v) -> bool:
        if self.neq_point is not None and v != self.neq_point:
            return True
        ub = self.ub
        if ub is not None and (v < ub.value or (v == ub.value and not ub.strict)):
            return True
        lb = self.lb
        if lb is not None and (v > lb.value or (v == lb.value and not lb.strict)):
            return True
        return v in self.eq_points


def clause_domain(domains, falsified: bool = True) -> ClauseDomain | None:
    """Union of literal satisfying domains, summarized as a :class:`ClauseDomain`.

    A ``Full`` domain is an error for a falsified clause; for a satisfied
    clause it means no value of the variable can break it, and ``None`` is
    returned.
    """
    ub = lb = neq = None
    points = set()
    for d in domains:
        if isinstance(d, UpperHalfLine):
            if ub is None or _ub_key(d.bound) > _ub_key(ub):
                ub = d.bound
        elif isinstance(d, LowerHalfLine):
            if lb is None or _lb_key(d.bound) < _lb_key(lb):
                lb = d.bound
        elif isinstance(d, Point):
            points.add(d.value)
        elif isinstance(d, ComplementPoint):
            neq = d.value
        elif d is Full:
            if falsified:
                raise ValueError("literal is already satisfied; clause is not falsified")
            return None
    if falsified and ub is not None and lb is not None:
        gap = ub.value < lb.value or (ub.value == lb.value and ub.strict and lb.strict)
        assert gap, f"upper bound {ub} overlaps lower bound {lb} in a falsified clause"
    return ClauseDomain(ub, lb, tuple(sorted(points)), neq)


@dataclass(frozen=True)
class Interval:
    """One cell of a partition; ``None`` endpoints are infinite."""

    kind: str  # "upper", "middle" or "lower"
    lo: Fraction | None
    lo_closed: bool
    hi: Fraction | None
    hi_closed: bool
    make: int
    threshold: Bound | None = None

    def contains(self, v) -> bool:
        if self.lo is not None and (v < self.lo or (v == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (v > self.hi or (v == self.hi and not self.hi_closed)):
            return False
        return True


@dataclass
class IntervalPartition:
    var: object
    current: Fraction
    ub_list: list[tuple[Bound, int]]  # ascending, with multiplicities
    lb_list: list[tuple[Bound, int]]  # descending, with multiplicities
    intervals: list[Interval]
    always: int = 0  # clauses satisfied by any change of the variable
    point_candidates: list[Fraction] = field(default_factory=list)

    def positive_indices(self) -> list[int]:
        return [i for i, iv in enumerate(self.intervals) if iv.make > 0]

    def interval_of(self, v) -> int:
        for i, iv in enumerate(self.intervals):
            if iv.contains(v):
                return i
        raise ValueError(f"{v} lies in no interval")


def build_interval_partition(var, domains, current) -> IntervalPartition:
    """Partition the line for ``var`` from the domains of its falsified clauses.

    ``domains`` are :class:`ClauseDomain` summaries (one per falsified clause
    containing ``var``). Interval makes count clause bounds plus the clauses
    any move satisfies; equality points are listed separately and are not
    folded into interval makes.
    """
    ubs: Counter = Counter()
    lbs: Counter = Counter()
    points = set()
    always = 0
    for d in domains:
        if d.has_neq:
            always += 1
            continue
        if d.ub is not None:
            ubs[d.ub] += 1
        if d.lb is not None:
            lbs[d.lb] += 1
        points.update(d.eq_points)

    ub_list = sorted(ubs.items(), key=lambda it: _ub_key(it[0]))
    lb_list = sorted(lbs.items(), key=lambda it: _lb_key(it[0]), reverse=True)
    if ub_list and lb_list:
        u, low = ub_list[-1][0], lb_list[-1][0]
        assert u.value < low.value or (u.value == low.value and u.strict and low.strict), (
            f"max upper bound {u} is not below min lower bound {low}"
        )

    intervals = []
    remaining = sum(m for _, m in ub_list)
    prev: Bound | None = None
    for b, m in ub_list:
        intervals.append(Interval(
            "upper",
            None if prev is None else prev.value,
            prev is not None and prev.strict,
            b.value,
            not b.strict,
            remaining + always,
            b,
        ))
        remaining -= m
        prev = b
    top_ub = prev

    lower = []
    remaining = sum(m for _, m in lb_list)
    prev = None
    for b, m in lb_list:
        lower.append(Interval(
            "lower",
            b.value,
            not b.strict,
            None if prev is None else prev.value,
            prev is not None and prev.strict,
            remaining + always,
            b,
        ))
        remaining -= m
        prev = b
    low_lb = prev

    intervals.append(Interval(
        "middle",
        None if top_ub is None else top_ub.value,
        top_ub is not None and top_ub.strict,
        None if low_lb is None else low_lb.value,
        low_lb is not None and low_lb.strict,
        always,
    ))
    intervals.extend(reversed(lower))
    return IntervalPartition(var, Q(current), ub_list, lb_list, intervals, always, sorted(points))


def _largest_int_below(hi: Fraction) -> int:
    return math.ceil(hi) - 1


def _smallest_int_above(lo: Fraction) -> int:
    return math.floor(lo) + 1


def _interior_value(lo, hi, from_top: bool):
    """Integer nearest the threshold side inside the open interval, else the mediant."""
    if from_top:
        n = _largest_int_below(hi)
        if lo is None or n > lo:
            return Q(n)
    else:
        n = _smallest_int_above(lo)
        if hi is None or n < hi:
            return Q(n)
    if lo is not None and hi is not None and lo < hi:
        return mediant(lo, hi)
    return None


def candidate_values(ip: IntervalPartition, index: int, interval_op: bool = True) -> list[Fraction]:
    """Values worth trying inside one interval of ``ip``.

    For an upper interval ``(lo, hi]`` these are the threshold ``hi`` (when
    the bound is non-strict), the midpoint (or ``hi - 1`` when unbounded
    below) and the largest integer in ``(lo, hi)`` (or the mediant of the
    endpoints when there is none). Lower intervals mirror this. With
    ``interval_op=False`` only the threshold is produced, or the interior
    value when the bound is strict.
    """
    iv = ip.intervals[index]
    lo, hi = iv.lo, iv.hi
    if iv.kind == "middle":
        raw = _middle_values(iv, ip.current)
        if not interval_op:
            raw = raw[:1]
    else:
        upper = iv.kind == "upper"
        threshold = None if iv.threshold.strict else iv.threshold.value
        interior = _interior_value(lo, hi, from_top=upper)
        if not interval_op:
            raw = [threshold if threshold is not None else interior]
        else:
            if upper:
                median = hi - 1 if lo is None else (lo + hi) / 2
            else:
                median = lo + 1 if hi is None else (lo + hi) / 2
            raw = [threshold, median, interior]
    out = []
    for v in raw:
        if v is not None and iv.contains(v) and v not in out:
            out.append(Q(v))
    return out


def _middle_values(iv: Interval, current: Fraction) -> list:
    # The middle interval holds the current value; it only has positive
    # make when some clause is satisfied by moving the variable anywhere.
    lo, hi = iv.lo, iv.hi
    if lo is None and hi is None:
        vals = [Q(0), Q(1), Q(-1)]
    elif lo is None:
        vals = [_interior_value(lo, hi, True), hi - 1]
    elif hi is None:
        vals = [_interior_value(lo, hi, False), lo + 1]
    else:
        vals = [_interior_value(lo, hi, True), (lo + hi) / 2]
    vals += [current + 1, current - 1]
    return [v for v in vals if v is not None and v != current]


def satisfying_domain_clause(state, x: int, clause: int) -> ClauseDomain:
    """Domain of values for real variable ``x`` that satisfy falsified ``clause``."""
    if clause not in state.falsified:
        raise ValueError(f"clause {clause} is not falsified")
    lits = dict(state.f.real_occ[x]).get(clause, ())
    return clause_domain(state.literal_domain(li, x) for li in lits)
