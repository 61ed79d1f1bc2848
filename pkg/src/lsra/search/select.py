"""Operation selection with tie-breaking."""

from __future__ import annotations

from typing import Sequence

from .config import SearchStats
from .state import BoolFlip, RealOp


def _real_key(op: RealOp, tie_break: bool):
    if tie_break:
        # greatest score, then smallest denominator, then smallest |value|
        return (op.score, -op.value.denominator, -abs(op.value), -op.var, -op.value)
    return (op.score, -op.var, -op.value)


def _flip_key(op: BoolFlip):
    return (op.score, -op.last_flip, -op.var)


def select_operation(cands: Sequence, tie_break: bool = True, stats: SearchStats | None = None):
    """Pick the best operation; the order is total, so the choice is deterministic.

    Real operations are ranked by score, then (with ``tie_break``) by the
    denominator and the magnitude of the assigned value, then by variable
    index and value. Boolean flips are ranked by score, then by how long ago
    the variable was last flipped. The number of candidates sharing the
    best score is recorded in ``stats.tie_histogram``.
    """
    if not cands:
        raise ValueError("select_operation needs at least one candidate")
    if isinstance(cands[0], RealOp):
        best = max(cands, key=lambda op: _real_key(op, tie_break))
    else:
        best = max(cands, key=_flip_key)
    if stats is not None:
        stats.record_tie(sum(1 for op in cands if op.score == best.score))
    return best
