"""Two-mode local search for clause sets over real and Boolean variables."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..arith import Q
from ..smtlib.cnf import ClausalFormula
from .config import SearchConfig, SearchStats
from .intervals import IntervalPartition, build_interval_partition, candidate_values
from .select import select_operation
from .state import BoolFlip, CompiledFormula, Effect, RealOp, SearchState, init_assignment

REAL_MODE = "real"
BOOL_MODE = "bool"


def paws_update(state: SearchState, sp: float, rng: random.Random) -> bool:
    """Probabilistic PAWS weighting. Returns True if the increase branch ran.

    With probability ``1 - sp`` every falsified clause gains one unit of
    weight; otherwise every satisfied clause heavier than 1 loses one.
    """
    if rng.random() >= sp:
        state.bump_weights(list(state.falsified), 1)
        return True
    falsified = state.falsified
    state.bump_weights([c for c, w in enumerate(state.weights) if w > 1 and c not in falsified], -1)
    return False


@dataclass
class _VarMoves:
    effects: list[Effect]
    partition: IntervalPartition
    options: list[list[Fraction]]  # one value list per positive interval or point


@dataclass
class SolveResult:
    status: str  # "sat" or "unknown"
    assignment: dict | None
    stats: SearchStats
    elapsed: float = 0.0
    formula: ClausalFormula | None = field(default=None, repr=False)

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"


class LocalSearch:
    def __init__(self, formula: ClausalFormula, cfg: SearchConfig):
        self.formula = formula
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.compiled = CompiledFormula(formula)
        reals, bools = init_assignment(self.compiled, cfg, self.rng)
        self.state = SearchState(self.compiled, reals, bools)
        self.stats = SearchStats()
        self._best_unweighted = len(self.state.falsified)
        self.stats.best_cost_trace.append((0, self._best_unweighted))

    # -- real mode ---------------------------------------------------------------

    def partition(self, x: int) -> tuple[list[Effect], IntervalPartition]:
        effects = self.state.var_effects(x)
        domains = [e.domain for e in effects if not e.sat]
        return effects, build_interval_partition(x, domains, self.state.real_vals[x])

    def _moves(self, x: int) -> _VarMoves:
        effects, ip = self.partition(x)
        cur = self.state.real_vals[x]
        options = []
        for i in ip.positive_indices():
            vals = [v for v in candidate_values(ip, i, self.cfg.interval_op) if v != cur]
            if vals:
                options.append(vals)
        for p in ip.point_candidates:
            if p != cur:
                options.append([p])
        return _VarMoves(effects, ip, options)

    def real_candidates(self) -> tuple[list[RealOp], dict[int, _VarMoves]]:
        state = self.state
        pool: dict[tuple[int, Fraction], RealOp] = {}
        moves: dict[int, _VarMoves] = {}
        for x in state.real_vars_in_falsified():
            mv = self._moves(x)
            moves[x] = mv
            for vals in mv.options:
                for v in vals:
                    if (x, v) not in pool:
                        make, score = state.eval_real(x, v, mv.effects)
                        pool[(x, v)] = RealOp(x, v, make, score)
        return list(pool.values()), moves

    def sample_escape_ops(self, moves: dict[int, _VarMoves], k: int) -> list[RealOp]:
        """Draw ``k`` interval-based operations, each satisfying some falsified clause."""
        state = self.state
        eligible = [
            c for c in state.falsified
            if any(moves[x].options for x in state.f.clause_rvars[c] if x in moves)
        ]
        if not eligible:
            return []
        rng = self.rng
        out = []
        for _ in range(k):
            c = rng.choice(eligible)
            x = rng.choice([x for x in state.f.clause_rvars[c] if x in moves and moves[x].options])
            mv = moves[x]
            v = rng.choice(rng.choice(mv.options))
            make, score = state.eval_real(x, v, mv.effects)
            out.append(RealOp(x, v, make, score))
        return out

    def _nudge(self, clause: int) -> RealOp:
        # Every variable of the clause has a vanishing coefficient (e.g. x*y > 1
        # at x = y = 0); move one of them off its value so that the others
        # regain a satisfying domain.
        state = self.state
        cands = {}
        for x in state.f.clause_rvars[clause]:
            cur = state.real_vals[x]
            for v in (Q(1), Q(-1), cur + 1, cur - 1):
                if v != cur and (x, v) not in cands:
                    make, score = state.eval_real(x, v)
                    cands[(x, v)] = RealOp(x, v, make, score)
        return select_operation(list(cands.values()), self.cfg.tie_break)

    def real_mode_step(self) -> bool:
        """One Real-mode step. Returns False if no real variable can move."""
        state, cfg = self.state, self.cfg
        pool, moves = self.real_candidates()
        if not moves:
            return False
        decreasing = [op for op in pool if op.score > 0]
        if decreasing:
            op = select_operation(decreasing, cfg.tie_break, self.stats)
        else:
            self._escape_weights()
            with_real = [c for c in state.falsified if state.f.clause_rvars[c]]
            c = self.rng.choice(with_real)
            if any(moves[x].options for x in state.f.clause_rvars[c]):
                sample = self.sample_escape_ops(moves, cfg.K)
                op = select_operation(sample, cfg.tie_break, self.stats)
            else:
                self.stats.nudges += 1
                op = self._nudge(c)
        state.assign_real(op.var, op.value)
        self.stats.real_steps += 1
        return True

    # -- Boolean mode ------------------------------------------------------------

    def _flip_op(self, p: int) -> BoolFlip:
        return BoolFlip(p, self.state.eval_flip(p)[1], self.state.last_flip[p])

    def bool_mode_step(self) -> bool:
        """One Boolean-mode step. Returns False if no Boolean variable can move."""
        state = self.state
        bvars = state.bool_vars_in_falsified()
        if not bvars:
            return False
        ops = [self._flip_op(p) for p in bvars]
        decreasing = [op for op in ops if op.score > 0]
        if decreasing:
            op = select_operation(decreasing, stats=self.stats)
        else:
            self._escape_weights()
            with_bool = [c for c in state.falsified if state.f.clause_bvars[c]]
            c = self.rng.choice(with_bool)
            ops = [self._flip_op(p) for p in state.f.clause_bvars[c]]
            op = select_operation(ops, stats=self.stats)
        state.flip(op.var, self.stats.steps + 1)
        self.stats.bool_steps += 1
        return True

    def _escape_weights(self) -> None:
        self.stats.escapes += 1
        if paws_update(self.state, self.cfg.sp, self.rng):
            self.stats.paws_increments += 1
        else:
            self.stats.paws_smooths += 1

    # -- driver --------------------------------------------------------------------

    def _threshold(self, mode: str) -> int:
        p_real, p_bool = self.state.literal_proportions()
        share = p_real if mode == REAL_MODE else p_bool
        return max(1, int(self.cfg.L * share))

    def _other_mode_possible(self, mode: str) -> bool:
        p_real, p_bool = self.state.literal_proportions()
        return (p_bool if mode == REAL_MODE else p_real) > 0

    def _restart(self) -> None:
        reals, bools = init_assignment(self.compiled, self.cfg, self.rng, policy="random")
        self.state.reset_values(reals, bools)
        self.state.reset_weights()
        self.stats.restarts += 1

    def _finish_sat(self, start: float) -> SolveResult:
        self.state.audit()
        assert not self.state.falsified
        # Independent re-check on the literal objects themselves.
        alpha = self.state.assignment()
        for clause in self.formula.clauses:
            assert any(lit.evaluate(alpha) for lit in clause), "internal model check failed"
        return SolveResult("sat", alpha, self.stats, time.perf_counter() - start, self.formula)

    def run(self) -> SolveResult:
        cfg, state, stats = self.cfg, self.state, self.stats
        start = time.perf_counter()
        if self.formula.trivially_false:
            return SolveResult("unknown", None, stats, 0.0, self.formula)
        if not state.falsified:
            return self._finish_sat(start)

        mode = REAL_MODE if state.real_vars_in_falsified() else BOOL_MODE
        best = state.cost
        non_improving = 0
        bound = self._threshold(mode)
        while state.falsified:
            if cfg.max_steps is not None and stats.steps >= cfg.max_steps:
                break
            if cfg.cutoff_seconds is not None and time.perf_counter() - start >= cfg.cutoff_seconds:
                break
            moved = self.real_mode_step() if mode == REAL_MODE else self.bool_mode_step()
            if not moved:
                mode = BOOL_MODE if mode == REAL_MODE else REAL_MODE
                stats.mode_switches += 1
                best, non_improving, bound = state.cost, 0, self._threshold(mode)
                continue
            stats.steps += 1
            nf = len(state.falsified)
            if nf < self._best_unweighted:
                self._best_unweighted = nf
                stats.best_cost_trace.append((stats.steps, nf))
            if cfg.audit_every and stats.steps % cfg.audit_every == 0:
                state.audit()
            if cfg.restart_steps and stats.steps % cfg.restart_steps == 0 and state.falsified:
                self._restart()
            if state.cost < best:
                best, non_improving = state.cost, 0
            else:
                non_improving += 1
            if non_improving >= bound:
                if self._other_mode_possible(mode):
                    mode = BOOL_MODE if mode == REAL_MODE else REAL_MODE
                    stats.mode_switches += 1
                best, non_improving, bound = state.cost, 0, self._threshold(mode)

        if not state.falsified:
            return self._finish_sat(start)
        return SolveResult("unknown", None, stats, time.perf_counter() - start, self.formula)


def solve(formula: ClausalFormula, cfg: SearchConfig | None = None) -> SolveResult:
    """Search for a model of ``formula``; never proves unsatisfiability."""
    return LocalSearch(formula, cfg or SearchConfig()).run()
