import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lsra.arith import Bound
from lsra.search import (
    BoolFlip,
    LocalSearch,
    RealOp,
    SearchConfig,
    SearchStats,
    build_interval_partition,
    candidate_values,
    init_assignment,
    make_of,
    paws_update,
    satisfying_domain_clause,
    score_of,
    select_operation,
    solve,
    weighted_cost,
)
from lsra.smtlib import clausify, parse_script, validate_model

from helpers import compile_text, random_state, smt, state_from
from oracles import brute_make_score

THREE_LIT = smt("(assert (or (> (- a b) 4) (>= (- (* 2 a) b) 7) (<= (- (* 2 a) c) (- 5))))", "abc")
TWO_CLAUSE = THREE_LIT + "(declare-fun d () Real)(assert (or (>= (- a c) 2) (<= (- a d) (- 1))))"


def partition_of(state, name):
    x = state.f.real_index[name]
    domains = [satisfying_domain_clause(state, x, c) for c in state.falsified
               if x in state.f.clause_rvars[c]]
    return x, build_interval_partition(x, domains, state.real_vals[x])


def describe(ip):
    return [(iv.lo, iv.lo_closed, iv.hi, iv.hi_closed, iv.make) for iv in ip.intervals]


# -- satisfying domains and partitions ----------------------------------------


def test_clause_domain_three_literals():
    s = state_from(THREE_LIT)
    d = satisfying_domain_clause(s, s.f.real_index["a"], 0)
    assert d.ub == Bound(F(-5, 2), False)
    assert d.lb == Bound(F(7, 2), False)
    assert d.eq_points == () and not d.has_neq


def test_clause_domain_strict_lower():
    s = state_from(smt("(assert (> (- x y) 4))", "xy"))
    d = satisfying_domain_clause(s, 0, 0)
    assert d.lb == Bound(F(4), True) and d.ub is None


def test_clause_domain_needs_falsified_clause():
    s = state_from(smt("(assert (<= (* x1 x2) 2))", ["x1", "x2"]))
    with pytest.raises(ValueError):
        satisfying_domain_clause(s, 0, 0)


def test_partition_two_clauses():
    s = state_from(TWO_CLAUSE)
    _, ip = partition_of(s, "a")
    inf = None
    assert describe(ip) == [
        (inf, False, F(-5, 2), True, 2),
        (F(-5, 2), False, F(-1), True, 1),
        (F(-1), False, F(2), False, 0),
        (F(2), True, F(7, 2), False, 1),
        (F(7, 2), True, inf, False, 2),
    ]
    assert [b.value for b, _ in ip.ub_list] == [F(-5, 2), F(-1)]
    assert [b.value for b, _ in ip.lb_list] == [F(7, 2), F(2)]


def test_partition_single_lower_bound():
    s = state_from(smt("(assert (>= x 3))", "x"))
    _, ip = partition_of(s, "x")
    assert describe(ip) == [(None, False, F(3), False, 0), (F(3), True, None, False, 1)]
    assert ip.positive_indices() == [1]


def test_two_lower_bounds_makes():
    s = state_from(smt("(assert (>= a 3))(assert (>= a 5))", "a"))
    assert [make_of(RealOp(0, F(v)), s) for v in (4, 6, 0)] == [1, 2, 0]


@pytest.mark.parametrize("index,expected", [
    (1, [F(-1), F(-7, 4), F(-2)]),
    (0, [F(-5, 2), F(-7, 2), F(-3)]),
    (3, [F(2), F(11, 4), F(3)]),
    (4, [F(7, 2), F(9, 2), F(4)]),
])
def test_candidates_two_clause_partition(index, expected):
    _, ip = partition_of(state_from(TWO_CLAUSE), "a")
    assert candidate_values(ip, index) == expected


def test_candidates_without_interior_integer():
    s = state_from(smt("(assert (<= x (/ 1 3)))(assert (<= x (/ 1 2)))", "x"), {"x": 1})
    _, ip = partition_of(s, "x")
    assert candidate_values(ip, 1) == [F(1, 2), F(5, 12), F(2, 5)]


def test_candidates_strict_bound_skips_threshold():
    s = state_from(smt("(assert (> x 4))", "x"))
    _, ip = partition_of(s, "x")
    assert candidate_values(ip, 1) == [F(5)]
    s = state_from(smt("(assert (< x (/ 1 2)))(assert (< x (/ 1 3)))", "x"), {"x": 1})
    _, ip = partition_of(s, "x")
    # (1/3, 1/2): median 5/12 then the mediant 2/5
    assert candidate_values(ip, 1) == [F(5, 12), F(2, 5)]


def test_candidates_critical_move_only():
    _, ip = partition_of(state_from(TWO_CLAUSE), "a")
    assert candidate_values(ip, 1, interval_op=False) == [F(-1)]
    s = state_from(smt("(assert (> x 4))", "x"))
    _, ip = partition_of(s, "x")
    assert candidate_values(ip, 1, interval_op=False) == [F(5)]


def _sample_in(iv, rng):
    def off():
        return F(rng.randint(1, 40), rng.randint(1, 7))
    if iv.lo is None and iv.hi is None:
        return F(rng.randint(-50, 50), rng.randint(1, 7))
    if iv.lo is None:
        return iv.hi if iv.hi_closed and rng.random() < 0.2 else iv.hi - off()
    if iv.hi is None:
        return iv.lo if iv.lo_closed and rng.random() < 0.2 else iv.lo + off()
    if iv.lo_closed and rng.random() < 0.15:
        return iv.lo
    if iv.hi_closed and rng.random() < 0.15:
        return iv.hi
    t = F(rng.randint(1, 99), 100)
    return iv.lo + t * (iv.hi - iv.lo)


def test_equi_make_randomized():
    rng = random.Random(7)
    checked = 0
    while checked < 1000:
        s = random_state(rng)
        for x in s.real_vars_in_falsified():
            domains = [satisfying_domain_clause(s, x, c) for c in s.falsified if x in s.f.clause_rvars[c]]
            ip = build_interval_partition(x, domains, s.real_vals[x])
            # a value may carry both a strict and a non-strict bound
            ubs = [(b.value, 0 if b.strict else 1) for b, _ in ip.ub_list]
            lbs = [(b.value, 1 if b.strict else 0) for b, _ in ip.lb_list]
            assert ubs == sorted(set(ubs)) and lbs == sorted(set(lbs), reverse=True)
            for iv in ip.intervals:
                for _ in range(10):
                    v = _sample_in(iv, rng)
                    assert iv.contains(v)
                    if v == s.real_vals[x] or v in ip.point_candidates:
                        continue
                    assert make_of(RealOp(x, v), s) == iv.make
                checked += 1


# -- make and score against apply/recount/revert ----------------------------


def test_make_score_oracle_real_ops():
    rng = random.Random(11)
    for _ in range(1000):
        s = random_state(rng)
        x = rng.randrange(len(s.real_vals))
        old = s.real_vals[x]
        v = F(rng.randint(-12, 12), rng.randint(1, 4)) if rng.random() < 0.5 else old + rng.choice([0, 1, -1])
        make, score = brute_make_score(s, lambda: s.assign_real(x, v), lambda: s.assign_real(x, old))
        assert (make_of(RealOp(x, v), s), score_of(RealOp(x, v), s)) == (make, score)
        s.audit()


def test_make_score_oracle_flips():
    rng = random.Random(12)
    done = 0
    while done < 1000:
        s = random_state(rng)
        if not s.bool_vals:
            continue
        p = rng.randrange(len(s.bool_vals))
        make, score = brute_make_score(s, lambda: s.flip(p), lambda: s.flip(p))
        assert (make_of(BoolFlip(p), s), score_of(BoolFlip(p), s)) == (make, score)
        done += 1


def test_weighted_cost():
    s = state_from(smt("(assert (> x 1))(assert (> y 1))(assert (> z 1))", "xyz"), {"z": 5})
    assert weighted_cost(s) == 2
    s.bump_weights([1], 2)
    assert weighted_cost(s) == 4
    s.assign_real(0, F(2))
    s.assign_real(1, F(2))
    assert weighted_cost(s) == 0


def test_noop_operation():
    s = state_from(smt("(assert (> x 4))", "x"))
    assert make_of(RealOp(0, F(0)), s) == 0 and score_of(RealOp(0, F(0)), s) == 0


# -- selection ----------------------------------------------------------------


@pytest.mark.parametrize("cands,expected", [
    ([RealOp(0, F(3), score=2), RealOp(0, F(5, 2), score=2)], RealOp(0, F(3), score=2)),
    ([RealOp(0, F(-3), score=2), RealOp(0, F(3), score=2)], RealOp(0, F(-3), score=2)),
    ([RealOp(0, F(1), score=5), RealOp(1, F(0), score=2)], RealOp(0, F(1), score=5)),
    ([RealOp(0, F(7), score=1), RealOp(1, F(-1), score=1)], RealOp(1, F(-1), score=1)),
    ([RealOp(1, F(2), score=1), RealOp(0, F(2), score=1)], RealOp(0, F(2), score=1)),
])
def test_select_examples(cands, expected):
    assert select_operation(cands) == expected
    assert select_operation(list(reversed(cands))) == expected


def test_select_score_only_ignores_denominator():
    cands = [RealOp(1, F(3), score=2), RealOp(0, F(5, 2), score=2)]
    assert select_operation(cands, tie_break=True) == cands[0]
    assert select_operation(cands, tie_break=False) == cands[1]


def test_select_records_ties_and_rejects_empty():
    stats = SearchStats()
    select_operation([RealOp(0, F(1), score=3), RealOp(1, F(1), score=3), RealOp(2, F(1), score=1)], stats=stats)
    select_operation([BoolFlip(0, 3, 5), BoolFlip(1, 3, 2)], stats=stats)
    assert stats.tie_histogram == {2: 2}
    with pytest.raises(ValueError):
        select_operation([])


def test_flip_tie_prefers_least_recent():
    assert select_operation([BoolFlip(0, 3, 9), BoolFlip(1, 3, 4)]).var == 1


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(0, 4), st.fractions(-9, 9, max_denominator=5), st.integers(-3, 3)),
                min_size=1, max_size=12))
def test_select_is_order_independent(raw):
    cands = [RealOp(x, v, score=sc) for x, v, sc in raw]
    shuffled = list(cands)
    random.Random(len(raw)).shuffle(shuffled)
    assert select_operation(cands) == select_operation(shuffled)
    assert select_operation(cands).score == max(op.score for op in cands)


# -- weighting ----------------------------------------------------------------


def _weighted_state():
    s = state_from(smt("(assert (> x 1))(assert (> y 1))(assert (< x 5))", "xy"))
    s.weights[2] = 3
    s.cost = sum(s.weights[c] for c in s.falsified)
    return s


def test_paws_sp_zero_always_increments():
    s = _weighted_state()
    rng = random.Random(0)
    for i in range(5):
        assert paws_update(s, 0.0, rng)
    assert s.weights == [6, 6, 3] and s.cost == 12


def test_paws_sp_one_always_smooths():
    s = _weighted_state()
    rng = random.Random(0)
    for _ in range(5):
        assert not paws_update(s, 1.0, rng)
    assert s.weights == [1, 1, 1]


def test_paws_half_frequency_and_floor():
    s = _weighted_state()
    rng = random.Random(3)
    inc = sum(paws_update(s, 0.5, rng) for _ in range(10_000))
    assert abs(inc / 10_000 - 0.5) <= 0.02
    assert min(s.weights) >= 1
    s.audit()


# -- modes and solving ---------------------------------------------------------


def test_escape_samples_make_progress():
    rng = random.Random(5)
    seen = 0
    for seed in range(60):
        s = random_state(rng)
        if not s.real_vars_in_falsified():
            continue
        ls = LocalSearch(s.f.source, SearchConfig(seed=seed))
        ls.state = s
        _, moves = ls.real_candidates()
        for op in ls.sample_escape_ops(moves, 3):
            assert make_of(op, s) >= 1 and op.value != s.real_vals[op.var]
            seen += 1
    assert seen > 50


def test_escape_samples_unit_clause_and_determinism():
    f = clausify(parse_script(smt("(assert (> x 4))", "x")))
    draws = []
    for _ in range(2):
        ls = LocalSearch(f, SearchConfig(seed=9))
        _, moves = ls.real_candidates()
        ops = ls.sample_escape_ops(moves, 3)
        assert len(ops) == 3 and all(op.make == 1 for op in ops)
        draws.append(ops)
    assert draws[0] == draws[1]


def test_bool_unit_clause_forced_flip():
    f = clausify(parse_script(smt("(assert (not p))(assert (or p (> x 0)))", "x", "p")))
    ls = LocalSearch(f, SearchConfig())
    assert ls.bool_mode_step()
    assert ls.state.bool_vals == [False]


def test_bool_mode_requests_switch_without_booleans():
    f = clausify(parse_script(smt("(assert (> x 1))", "x", "p")))
    assert not LocalSearch(f, SearchConfig()).bool_mode_step()


def test_init_assignment_policies():
    f = compile_text(smt("(assert (or p (> (+ x y) 1)))", "xy", "p"))
    assert init_assignment(f, SearchConfig()) == ([0, 0], [True])
    a = init_assignment(f, SearchConfig(init="random", seed=4))
    b = init_assignment(f, SearchConfig(init="random", seed=4))
    assert a == b and all(-10 <= v <= 10 and v.denominator == 1 for v in a[0])
    empty = compile_text("(set-logic QF_LRA)")
    assert init_assignment(empty, SearchConfig()) == ([], [])


def test_solve_one_step():
    r = solve(clausify(parse_script(smt("(assert (> x 4))", "x"))), SearchConfig(max_steps=10))
    assert r.is_sat and r.assignment["x"] > 4 and r.stats.steps == 1


def test_pure_boolean_never_enters_real_mode():
    text = smt("(assert (or (not p) q))(assert (not q))(assert (or p r))", (), "pqr")
    r = solve(clausify(parse_script(text)), SearchConfig(max_steps=100))
    assert r.is_sat and r.stats.real_steps == 0


def test_small_multilinear_solves_and_validates():
    text = smt(
        "(assert (or p1 (<= (* x1 x2) 2)))"
        "(assert (or p2 (= (+ (* 3 x3 x4) (* 4 x4)) 2) (< (- (- x2) x3) 3)))",
        ["x1", "x2", "x3", "x4", "x5"], ["p1", "p2"],
    )
    script = parse_script(text)
    cfg = SearchConfig(max_steps=50, init="random", seed=2)
    r = solve(clausify(script), cfg)
    assert r.is_sat and validate_model(script.assertions, r.assignment)


def test_trivially_false_is_unknown():
    r = solve(clausify(parse_script(smt("(assert (> (- x x) 1))", "x"))), SearchConfig(max_steps=5))
    assert r.status == "unknown"


@pytest.mark.parametrize("kind,seed", [("lra", 1), ("mra", 2), ("lra", 3), ("mra", 4)])
def test_search_audited_and_reproducible(kind, seed):
    from lsra.generator import generate_planted

    f = clausify(parse_script(generate_planted(kind, 6, 25, seed, 2)))
    cfg = SearchConfig(max_steps=300, seed=seed, audit_every=1, cutoff_seconds=None)
    a, b = solve(f, cfg), solve(f, cfg)
    assert (a.status, a.assignment, a.stats) == (b.status, b.assignment, b.stats)
    assert sum(a.stats.tie_histogram.values()) <= a.stats.steps
    assert a.stats.real_steps + a.stats.bool_steps == a.stats.steps


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(L=0)
    with pytest.raises(ValueError):
        SearchConfig(sp=1.5)
    with pytest.raises(ValueError):
        SearchConfig.with_ablation("nope")
    cm = SearchConfig.with_ablation("plain", K=5)
    assert (cm.interval_op, cm.tie_break, cm.K) == (False, False, 5)
