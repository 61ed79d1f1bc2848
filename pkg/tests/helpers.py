from __future__ import annotations

import random
from fractions import Fraction

from lsra.search import CompiledFormula, SearchConfig, SearchState, init_assignment
from lsra.smtlib import clausify, parse_script


def smt(body: str, reals=(), bools=(), logic: str = "QF_NRA") -> str:
    decls = "".join(f"(declare-fun {v} () Real)" for v in reals)
    decls += "".join(f"(declare-fun {p} () Bool)" for p in bools)
    return f"(set-logic {logic}){decls}{body}"


def compile_text(text: str) -> CompiledFormula:
    return CompiledFormula(clausify(parse_script(text)))


def state_from(text: str, values: dict | None = None, bools: dict | None = None) -> SearchState:
    """Search state with every variable at its default unless given."""
    f = compile_text(text)
    reals, bvals = init_assignment(f, SearchConfig())
    for name, v in (values or {}).items():
        reals[f.real_index[name]] = Fraction(v)
    for name, b in (bools or {}).items():
        bvals[f.bool_index[name]] = b
    return SearchState(f, reals, bvals)


def random_state(rng: random.Random, kind: str | None = None) -> SearchState:
    """A small random instance at a random assignment."""
    from lsra.generator import generate_planted

    kind = kind or rng.choice(["lra", "mra"])
    text = generate_planted(kind, rng.randint(1, 5), rng.randint(1, 8), rng.randrange(10**6), rng.randint(0, 2))
    f = compile_text(text)
    reals = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in f.real_names]
    bools = [rng.random() < 0.5 for _ in f.bool_names]
    state = SearchState(f, reals, bools)
    for ci in range(f.num_clauses):
        state.weights[ci] = rng.randint(1, 5)
    state.cost = sum(state.weights[c] for c in state.falsified)
    return state
