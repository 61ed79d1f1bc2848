import random

import pytest

from lsra.generator import generate_planted, plant, planted_suite
from lsra.smtlib import clausify, parse_script, validate_model


@pytest.mark.parametrize("kind", ["lra", "mra"])
def test_planted_solution_satisfies(kind):
    rng = random.Random(kind)
    for _ in range(100):
        inst = plant(kind, rng.randint(1, 12), rng.randint(1, 40), rng.randrange(10**6), rng.randint(0, 3))
        script = parse_script(inst.text)
        assert validate_model(script.assertions, inst.solution)
        assert not clausify(script).trivially_false


def test_same_seed_same_text():
    assert generate_planted("mra", 6, 20, 5, 2) == generate_planted("mra", 6, 20, 5, 2)
    assert generate_planted("mra", 6, 20, 5, 2) != generate_planted("mra", 6, 20, 6, 2)


def test_lra_atoms_are_linear():
    script = parse_script(generate_planted("lra", 5, 30, 1))
    lits = [lit for clause in clausify(script).clauses for lit in clause]
    assert lits and all(lit.poly.is_linear() for lit in lits)


def test_logic_header():
    assert generate_planted("lra", 2, 1, 0).startswith("(set-logic QF_LRA)")
    assert generate_planted("mra", 2, 1, 0).startswith("(set-logic QF_NRA)")


@pytest.mark.parametrize("args", [("qf", 2, 2, 0), ("lra", 0, 2, 0), ("lra", 2, 0, 0)])
def test_rejects_bad_arguments(args):
    with pytest.raises(ValueError):
        plant(*args)


def test_suite_layout():
    specs = planted_suite(10)
    assert len(specs) == 20 and len({s[0] for s in specs}) == 20
    assert [s[1] for s in specs] == ["lra"] * 10 + ["mra"] * 10
    assert specs == planted_suite(10)
    assert all(2 <= s[2] <= 20 and 1 <= s[3] <= 100 for s in specs)
