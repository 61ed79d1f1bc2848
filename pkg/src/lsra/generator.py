"""Random satisfiable instances built around a hidden solution."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .smtlib.model import format_rational

_RELS = ("<=", "<", ">=", ">", "=")
# Relative frequency of each relation in _RELS. Equalities are kept rarer:
# coupled equalities need simultaneous moves that one-variable search lacks.
REL_WEIGHTS = (2, 2, 2, 2, 1)
# relative frequency of monomial degrees 1, 2, 3 in mra atoms
DEGREE_WEIGHTS = (3, 2, 1)


@dataclass
class PlantedInstance:
    text: str
    solution: dict[str, object]


def _fmt_coeff(c: int) -> str:
    return f"(- {-c})" if c < 0 else str(c)


def _term_text(coeff: int, mono: tuple[str, ...]) -> str:
    if len(mono) == 1 and coeff == 1:
        return mono[0]
    return f"(* {_fmt_coeff(coeff)} {' '.join(mono)})"


def _random_poly(rng: random.Random, names: list[str], kind: str) -> list[tuple[int, tuple[str, ...]]]:
    n_terms = rng.randint(1, min(3, len(names)))
    terms = []
    used = set()
    for _ in range(n_terms):
        if kind == "lra":
            degree = 1
        else:
            top = min(3, len(names))
            degree = rng.choices(range(1, top + 1), DEGREE_WEIGHTS[:top])[0]
        mono = tuple(sorted(rng.sample(names, degree)))
        if mono in used:
            continue
        used.add(mono)
        coeff = rng.choice([c for c in range(-5, 6) if c != 0])
        terms.append((coeff, mono))
    return terms


def _value(terms, alpha) -> Fraction:
    total = Fraction(0)
    for coeff, mono in terms:
        t = Fraction(coeff)
        for v in mono:
            t *= alpha[v]
        total += t
    return total


def _slack(rng: random.Random, strict: bool) -> Fraction:
    lo = 1 if strict else 0
    return Fraction(rng.randint(lo, 4), rng.randint(1, 2))


def plant(
    kind: str,
    n_vars: int,
    n_clauses: int,
    seed: int,
    n_bools: int = 0,
) -> PlantedInstance:
    """Generate an instance together with the solution it was built around.

    Each clause has 1-4 literals and at least one of them is true under the
    hidden solution (equalities hold exactly). ``kind`` is ``"lra"`` for
    linear atoms or ``"mra"`` for multilinear monomials of degree <= 3.
    """
    if kind not in ("lra", "mra"):
        raise ValueError(f"unknown kind {kind!r}")
    if n_vars < 1 or n_clauses < 1:
        raise ValueError("need at least one variable and one clause")
    rng = random.Random(seed)
    names = [f"x{i}" for i in range(1, n_vars + 1)]
    bnames = [f"p{i}" for i in range(1, n_bools + 1)]
    alpha: dict[str, object] = {
        n: Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for n in names
    }
    for p in bnames:
        alpha[p] = rng.random() < 0.5

    def atom(planted: bool) -> str:
        terms = _random_poly(rng, names, kind)
        rel = rng.choices(_RELS, REL_WEIGHTS)[0]
        val = _value(terms, alpha)
        if not planted:
            k = val + rng.randint(-6, 6)
        elif rel == "=":
            k = val
        elif rel in ("<=", "<"):
            k = val + _slack(rng, rel == "<")
        else:
            k = val - _slack(rng, rel == ">")
        lhs = " ".join(_term_text(c, m) for c, m in terms)
        if len(terms) > 1:
            lhs = f"(+ {lhs})"
        return f"({rel} {lhs} {format_rational(k)})"

    def bool_lit(planted: bool) -> str:
        p = rng.choice(bnames)
        positive = alpha[p] if planted else rng.random() < 0.5
        return p if positive else f"(not {p})"

    clauses = []
    for _ in range(n_clauses):
        size = rng.randint(1, 4)
        planted_at = rng.randrange(size)
        lits = []
        for j in range(size):
            use_bool = bool(bnames) and rng.random() < 0.2
            lits.append(bool_lit(j == planted_at) if use_bool else atom(j == planted_at))
        clauses.append(lits[0] if size == 1 else f"(or {' '.join(lits)})")

    logic = "QF_LRA" if kind == "lra" else "QF_NRA"
    lines = [f"(set-logic {logic})", "(set-info :status sat)"]
    lines += [f"(declare-fun {n} () Real)" for n in names]
    lines += [f"(declare-fun {p} () Bool)" for p in bnames]
    lines += [f"(assert {c})" for c in clauses]
    lines += ["(check-sat)", "(exit)"]
    return PlantedInstance("\n".join(lines) + "\n", alpha)


def generate_planted(kind: str, n_vars: int, n_clauses: int, seed: int, n_bools: int = 0) -> str:
    return plant(kind, n_vars, n_clauses, seed, n_bools).text


def planted_suite(count_per_kind: int = 100, seed: int = 0, max_vars: int = 20, max_clauses: int = 100):
    """Sizes and seeds of a mixed lra/mra suite; about half the instances carry Booleans."""
    rng = random.Random(seed)
    specs = []
    for kind in ("lra", "mra"):
        for i in range(count_per_kind):
            n_vars = rng.randint(2, max_vars)
            n_clauses = rng.randint(1, max_clauses)
            n_bools = rng.randint(1, 5) if rng.random() < 0.5 else 0
            specs.append((f"{kind}_{i:03d}", kind, n_vars, n_clauses, rng.randrange(2**31), n_bools))
    return specs
