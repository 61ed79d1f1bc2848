"""Model output and exact model validation.

:func:`validate_model` evaluates the assertions exactly as parsed, with
``let``, ``ite``, ``distinct``, division and chained comparisons handled
directly. It shares no code with desugaring or clausification, so a
passing check also certifies those transformations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .terms import BOOL, REAL, App, BoolConst, Const, Let, Var


def format_rational(v) -> str:
    v = Fraction(v)
    if v < 0:
        return f"(- {format_rational(-v)})"
    if v.denominator == 1:
        return str(v.numerator)
    return f"(/ {v.numerator} {v.denominator})"


def print_model(alpha: Mapping[str, object], declarations: Mapping[str, str]) -> str:
    """Render ``sat`` followed by a model block for the declared variables.

    Auxiliary variables introduced by clausification are not declared and
    therefore never printed.
    """
    lines = ["sat", "(model"]
    for name, sort in declarations.items():
        if sort == REAL:
            lines.append(f"  (define-fun {_quote(name)} () Real {format_rational(alpha[name])})")
    for name, sort in declarations.items():
        if sort == BOOL:
            lines.append(f"  (define-fun {_quote(name)} () Bool {'true' if alpha[name] else 'false'})")
    lines.append(")")
    return "\n".join(lines) + "\n"


_SIMPLE_CHARS = set("~!@$%^&*_-+=<>.?/")


def _quote(name: str) -> str:
    if name and not name[0].isdigit() and all(ch.isalnum() or ch in _SIMPLE_CHARS for ch in name):
        return name
    return f"|{name}|"


_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def evaluate(t, alpha: Mapping[str, object], env: dict | None = None):
    """Exact value of term ``t`` (a Fraction or a bool) under ``alpha``."""
    env = env or {}
    if isinstance(t, Const):
        return Fraction(t.value)
    if isinstance(t, BoolConst):
        return t.value
    if isinstance(t, Var):
        if t.name in env:
            return env[t.name]
        v = alpha[t.name]
        return bool(v) if t.sort == BOOL else Fraction(v)
    if isinstance(t, Let):
        inner = dict(env)
        for name, value in t.bindings:
            inner[name] = evaluate(value, alpha, env)
        return evaluate(t.body, alpha, inner)
    if not isinstance(t, App):
        raise TypeError(f"cannot evaluate {t!r}")
    op = t.op
    if op == "ite":
        cond = evaluate(t.args[0], alpha, env)
        return evaluate(t.args[1] if cond else t.args[2], alpha, env)
    vals = [evaluate(a, alpha, env) for a in t.args]
    if op == "and":
        return all(vals)
    if op == "or":
        return any(vals)
    if op == "not":
        return not vals[0]
    if op == "=>":
        out = vals[-1]
        for v in reversed(vals[:-1]):
            out = (not v) or out
        return out
    if op == "xor":
        out = vals[0]
        for v in vals[1:]:
            out = out != v
        return out
    if op == "=":
        return all(a == b for a, b in zip(vals, vals[1:]))
    if op == "distinct":
        return len(set(vals)) == len(vals)
    if op in _CMP:
        f = _CMP[op]
        return all(f(a, b) for a, b in zip(vals, vals[1:]))
    if op == "+":
        return sum(vals, Fraction(0))
    if op == "-":
        if len(vals) == 1:
            return -vals[0]
        out = vals[0]
        for v in vals[1:]:
            out -= v
        return out
    if op == "*":
        out = Fraction(1)
        for v in vals:
            out *= v
        return out
    if op == "/":
        out = vals[0]
        for v in vals[1:]:
            out /= v
        return out
    raise ValueError(f"unknown operator {op}")


def validate_model(original, alpha: Mapping[str, object]) -> bool:
    """True iff every assertion in ``original`` evaluates to true under ``alpha``.

    ``original`` is a single term or a list of asserted terms.
    """
    terms = original if isinstance(original, (list, tuple)) else [original]
    try:
        return all(evaluate(t, alpha) is True for t in terms)
    except (KeyError, ZeroDivisionError):
        return False
