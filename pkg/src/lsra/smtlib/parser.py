"""A reader for the QF_LRA / multilinear QF_NRA subset of SMT-LIB 2.

Numerals and decimals are read exactly as rationals; no floating point is
ever involved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from ..errors import SmtSyntaxError, SortError, UndeclaredSymbol, UnsupportedFeature
from .terms import ARITH_OPS, BOOL, COMPARISONS, REAL, App, BoolConst, Const, Let, Var

SUPPORTED_LOGICS = ("QF_LRA", "QF_NRA")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<string>"(?:[^"]|"")*")
  | (?P<qsym>\|[^|]*\|)
  | (?P<decimal>[0-9]+\.[0-9]+)
  | (?P<numeral>[0-9]+)
  | (?P<hexbin>\#[xb][0-9A-Fa-f]+)
  | (?P<keyword>:[^\s()|";]+)
  | (?P<symbol>[^\s()|";]+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


class SList(list):
    """A parenthesised s-expression remembering where it started."""

    def __init__(self, items=(), line=0, col=0):
        super().__init__(items)
        self.line = line
        self.col = col


SExpr = Union[Token, SList]


def tokenize(text: str) -> Iterator[Token]:
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SmtSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok_text = m.group()
        if kind not in ("ws", "comment"):
            yield Token(kind, tok_text, line, pos - line_start + 1)
        newlines = tok_text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok_text.rindex("\n") + 1
        pos = m.end()


def read_sexprs(text: str) -> list[SExpr]:
    stack: list[SList] = [SList()]
    for tok in tokenize(text):
        if tok.kind == "lpar":
            stack.append(SList(line=tok.line, col=tok.col))
        elif tok.kind == "rpar":
            if len(stack) == 1:
                raise SmtSyntaxError("unbalanced ')'", tok.line, tok.col)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise SmtSyntaxError("unclosed '('", stack[-1].line, stack[-1].col)
    return list(stack[0])


def _where(s: SExpr) -> tuple[int, int]:
    return s.line, s.col


def _symbol(s: SExpr) -> str | None:
    if isinstance(s, Token) and s.kind in ("symbol", "qsym"):
        return s.text[1:-1] if s.kind == "qsym" else s.text
    return None


def _expect_symbol(s: SExpr, what: str) -> str:
    name = _symbol(s)
    if name is None:
        raise SmtSyntaxError(f"expected {what}", *_where(s))
    return name


@dataclass
class Command:
    name: str
    args: tuple = ()


@dataclass
class Script:
    commands: list[Command] = field(default_factory=list)
    logic: str | None = None
    declarations: dict[str, str] = field(default_factory=dict)
    assertions: list = field(default_factory=list)

    def real_vars(self) -> list[str]:
        return [n for n, s in self.declarations.items() if s == REAL]

    def bool_vars(self) -> list[str]:
        return [n for n, s in self.declarations.items() if s == BOOL]


_IGNORED = {"set-info", "set-option", "get-info", "echo"}
_REJECTED = {
    "push", "pop", "reset", "reset-assertions", "check-sat-assuming",
    "declare-sort", "define-sort", "define-fun-rec", "define-funs-rec",
    "declare-datatype", "declare-datatypes", "get-value", "get-assignment",
    "get-proof", "get-unsat-core", "get-unsat-assumptions", "get-assertions",
}


class _Builder:
    def __init__(self):
        self.script = Script()
        self.macros: dict[str, object] = {}

    # -- commands -------------------------------------------------------------

    def command(self, s: SExpr) -> None:
        if not isinstance(s, SList) or not s:
            raise SmtSyntaxError("expected a command", *_where(s))
        name = _expect_symbol(s[0], "command name")
        args = s[1:]
        script = self.script
        if name == "set-logic":
            logic = _expect_symbol(args[0], "logic name") if args else None
            if logic not in SUPPORTED_LOGICS:
                raise UnsupportedFeature(f"logic {logic}")
            if script.logic is not None:
                raise SmtSyntaxError("duplicate set-logic", *_where(s))
            script.logic = logic
            script.commands.append(Command(name, (logic,)))
        elif name in ("declare-fun", "declare-const"):
            self._declare(name, args, s)
        elif name == "define-fun":
            self._define(args, s)
        elif name == "assert":
            if len(args) != 1:
                raise SmtSyntaxError("assert takes one term", *_where(s))
            t = self.term(args[0], {})
            if t.sort != BOOL:
                raise SortError("asserted term is not Bool")
            script.assertions.append(t)
            script.commands.append(Command(name, (t,)))
        elif name in ("check-sat", "get-model", "exit"):
            script.commands.append(Command(name))
        elif name in _IGNORED:
            script.commands.append(Command(name, tuple(_flat(a) for a in args)))
        elif name in _REJECTED:
            raise UnsupportedFeature(name)
        else:
            raise UnsupportedFeature(name)

    def _sort(self, s: SExpr) -> str:
        name = _symbol(s)
        if name == REAL or name == BOOL:
            return name
        raise UnsupportedFeature(f"sort {_flat(s)}")

    def _fresh_name(self, s: SExpr) -> str:
        name = _expect_symbol(s, "symbol")
        if name in self.script.declarations or name in self.macros:
            raise SmtSyntaxError(f"symbol {name} already declared", *_where(s))
        return name

    def _declare(self, cmd: str, args: list, s: SExpr) -> None:
        if cmd == "declare-fun":
            if len(args) != 3:
                raise SmtSyntaxError("malformed declare-fun", *_where(s))
            if not isinstance(args[1], SList):
                raise SmtSyntaxError("expected parameter sort list", *_where(args[1]))
            if len(args[1]) > 0:
                raise UnsupportedFeature("uninterpreted functions")
            sort_expr = args[2]
        else:
            if len(args) != 2:
                raise SmtSyntaxError("malformed declare-const", *_where(s))
            sort_expr = args[1]
        name = self._fresh_name(args[0])
        sort = self._sort(sort_expr)
        self.script.declarations[name] = sort
        self.script.commands.append(Command(cmd, (name, sort)))

    def _define(self, args: list, s: SExpr) -> None:
        if len(args) != 4 or not isinstance(args[1], SList):
            raise SmtSyntaxError("malformed define-fun", *_where(s))
        if len(args[1]) > 0:
            raise UnsupportedFeature("define-fun with parameters")
        name = self._fresh_name(args[0])
        sort = self._sort(args[2])
        body = self.term(args[3], {})
        if body.sort != sort:
            raise SortError(f"define-fun {name}: body is {body.sort}, declared {sort}")
        self.macros[name] = body
        self.script.commands.append(Command("define-fun", (name, sort, body)))

    # -- terms ------------------------------------------------------------------

    def term(self, s: SExpr, scope: dict[str, str]):
        if isinstance(s, Token):
            return self._atom(s, scope)
        if not s:
            raise SmtSyntaxError("empty application", *_where(s))
        head = s[0]
        if isinstance(head, SList):
            raise UnsupportedFeature(f"indexed or qualified identifier {_flat(head)}")
        op = _expect_symbol(head, "operator")
        args = s[1:]
        if op == "let":
            return self._let(s, args, scope)
        if op in ("forall", "exists"):
            raise UnsupportedFeature("quantifiers")
        if op == "!":
            if not args:
                raise SmtSyntaxError("empty annotation", *_where(s))
            return self.term(args[0], scope)
        subs = tuple(self.term(a, scope) for a in args)
        return _make_app(op, subs, s)

    def _atom(self, tok: Token, scope: dict[str, str]):
        if tok.kind == "numeral":
            return Const(Fraction(int(tok.text)))
        if tok.kind == "decimal":
            whole, frac = tok.text.split(".")
            return Const(Fraction(int(whole + frac), 10 ** len(frac)))
        if tok.kind == "hexbin":
            raise UnsupportedFeature("bit-vector literals")
        name = _symbol(tok)
        if name is None:
            raise SmtSyntaxError(f"unexpected token {tok.text}", tok.line, tok.col)
        if name in scope:
            return Var(name, scope[name])
        if name == "true":
            return BoolConst(True)
        if name == "false":
            return BoolConst(False)
        if name in self.macros:
            return self.macros[name]
        if name in self.script.declarations:
            return Var(name, self.script.declarations[name])
        raise UndeclaredSymbol(name)

    def _let(self, s: SList, args: list, scope: dict[str, str]) -> Let:
        if len(args) != 2 or not isinstance(args[0], SList) or not args[0]:
            raise SmtSyntaxError("malformed let", *_where(s))
        bindings = []
        inner = dict(scope)
        for b in args[0]:
            if not isinstance(b, SList) or len(b) != 2:
                raise SmtSyntaxError("malformed let binding", *_where(b))
            name = _expect_symbol(b[0], "binding name")
            value = self.term(b[1], scope)
            bindings.append((name, value))
            inner[name] = value.sort
        body = self.term(args[1], inner)
        return Let(tuple(bindings), body)


def _make_app(op: str, args: tuple, where: SList) -> App:
    sorts = [a.sort for a in args]

    def need(cond: bool, msg: str):
        if not cond:
            raise SortError(f"{where.line}:{where.col}: {op}: {msg}")

    if op in ("and", "or", "xor", "=>"):
        need(len(args) >= 1 if op in ("and", "or") else len(args) >= 2, "arity")
        need(all(s == BOOL for s in sorts), "expects Bool arguments")
        return App(op, args, BOOL)
    if op == "not":
        need(len(args) == 1 and sorts[0] == BOOL, "expects one Bool argument")
        return App(op, args, BOOL)
    if op == "ite":
        need(len(args) == 3 and sorts[0] == BOOL and sorts[1] == sorts[2], "ill-sorted ite")
        return App(op, args, sorts[1])
    if op in ("=", "distinct"):
        need(len(args) >= 2 and len(set(sorts)) == 1, "expects >= 2 arguments of one sort")
        return App(op, args, BOOL)
    if op in COMPARISONS:
        need(len(args) >= 2 and all(s == REAL for s in sorts), "expects Real arguments")
        return App(op, args, BOOL)
    if op in ARITH_OPS:
        need(len(args) >= (2 if op == "/" else 1), "arity")
        need(all(s == REAL for s in sorts), "expects Real arguments")
        return App(op, args, REAL)
    raise UnsupportedFeature(op)


def _flat(s: SExpr) -> str:
    if isinstance(s, Token):
        return s.text
    return "(" + " ".join(_flat(x) for x in s) + ")"


def parse_script(text: str | bytes) -> Script:
    """Parse SMT-LIB 2 text into a :class:`Script`.

    Raises :class:`SmtSyntaxError` for malformed input and
    :class:`UnsupportedFeature` for constructs outside the supported subset.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    builder = _Builder()
    for s in read_sexprs(text):
        builder.command(s)
    return builder.script


def _model_value(s: SExpr):
    if isinstance(s, Token):
        if s.kind == "numeral":
            return Fraction(int(s.text))
        if s.kind == "decimal":
            whole, frac = s.text.split(".")
            return Fraction(int(whole + frac), 10 ** len(frac))
        if s.text in ("true", "false"):
            return s.text == "true"
    elif s and _symbol(s[0]) == "-" and len(s) == 2:
        return -_model_value(s[1])
    elif s and _symbol(s[0]) == "/" and len(s) == 3:
        return _model_value(s[1]) / _model_value(s[2])
    raise SmtSyntaxError(f"unsupported model value {_flat(s)}", *_where(s))


def parse_model(text: str) -> dict[str, Fraction | bool]:
    """Read back the output of :func:`lsra.smtlib.model.print_model`."""
    values: dict[str, Fraction | bool] = {}
    for s in read_sexprs(text):
        if isinstance(s, Token):
            continue  # the leading sat/unknown line
        defs = s[1:] if s and _symbol(s[0]) == "model" else [s]
        for d in defs:
            if not isinstance(d, SList) or len(d) != 5 or _symbol(d[0]) != "define-fun":
                raise SmtSyntaxError("expected define-fun in model", *_where(d))
            values[_expect_symbol(d[1], "name")] = _model_value(d[4])
    return values
