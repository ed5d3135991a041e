"""The pair-description language: parser, AST, printer, evaluator.

A program is a sequence of lines.  ``pair NAME = EXPR`` binds a pair
expression; every other nonempty line is a command (a verb, positional
arguments, then ``--flag value`` options).  Expressions compose the
catalog builtins with the constructors:

    pair p = bs(2)
    pair w = wreath(dihedral(), translation())
    pair q = hnn(iterwreath(dihedral(), 2), contraction(1))
    index p t --depth 4

Parsing is position-aware so diagnostics carry line and column, and the
printer is an exact inverse: parsing its output reproduces the AST.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import HeckekitError

__all__ = [
    "DslError",
    "DslSyntaxError",
    "UnknownIdentifier",
    "ArityMismatch",
    "Builtin",
    "Ref",
    "Wreath",
    "IterWreath",
    "Hnn",
    "Perfectize",
    "Binding",
    "Command",
    "VERBS",
    "BUILTIN_ARITY",
    "parse_program",
    "parse_expr_text",
    "pretty_expr",
    "pretty_item",
    "pretty_program",
    "evaluate_expr",
    "Evaluator",
]


class DslError(HeckekitError):
    """Any diagnostic from the pair-description language."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__("%s (line %d, column %d)" % (message, line, col))
        self.line = line
        self.col = col


class DslSyntaxError(DslError):
    def __init__(self, expected: Sequence[str], found: str, line: int, col: int):
        self.expected = tuple(expected)
        self.found = found
        message = "syntax-error: expected %s, found %s" % (" or ".join(expected), found)
        super().__init__(message, line, col)


class UnknownIdentifier(DslError):
    def __init__(self, name: str, line: int, col: int):
        super().__init__("unknown-identifier: %r is not bound or builtin" % name, line, col)
        self.name = name


class ArityMismatch(DslError):
    def __init__(self, what: str, line: int, col: int):
        super().__init__("arity-mismatch: %s" % what, line, col)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Builtin:
    name: str
    params: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Wreath:
    bottom: "PairExpr"
    top: "PairExpr"


@dataclass(frozen=True)
class IterWreath:
    seed: "PairExpr"
    height: int


@dataclass(frozen=True)
class Hnn:
    inner: "PairExpr"
    contraction_point: int


@dataclass(frozen=True)
class Perfectize:
    inner: "PairExpr"


PairExpr = Union[Builtin, Ref, Wreath, IterWreath, Hnn, Perfectize]


@dataclass(frozen=True)
class Binding:
    name: str
    expr: PairExpr


@dataclass(frozen=True)
class Command:
    verb: str
    args: Tuple[object, ...]
    options: Tuple[Tuple[str, object], ...]
    line: int
    source: str

    def option(self, key: str, default=None):
        for k, v in self.options:
            if k == key:
                return v
        return default


ProgramItem = Union[Binding, Command]

BUILTIN_ARITY: Dict[str, int] = {
    "bs": 1,
    "lamplighter": 1,
    "dihedral": 0,
    "translation": 0,
    "free": 0,
}

CONSTRUCTORS = ("wreath", "iterwreath", "hnn", "perfectize", "contraction")

# Verb -> positional signature.  "expr" parses a pair expression, "atom"
# takes one bare token (a word to act by, a subcommand, a file path).
VERBS: Dict[str, Tuple[str, ...]] = {
    "verify": ("expr",),
    "orbits": ("expr",),
    "index": ("expr", "atom"),
    "scale": ("expr", "atom"),
    "ball": ("expr",),
    "complete": ("expr", "atom"),
    "filter": ("atom", "atom", "atom"),
    "rank": ("expr",),
    "tower": (),
}

# Options each verb accepts, with their value parser.
_INT = "int"
_STR = "str"
VERB_OPTIONS: Dict[str, Dict[str, str]] = {
    "verify": {"depth": _INT, "samples": _INT, "seed": _INT},
    "orbits": {"depth": _INT},
    "index": {"depth": _INT},
    "scale": {"steps": _INT},
    "ball": {"radius": _INT, "format": _STR, "out": _STR},
    "complete": {"depth": _INT},
    "filter": {"out": _STR},
    "rank": {"depth": _INT},
    "tower": {"n": _INT, "seed": _STR, "out": _STR},
}


# ---------------------------------------------------------------------------
# Tokens

_ATOM_RE = re.compile(r"[A-Za-z0-9_@.^*/\\-]+")
_NUMBER_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class Token:
    kind: str  # "atom" | "number" | "flag" | "(" | ")" | "," | "=" | "end"
    text: str
    line: int
    col: int


def _tokenize_line(text: str, line_no: int) -> List[Token]:
    out: List[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "#":
            break
        col = i + 1
        if text.startswith("--", i):
            m = _ATOM_RE.match(text, i + 2)
            if m is None:
                raise DslSyntaxError(["an option name"], repr(text[i : i + 3]), line_no, col)
            out.append(Token("flag", m.group(0), line_no, col))
            i = m.end()
            continue
        if ch in "(),=":
            out.append(Token(ch, ch, line_no, col))
            i += 1
            continue
        m = _ATOM_RE.match(text, i)
        if m is None:
            raise DslSyntaxError(["a name, number, or punctuation"], repr(ch), line_no, col)
        word = m.group(0)
        kind = "number" if _NUMBER_RE.fullmatch(word) else "atom"
        out.append(Token(kind, word, line_no, col))
        i = m.end()
    out.append(Token("end", "", line_no, len(text) + 1))
    return out


class _Cursor:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, kind: str, expected: Sequence[str]) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise DslSyntaxError(expected, _describe(tok), tok.line, tok.col)
        return self.take()


def _describe(tok: Token) -> str:
    return "end of line" if tok.kind == "end" else repr(tok.text)


# ---------------------------------------------------------------------------
# Expression parsing


def _parse_expr(cur: _Cursor, bound: Sequence[str]) -> PairExpr:
    tok = cur.peek()
    if tok.kind != "atom":
        raise DslSyntaxError(["a pair expression"], _describe(tok), tok.line, tok.col)
    cur.take()
    name = tok.text
    if cur.peek().kind != "(":
        if name in bound:
            return Ref(name)
        raise UnknownIdentifier(name, tok.line, tok.col)
    cur.take()
    args: List[object] = []
    arg_toks: List[Token] = []
    if cur.peek().kind != ")":
        while True:
            arg_toks.append(cur.peek())
            args.append(_parse_argument(cur, bound))
            if cur.peek().kind == ",":
                cur.take()
                continue
            break
    cur.expect(")", ["')'", "','"])
    return _shape_call(name, args, arg_toks, tok, bound)


def _parse_argument(cur: _Cursor, bound: Sequence[str]) -> object:
    tok = cur.peek()
    if tok.kind == "number":
        cur.take()
        return int(tok.text)
    return _parse_expr(cur, bound)


def _shape_call(
    name: str, args: List[object], arg_toks: List[Token], head: Token, bound: Sequence[str]
) -> PairExpr:
    def want(count: int) -> None:
        if len(args) != count:
            raise ArityMismatch(
                "%s takes %d argument%s, got %d" % (name, count, "" if count == 1 else "s", len(args)),
                head.line,
                head.col,
            )

    def expr_arg(i: int) -> PairExpr:
        if isinstance(args[i], int) or isinstance(args[i], _ContractionArg):
            raise DslSyntaxError(
                ["a pair expression"], _describe(arg_toks[i]), arg_toks[i].line, arg_toks[i].col
            )
        return args[i]

    def int_arg(i: int) -> int:
        if not isinstance(args[i], int):
            raise DslSyntaxError(["an integer"], "an expression", arg_toks[i].line, arg_toks[i].col)
        return args[i]

    if name in BUILTIN_ARITY:
        want(BUILTIN_ARITY[name])
        return Builtin(name=name, params=tuple(int_arg(i) for i in range(len(args))))
    if name == "wreath":
        want(2)
        return Wreath(bottom=expr_arg(0), top=expr_arg(1))
    if name == "iterwreath":
        want(2)
        return IterWreath(seed=expr_arg(0), height=int_arg(1))
    if name == "perfectize":
        want(1)
        return Perfectize(inner=expr_arg(0))
    if name == "hnn":
        want(2)
        point = args[1]
        if not isinstance(point, _ContractionArg):
            raise DslSyntaxError(
                ["contraction(<point>)"],
                _describe(arg_toks[1]) if arg_toks else "nothing",
                arg_toks[1].line,
                arg_toks[1].col,
            )
        return Hnn(inner=expr_arg(0), contraction_point=point.point)
    if name == "contraction":
        want(1)
        return _ContractionArg(point=int_arg(0))
    raise UnknownIdentifier(name, head.line, head.col)


@dataclass(frozen=True)
class _ContractionArg:
    """Placeholder for contraction(x); only legal inside hnn."""

    point: int


def parse_expr_text(text: str, bound: Sequence[str] = ()) -> PairExpr:
    """Parse one standalone expression; the whole line must be consumed."""
    cur = _Cursor(_tokenize_line(text, 1))
    expr = _parse_expr(cur, bound)
    tok = cur.peek()
    if tok.kind != "end":
        raise DslSyntaxError(["end of expression"], _describe(tok), tok.line, tok.col)
    if isinstance(expr, _ContractionArg):
        raise DslSyntaxError(["a pair expression"], "'contraction'", 1, 1)
    return expr


# ---------------------------------------------------------------------------
# Program parsing


def parse_program(source: str) -> List[ProgramItem]:
    """Parse a full program into bindings and commands, in order.

    Identifier references must resolve to an earlier binding, so a
    parsed program is automatically cycle-free.
    """
    items: List[ProgramItem] = []
    bound: List[str] = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        tokens = _tokenize_line(raw, line_no)
        if tokens[0].kind == "end":
            continue
        cur = _Cursor(tokens)
        head = cur.peek()
        if head.kind == "atom" and head.text == "pair":
            items.append(_parse_binding(cur, bound))
            continue
        if head.kind == "atom" and head.text in VERBS:
            items.append(_parse_command(cur, bound, raw))
            continue
        raise DslSyntaxError(
            ["'pair'"] + sorted(VERBS), _describe(head), head.line, head.col
        )
    return items


def _parse_binding(cur: _Cursor, bound: List[str]) -> Binding:
    cur.take()  # 'pair'
    name_tok = cur.expect("atom", ["a pair name"])
    if name_tok.text in BUILTIN_ARITY or name_tok.text in CONSTRUCTORS or name_tok.text in VERBS:
        raise DslSyntaxError(
            ["a fresh identifier"], repr(name_tok.text), name_tok.line, name_tok.col
        )
    cur.expect("=", ["'='"])
    expr = _parse_expr(cur, bound)
    if isinstance(expr, _ContractionArg):
        raise DslSyntaxError(["a pair expression"], "'contraction'", name_tok.line, name_tok.col)
    tail = cur.peek()
    if tail.kind != "end":
        raise DslSyntaxError(["end of line"], _describe(tail), tail.line, tail.col)
    bound.append(name_tok.text)
    return Binding(name=name_tok.text, expr=expr)


def _parse_command(cur: _Cursor, bound: List[str], raw: str) -> Command:
    verb_tok = cur.take()
    verb = verb_tok.text
    args: List[object] = []
    for slot in VERBS[verb]:
        tok = cur.peek()
        if tok.kind in ("end",) or tok.kind == "flag":
            raise ArityMismatch(
                "%s needs %d positional argument%s"
                % (verb, len(VERBS[verb]), "" if len(VERBS[verb]) == 1 else "s"),
                tok.line,
                tok.col,
            )
        if slot == "expr":
            expr = _parse_expr(cur, bound)
            if isinstance(expr, _ContractionArg):
                raise DslSyntaxError(["a pair expression"], "'contraction'", tok.line, tok.col)
            args.append(expr)
        else:
            if tok.kind not in ("atom", "number"):
                raise DslSyntaxError(["an argument token"], _describe(tok), tok.line, tok.col)
            cur.take()
            args.append(tok.text)
    options: List[Tuple[str, object]] = []
    allowed = VERB_OPTIONS[verb]
    while cur.peek().kind == "flag":
        flag_tok = cur.take()
        key = flag_tok.text
        if key not in allowed:
            raise DslSyntaxError(
                ["--" + k for k in sorted(allowed)] or ["no options"],
                "'--%s'" % key,
                flag_tok.line,
                flag_tok.col,
            )
        val_tok = cur.peek()
        if val_tok.kind not in ("atom", "number"):
            raise DslSyntaxError(["a value for --" + key], _describe(val_tok), val_tok.line, val_tok.col)
        cur.take()
        if allowed[key] == _INT:
            if val_tok.kind != "number":
                raise DslSyntaxError(
                    ["an integer for --" + key], repr(val_tok.text), val_tok.line, val_tok.col
                )
            options.append((key, int(val_tok.text)))
        else:
            options.append((key, val_tok.text))
    tail = cur.peek()
    if tail.kind != "end":
        raise DslSyntaxError(["'--option'", "end of line"], _describe(tail), tail.line, tail.col)
    return Command(
        verb=verb, args=tuple(args), options=tuple(options), line=verb_tok.line, source=raw.strip()
    )


# ---------------------------------------------------------------------------
# Printing (exact inverse of parsing)


def pretty_expr(expr: PairExpr) -> str:
    if isinstance(expr, Builtin):
        return "%s(%s)" % (expr.name, ", ".join(str(p) for p in expr.params))
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Wreath):
        return "wreath(%s, %s)" % (pretty_expr(expr.bottom), pretty_expr(expr.top))
    if isinstance(expr, IterWreath):
        return "iterwreath(%s, %d)" % (pretty_expr(expr.seed), expr.height)
    if isinstance(expr, Hnn):
        return "hnn(%s, contraction(%d))" % (pretty_expr(expr.inner), expr.contraction_point)
    if isinstance(expr, Perfectize):
        return "perfectize(%s)" % pretty_expr(expr.inner)
    raise TypeError("not a pair expression: %r" % (expr,))


def pretty_item(item: ProgramItem) -> str:
    if isinstance(item, Binding):
        return "pair %s = %s" % (item.name, pretty_expr(item.expr))
    parts = [item.verb]
    for a in item.args:
        parts.append(a if isinstance(a, str) else pretty_expr(a))
    for key, val in item.options:
        parts.append("--%s %s" % (key, val))
    return " ".join(parts)


def pretty_program(items: Sequence[ProgramItem]) -> str:
    return "\n".join(pretty_item(i) for i in items) + "\n"


# ---------------------------------------------------------------------------
# Evaluation


def _strip_positions(item: ProgramItem) -> ProgramItem:
    """Drop source spans so round-trip comparisons see structure only."""
    if isinstance(item, Command):
        return Command(verb=item.verb, args=item.args, options=item.options, line=0, source="")
    return item


class Evaluator:
    """Realizes pair expressions against the catalog and constructors.

    Built pairs are cached per binding name and per expression, so one
    program line referring to ``p`` twice acts on the same object (and
    therefore the same coset table).
    """

    def __init__(self) -> None:
        from . import catalog, construct

        self._catalog = catalog.CATALOG
        self._construct = construct
        self.env: Dict[str, object] = {}
        self._expr_cache: Dict[PairExpr, object] = {}

    def bind(self, binding: Binding) -> object:
        pair = self.expr(binding.expr)
        self.env[binding.name] = pair
        return pair

    def expr(self, node: PairExpr):
        if isinstance(node, Ref):
            if node.name not in self.env:
                raise UnknownIdentifier(node.name, 0, 0)
            return self.env[node.name]
        if node in self._expr_cache:
            return self._expr_cache[node]
        built = self._build(node)
        self._expr_cache[node] = built
        return built

    def _build(self, node: PairExpr):
        c = self._construct
        if isinstance(node, Builtin):
            return self._catalog[node.name](*node.params)
        if isinstance(node, Wreath):
            return c.wreath(self.expr(node.bottom), self.expr(node.top))
        if isinstance(node, IterWreath):
            return c.iterated_wreath(self.expr(node.seed), node.height)
        if isinstance(node, Perfectize):
            return c.perfectize(self.expr(node.inner))
        if isinstance(node, Hnn):
            inner = self.expr(node.inner)
            tower = getattr(inner, "_tower", None)
            seed = tower.seed_pair if tower is not None else inner
            data = c.contraction(seed, node.contraction_point)
            return c.hnn_extension(inner, data)
        raise TypeError("not a pair expression: %r" % (node,))


def evaluate_expr(expr: PairExpr):
    """One-shot evaluation for expressions without identifier references."""
    return Evaluator().expr(expr)
