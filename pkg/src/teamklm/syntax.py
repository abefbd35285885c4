"""Formula AST, parser and printer for propositional (dependence) logic.

Formulas are in negation normal form: negation only ever wraps a variable.
The concrete grammar is::

    formula := disj
    disj    := conj ( "|" conj )*
    conj    := unit ( "&" unit )*
    unit    := "top" | "bot" | VAR | "!" VAR | dep | "(" formula ")"
    dep     := "=(" [ VAR ( "," VAR )* ] ";" VAR ")"
    VAR     := [a-z][a-z0-9_]*

``&`` binds tighter than ``|``; both associate to the left.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

KEYWORDS = frozenset({"top", "bot"})
_VAR_RE = re.compile(r"[a-z][a-z0-9_]*")


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownVariableError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"unknown variable {name!r}")
        self.name = name


@dataclass(frozen=True)
class Signature:
    """Finite, ordered set of variables.

    The order is semantic: it fixes the canonical valuation numbering, with
    the first variable as the most significant bit of a valuation index.
    """

    vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not self.vars:
            raise ValueError("signature must be nonempty")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variables in signature {self.vars}")
        for v in self.vars:
            if not _VAR_RE.fullmatch(v) or v in KEYWORDS:
                raise ValueError(f"invalid variable name {v!r}")

    @classmethod
    def parse(cls, text: str) -> "Signature":
        return cls(tuple(part.strip() for part in text.split(",") if part.strip()))

    def __len__(self) -> int:
        return len(self.vars)

    def __iter__(self) -> Iterator[str]:
        return iter(self.vars)

    def __contains__(self, name: object) -> bool:
        return name in self.vars

    def position(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UnknownVariableError(name) from None

    @property
    def num_valuations(self) -> int:
        return 1 << len(self.vars)

    def __str__(self) -> str:
        return ",".join(self.vars)


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class NegVar:
    name: str


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class And:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Dep:
    """Dependence atom ``=(args;target)``; empty ``args`` is constancy."""

    args: tuple[str, ...]
    target: str

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Formula = Union[Var, NegVar, Bot, Top, And, Or, Dep]


def is_pl(f: Formula) -> bool:
    """True iff ``f`` contains no dependence atom."""
    if isinstance(f, Dep):
        return False
    if isinstance(f, (And, Or)):
        return is_pl(f.lhs) and is_pl(f.rhs)
    return True


def variables(f: Formula) -> frozenset[str]:
    if isinstance(f, (Var, NegVar)):
        return frozenset({f.name})
    if isinstance(f, Dep):
        return frozenset(f.args) | {f.target}
    if isinstance(f, (And, Or)):
        return variables(f.lhs) | variables(f.rhs)
    return frozenset()


def size(f: Formula) -> int:
    """Number of AST nodes; every atom (dependence atoms included) counts once."""
    if isinstance(f, (And, Or)):
        return 1 + size(f.lhs) + size(f.rhs)
    return 1


def conjoin(parts: list[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``top``."""
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(parts: list[Formula]) -> Formula:
    """Left-nested split disjunction; the empty disjunction is ``bot``."""
    if not parts:
        return Bot()
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# --- printing --------------------------------------------------------------


def to_text(f: Formula) -> str:
    """Canonical text with the fewest parentheses that still round-trips."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, NegVar):
        return "!" + f.name
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Dep):
        return f"=({','.join(f.args)};{f.target})"
    if isinstance(f, And):
        left = to_text(f.lhs)
        if isinstance(f.lhs, Or):
            left = f"({left})"
        right = to_text(f.rhs)
        if isinstance(f.rhs, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(f, Or):
        right = to_text(f.rhs)
        if isinstance(f.rhs, Or):
            right = f"({right})"
        return f"{to_text(f.lhs)} | {right}"
    raise TypeError(f"not a formula: {f!r}")


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(=\()|([a-z][a-z0-9_]*)|([!&|();,]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("DEP", "=(", start))
        elif m.group(2):
            word = m.group(2)
            tokens.append((word if word in KEYWORDS else "VAR", word, start))
        else:
            tokens.append((m.group(3), m.group(3), start))
        pos = m.end()
    tokens.append(("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {kind!r}, found {shown!r}", tok[2])
        self.i += 1
        return tok

    def var(self) -> str:
        name = self.take("VAR")[1]
        if self.sig is not None and name not in self.sig:
            raise UnknownVariableError(name)
        return name

    def formula(self) -> Formula:
        out = self.conj()
        while self.peek()[0] == "|":
            self.i += 1
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unit()
        while self.peek()[0] == "&":
            self.i += 1
            out = And(out, self.unit())
        return out

    def unit(self) -> Formula:
        kind, _, pos = self.peek()
        if kind == "top":
            self.i += 1
            return Top()
        if kind == "bot":
            self.i += 1
            return Bot()
        if kind == "VAR":
            return Var(self.var())
        if kind == "!":
            self.i += 1
            return NegVar(self.var())
        if kind == "(":
            self.i += 1
            inner = self.formula()
            self.take(")")
            return inner
        if kind == "DEP":
            self.i += 1
            args = []
            if self.peek()[0] == "VAR":
                args.append(self.var())
                while self.peek()[0] == ",":
                    self.i += 1
                    args.append(self.var())
            self.take(";")
            target = self.var()
            self.take(")")
            return Dep(tuple(args), target)
        shown = self.peek()[1] or "end of input"
        raise FormulaSyntaxError(f"unexpected token {shown!r}", pos)


def parse(text: str, sig: Signature | None = None) -> Formula:
    """Parse formula text; with ``sig`` given, every variable must belong to it."""
    p = _Parser(text, sig)
    f = p.formula()
    p.take("EOF")
    return f
