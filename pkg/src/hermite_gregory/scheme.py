"""Scheme files: a line-oriented text format for parameterized masks.

Example::

    name=H1
    support=-2..2
    params=theta,omega
    matrix -2:
    theta, -theta/2
    -3*omega/2, omega/2
    ...

Entries are rational expressions over the declared parameters::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := number | name | '-' factor | '+' factor | '(' expr ')'
    number := digits ('.' digits)? | digits '/' digits

Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .masks import MatrixMask

__all__ = [
    "DivisionByZeroError",
    "ExpressionSyntaxError",
    "SchemeError",
    "SchemeFile",
    "UnboundParameterError",
    "ParamBinding",
    "format_fraction",
    "parse_binding",
    "load_scheme",
    "parse_expression",
    "parse_scheme",
    "parse_scalar",
    "read_scheme",
    "save_scheme",
    "scheme_text",
]


class SchemeError(ValueError):
    pass


class ExpressionSyntaxError(SchemeError):
    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class UnboundParameterError(SchemeError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"parameter {name!r} is not bound")


class DivisionByZeroError(SchemeError, ZeroDivisionError):
    pass


_TOKEN = re.compile(r"(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    for m in _TOKEN.finditer(text):
        start = m.start()
        if m.group(1):
            tokens.append(("num", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            if m.group(3) not in "+-*/()":
                raise ExpressionSyntaxError(text, start, f"unexpected character {m.group(3)!r}")
            tokens.append(("op", m.group(3), start))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, binding: Mapping[str, Fraction] | None, names: set | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.binding = binding
        self.names = names

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        raise ExpressionSyntaxError(self.text, self.peek()[2], message)

    def parse(self) -> Fraction:
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op, pos = self.take()[1:]
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    raise DivisionByZeroError(f"division by zero at position {pos} in {self.text!r}")
                value = value / rhs
        return value

    def factor(self):
        kind, tok, pos = self.peek()
        if kind == "op" and tok in "+-":
            self.take()
            value = self.factor()
            return -value if tok == "-" else value
        if kind == "op" and tok == "(":
            self.take()
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return value
        if kind == "num":
            self.take()
            return Fraction(tok)
        if kind == "name":
            self.take()
            if self.names is not None:
                self.names.add(tok)
            if self.binding is None:
                return Fraction(0)
            if tok not in self.binding:
                raise UnboundParameterError(tok)
            return Fraction(self.binding[tok])
        if kind == "end":
            self.fail("unexpected end of expression")
        self.fail(f"unexpected {tok!r}")


def parse_expression(text: str, binding: Mapping[str, object] | None = None) -> Fraction:
    """Evaluate a rational expression exactly after substituting ``binding``."""
    bound = {k: Fraction(v) for k, v in (binding or {}).items()}
    return _Parser(text, bound, None).parse()


def expression_names(text: str) -> set[str]:
    names: set[str] = set()
    _Parser(text, None, names).parse()
    return names


def parse_scalar(text: str) -> Fraction:
    """Parse an exact scalar such as ``-1/10``, ``0.002`` or ``3``."""
    return parse_expression(text.strip())


def format_fraction(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass
class SchemeFile:
    """Unevaluated scheme: expression strings for each matrix entry."""

    name: str
    support: tuple[int, int]
    params: tuple[str, ...] = ()
    entries: dict[int, tuple[tuple[str, str], tuple[str, str]]] = field(default_factory=dict)

    def evaluate(self, binding: Mapping[str, object] | None = None) -> MatrixMask:
        binding = {k: Fraction(v) for k, v in (binding or {}).items()}
        unknown = sorted(set(binding) - set(self.params))
        if unknown:
            raise SchemeError(f"binding for undeclared parameter(s): {', '.join(unknown)}")
        for p in self.params:
            if p not in binding:
                raise UnboundParameterError(p)
        lo, hi = self.support
        mats = []
        for j in range(lo, hi + 1):
            grid = self.entries[j]
            mats.append(tuple(tuple(parse_expression(e, binding) for e in row) for row in grid))
        return MatrixMask(lo, tuple(mats), 2)


_HEADER = re.compile(r"^(name|support|params)\s*=\s*(.*)$")
_MATRIX = re.compile(r"^matrix\s+(-?\d+)\s*:\s*$")
_SUPPORT = re.compile(r"^(-?\d+)\s*\.\.\s*(-?\d+)$")


def parse_scheme(text: str) -> SchemeFile:
    name = None
    support = None
    params: tuple[str, ...] = ()
    entries: dict[int, tuple] = {}
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.strip().startswith("#")
    ]
    i = 0
    while i < len(lines):
        no, line = lines[i]
        header = _HEADER.match(line)
        if header:
            key, value = header.group(1), header.group(2).strip()
            if key == "name":
                name = value
            elif key == "support":
                m = _SUPPORT.match(value)
                if not m:
                    raise SchemeError(f"line {no}: support must look like lo..hi")
                support = (int(m.group(1)), int(m.group(2)))
                if support[0] > support[1]:
                    raise SchemeError(f"line {no}: empty support {value}")
            else:
                params = tuple(p.strip() for p in value.split(",") if p.strip())
            i += 1
            continue
        block = _MATRIX.match(line)
        if not block:
            raise SchemeError(f"line {no}: expected a header or 'matrix <j>:' but got {line!r}")
        j = int(block.group(1))
        if j in entries:
            raise SchemeError(f"line {no}: matrix {j} defined twice")
        rows = []
        for r in range(2):
            if i + 1 + r >= len(lines):
                raise SchemeError(f"matrix {j}: expected two rows of two expressions")
            rno, rline = lines[i + 1 + r]
            cells = [c.strip() for c in rline.split(",")]
            if len(cells) != 2 or not all(cells):
                raise SchemeError(f"line {rno}: matrix {j} row must have two comma-separated expressions")
            rows.append((cells[0], cells[1]))
        entries[j] = tuple(rows)
        i += 3
    if name is None:
        raise SchemeError("missing 'name=' header")
    if support is None:
        raise SchemeError("missing 'support=' header")
    lo, hi = support
    for j in range(lo, hi + 1):
        if j not in entries:
            raise SchemeError(f"matrix for offset {j} is missing")
    outside = sorted(j for j in entries if not lo <= j <= hi)
    if outside:
        raise SchemeError(f"matrix offset {outside[0]} lies outside support {lo}..{hi}")
    declared = set(params)
    for j, grid in entries.items():
        for row in grid:
            for expr in row:
                try:
                    used = expression_names(expr)
                except ExpressionSyntaxError as exc:
                    raise SchemeError(f"matrix {j}: {exc}") from exc
                extra = used - declared
                if extra:
                    raise SchemeError(
                        f"matrix {j}: undeclared parameter(s) {', '.join(sorted(extra))}"
                    )
    return SchemeFile(name, support, params, entries)


def read_scheme(path) -> SchemeFile:
    return parse_scheme(Path(path).read_text(encoding="utf-8"))


def load_scheme(path, binding: Mapping[str, object] | None = None) -> MatrixMask:
    return read_scheme(path).evaluate(binding)


def scheme_text(mask: MatrixMask, name: str = "mask") -> str:
    """Canonical scheme text: numeric fractions, zero boundary matrices trimmed."""
    if mask.dilation != 2:
        raise SchemeError("only dilation-2 masks can be written as scheme files")
    if not mask.matrices:
        raise SchemeError("cannot write the zero mask")
    lo, hi = mask.support
    out = [f"name={name}", f"support={lo}..{hi}", "params="]
    for j, a in mask.items():
        out.append(f"matrix {j}:")
        for row in a:
            out.append(", ".join(format_fraction(x) for x in row))
    return "\n".join(out) + "\n"


def save_scheme(mask: MatrixMask, path, name: str = "mask") -> None:
    Path(path).write_text(scheme_text(mask, name), encoding="utf-8")


ParamBinding = dict


def parse_binding(items) -> ParamBinding:
    """``["theta=1/32", "omega=-0.1"]`` to an exact binding."""
    binding: dict[str, Fraction] = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise SchemeError(f"parameter must look like name=value, got {item!r}")
        if name in binding:
            raise SchemeError(f"parameter {name!r} given twice")
        binding[name] = parse_scalar(value)
    return binding
