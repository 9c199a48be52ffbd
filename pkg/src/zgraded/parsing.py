"""Text formats: signatures (.gsig), expressions, morphisms (.gmor) and normal forms.

Expression grammar::

    expr   := term (('+' | '-') term)* ['+' 'O' '(' flavor '^' uint ')']
    term   := factor ('*' factor)*
    factor := '-' factor | atom ['^' uint]
    atom   := rational | name | '(' expr ')'

Multiplication is always explicit.  A trailing ``O(F^p)`` / ``O(UF^p)``
marks a truncated series, as printed by :func:`format_expr`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .core import (
    Flavor,
    GradedSeries,
    Truncation,
    WeightSignature,
    _dot,
    as_truncation,
)
from .errors import GradedError, ParseError, UnknownVariable

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|[-+*/^(),:;{}=\[\]])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list:
    tokens = []
    pos = 0
    line0_col = col
    line_start = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        here_col = pos - line_start + (line0_col if line_start == 0 else 1)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, here_col)
        kind = mo.lastgroup
        if kind == "nl":
            tokens.append(Token("nl", "\n", line, here_col))
            line += 1
            line_start = mo.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, mo.group(), line, here_col))
        pos = mo.end()
    end_col = pos - line_start + (line0_col if line_start == 0 else 1)
    tokens.append(Token("eof", "", line, end_col))
    return tokens


class _Stream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, text) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.col)


# ---------------------------------------------------------------- signatures

def parse_signature(text: str) -> WeightSignature:
    """Parse ``zero: x, y; vars: xi:2, eta:-2`` (sections split by ';' or newlines)."""
    s = _Stream(tokenize(text))
    zero, graded = [], []
    seen = set()

    def claim(tok):
        if tok.text in seen:
            raise ParseError(f"duplicate variable name {tok.text!r}", tok.line, tok.col)
        seen.add(tok.text)

    while True:
        while s.tok.kind == "nl" or s.at(";"):
            s.advance()
        if s.tok.kind == "eof":
            break
        head = s.tok
        if head.kind != "name" or head.text not in ("zero", "vars"):
            s.fail("expected 'zero:' or 'vars:'")
        s.advance()
        s.expect(":")
        if head.text == "zero":
            for tok in _name_list(s):
                claim(tok)
                zero.append(tok.text)
        else:
            for tok, w in _weighted_list(s):
                claim(tok)
                graded.append((tok.text, w))
        if not (s.tok.kind in ("nl", "eof") or s.at(";")):
            s.fail("expected ',' , ';' or end of line")
    return WeightSignature(tuple(zero), tuple(graded))


def _name_list(s):
    if s.tok.kind != "name":
        return
    while True:
        if s.tok.kind != "name":
            s.fail("expected a variable name")
        yield s.advance()
        if not s.at(","):
            return
        s.advance()
        while s.tok.kind == "nl":  # a trailing comma continues the list
            s.advance()


def _weighted_list(s):
    if s.tok.kind != "name":
        return
    while True:
        if s.tok.kind != "name":
            s.fail("expected a variable name")
        name_tok = s.advance()
        s.expect(":")
        sign = 1
        if s.at("-") or s.at("+"):
            sign = -1 if s.advance().text == "-" else 1
        if s.tok.kind != "num":
            s.fail("expected an integer weight")
        w = sign * int(s.advance().text)
        if w == 0:
            raise ParseError(f"graded variable {name_tok.text!r} has zero weight",
                             name_tok.line, name_tok.col)
        yield name_tok, w
        if not s.at(","):
            return
        s.advance()
        while s.tok.kind == "nl":  # a trailing comma continues the list
            s.advance()


def format_signature(sig: WeightSignature) -> str:
    parts = []
    if sig.zero_vars:
        parts.append("zero: " + ", ".join(sig.zero_vars))
    parts.append("vars: " + ", ".join(f"{n}:{w}" for n, w in sig.graded_vars))
    return "; ".join(parts)


def load_signature(path) -> WeightSignature:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GradedError(f"cannot read signature file {path}: {exc.strerror}") from None
    return parse_signature(text)


# --------------------------------------------------------------- expressions

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Sum:
    terms: tuple  # ((sign, expr), ...)


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, Sum, Product, Power]


def parse_ast(text: str, line: int = 1, col: int = 1):
    """Parse an expression into ``(ast, truncation or None)``."""
    s = _Stream(tokenize(text, line, col))
    while s.tok.kind == "nl":
        s.advance()
    if s.tok.kind == "eof":
        s.fail("empty expression")
    ast, trunc = _sum(s, top=True)
    while s.tok.kind == "nl":
        s.advance()
    if s.tok.kind != "eof":
        if s.tok.kind in ("name", "num") or s.at("("):
            s.fail("expected an operator (multiplication must be written with '*')")
        s.fail("unexpected token")
    return ast, trunc


def _is_marker(s):
    return s.tok.kind == "name" and s.tok.text == "O" and s.peek().kind == "op" and s.peek().text == "("


def _sum(s, top=False):
    terms = [(1, _term(s))]
    trunc = None
    while s.at("+") or s.at("-"):
        op = s.advance()
        if _is_marker(s):
            if not top or op.text != "+":
                s.fail("a truncation marker must be a final '+ O(...)' term")
            trunc = _marker(s)
            break
        terms.append((1 if op.text == "+" else -1, _term(s)))
    ast = terms[0][1] if len(terms) == 1 else Sum(tuple(terms))
    return ast, trunc


def _marker(s):
    s.advance()
    s.expect("(")
    tok = s.tok
    if tok.kind != "name" or tok.text not in ("F", "UF"):
        s.fail("expected filtration flavor F or UF")
    s.advance()
    s.expect("^")
    if s.tok.kind != "num":
        s.fail("expected a truncation order")
    order = int(s.advance().text)
    s.expect(")")
    return Truncation(Flavor(tok.text), order)


def _term(s):
    factors = [_factor(s)]
    while s.at("*"):
        s.advance()
        factors.append(_factor(s))
    return factors[0] if len(factors) == 1 else Product(tuple(factors))


def _factor(s):
    if s.at("-"):
        s.advance()
        return Neg(_factor(s))
    atom = _atom(s)
    if s.at("^"):
        s.advance()
        atom = Power(atom, _exponent(s))
    return atom


def _exponent(s):
    tok = s.tok
    if s.at("-"):
        raise ParseError("negative exponent", tok.line, tok.col)
    if s.at("("):
        s.advance()
        neg = s.at("-")
        if neg:
            s.advance()
        if s.tok.kind != "num":
            s.fail("expected a nonnegative integer exponent")
        value = int(s.advance().text)
        if s.at("/"):
            raise ParseError("fractional exponent", tok.line, tok.col)
        if neg:
            raise ParseError("negative exponent", tok.line, tok.col)
        s.expect(")")
        return value
    if s.tok.kind != "num":
        s.fail("expected a nonnegative integer exponent")
    value = int(s.advance().text)
    if s.at("/"):
        raise ParseError("fractional exponent", tok.line, tok.col)
    return value


def _atom(s):
    tok = s.tok
    if tok.kind == "num":
        s.advance()
        num = int(tok.text)
        if s.at("/"):
            s.advance()
            if s.tok.kind != "num":
                s.fail("expected a denominator")
            den = int(s.advance().text)
            if den == 0:
                raise ParseError("zero denominator", tok.line, tok.col)
            return Num(Fraction(num, den))
        return Num(Fraction(num))
    if tok.kind == "name":
        s.advance()
        if s.at("/"):
            s.fail("'/' is only allowed inside rational literals")
        return Var(tok.text, tok.line, tok.col)
    if s.at("("):
        s.advance()
        inner, _ = _sum(s)
        s.expect(")")
        return inner
    s.fail("expected a number, variable or '('")


def lower(sig: WeightSignature, ast) -> GradedSeries:
    """Evaluate an expression tree with the graded multiplication."""
    if isinstance(ast, Num):
        return GradedSeries.constant(sig, ast.value)
    if isinstance(ast, Var):
        if ast.name not in sig.index:
            raise ParseError(f"unknown variable {ast.name!r}", ast.line, ast.col)
        return GradedSeries.var(sig, ast.name)
    if isinstance(ast, Neg):
        return -lower(sig, ast.arg)
    if isinstance(ast, Sum):
        total = GradedSeries.zero(sig)
        for sign, t in ast.terms:
            total = total + lower(sig, t).scale(sign)
        return total
    if isinstance(ast, Product):
        acc = lower(sig, ast.factors[0])
        for fac in ast.factors[1:]:
            acc = acc * lower(sig, fac)
        return acc
    if isinstance(ast, Power):
        return lower(sig, ast.base) ** ast.exponent
    raise TypeError(f"not an expression node: {ast!r}")


def parse_expr(sig: WeightSignature, text: str, truncation=None, line: int = 1,
               col: int = 1) -> GradedSeries:
    ast, tag = parse_ast(text, line, col)
    f = lower(sig, ast)
    tag = as_truncation(truncation) if truncation is not None else tag
    return f.retag(tag) if tag is not None else f


def monomial_sort_key(sig: WeightSignature, m):
    return (_dot(sig.weights, m), sum(m), tuple(-e for e in m))


def format_monomial(sig: WeightSignature, m) -> str:
    parts = []
    for name, e in zip(sig.names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_expr(sig: WeightSignature, f: GradedSeries) -> str:
    pieces = []
    for m in sorted(f.terms, key=lambda m: monomial_sort_key(sig, m)):
        c = f.terms[m]
        mono = format_monomial(sig, m)
        if not mono:
            text = str(c)
        elif c == 1:
            text = mono
        elif c == -1:
            text = "-" + mono
        else:
            text = f"{c}*{mono}"
        pieces.append(text)
    if not pieces:
        out = "0"
    else:
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    if f.truncation is not None:
        out += f" + O({f.truncation.flavor}^{f.truncation.order})"
    return out


def parse_truncation(text: str) -> Truncation:
    """``F:3`` or ``UF:4``."""
    flavor, sep, order = text.partition(":")
    if not sep or not order.strip().isdigit():
        raise ParseError(f"malformed truncation {text!r}; expected FLAVOR:ORDER")
    try:
        return as_truncation((flavor.strip(), int(order)))
    except GradedError as exc:
        raise ParseError(str(exc)) from None


# ----------------------------------------------------------------- morphisms

def _resolve_sig(value: str, base: Path, line: int) -> WeightSignature:
    value = value.strip()
    if value.startswith("{"):
        if not value.endswith("}"):
            raise ParseError("unterminated inline signature", line, 1)
        return parse_signature(value[1:-1])
    path = Path(value)
    if not path.is_absolute():
        path = base / path
    return load_signature(path)


def parse_morphism(text: str, base_dir="."):
    """Parse a ``.gmor`` document; returns a validated morphism."""
    from .morphisms import morphism_new

    base = Path(base_dir)
    src = tgt = None
    trunc = None
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":=" in line:
            lhs, rhs = line.split(":=", 1)
            pending.append((lhs.strip(), rhs, lineno, len(lhs) + 3))
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or key not in ("source", "target", "trunc"):
            raise ParseError("expected 'source:', 'target:', 'trunc:' or 'var := expr'", lineno, 1)
        if key == "source":
            src = _resolve_sig(value, base, lineno)
        elif key == "target":
            tgt = _resolve_sig(value, base, lineno)
        else:
            try:
                trunc = parse_truncation(value.strip())
            except ParseError as exc:
                raise ParseError(exc.message, lineno, 1) from None
    if src is None or tgt is None:
        raise ParseError("morphism needs both 'source:' and 'target:' lines", 1, 1)
    images = {}
    for name, rhs, lineno, col in pending:
        if name not in tgt.index:
            raise ParseError(f"unknown target variable {name!r}", lineno, 1)
        if name in images:
            raise ParseError(f"second image for {name!r}", lineno, 1)
        images[name] = parse_expr(src, rhs, line=lineno, col=col)
    return morphism_new(src, tgt, images, trunc)


def load_morphism(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GradedError(f"cannot read morphism file {path}: {exc.strerror}") from None
    return parse_morphism(text, Path(path).parent)


def format_morphism(phi) -> str:
    lines = [
        f"source: {{{format_signature(phi.source)}}}",
        f"target: {{{format_signature(phi.target)}}}",
    ]
    if phi.truncation is not None:
        lines.append(f"trunc: {phi.truncation}")
    for u in phi.target.names:
        img = phi.images[u].untagged()
        lines.append(f"{u} := {format_expr(phi.source, img)}")
    return "\n".join(lines)


# -------------------------------------------------------------- normal forms

_VEC = re.compile(r"p=\(([\d,\s]*)\)\s*q=\(([\d,\s]*)\)")


def _vec(text, lineno):
    from .diophantine import SolutionVector

    mo = _VEC.fullmatch(text.strip())
    if mo is None:
        raise ParseError(f"malformed solution vector {text.strip()!r}", lineno, 1)
    conv = lambda s: tuple(int(x) for x in s.split(",") if x.strip())
    return SolutionVector(conv(mo.group(1)), conv(mo.group(2)))


def format_normal_form(nf) -> str:
    lines = [f"weight: {nf.weight}"]
    if nf.truncation is not None:
        lines.append(f"trunc: {nf.truncation}")
    for z, b in zip(nf.z_names, nf.basis):
        lines.append(f"{z} := {b}")
    for part in nf.particular:
        lines.append(f"[{part}] {format_expr(nf.coeff_sig, nf.coefficients[part])}")
    return "\n".join(lines)


def parse_normal_form(sig: WeightSignature, text: str):
    from .diophantine import BorelNormalForm, MinimalSolutionSet, z_variable_names

    weight = None
    trunc = None
    zdefs = []
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            close = stripped.find("]")
            if close < 0:
                raise ParseError("missing ']'", lineno, 1)
            rows.append((_vec(stripped[1:close], lineno), stripped[close + 1:], lineno,
                         line.index("]") + 2))
        elif ":=" in line:
            lhs, rhs = line.split(":=", 1)
            zdefs.append((lhs.strip(), _vec(rhs, lineno), lineno))
        elif stripped.startswith("weight:"):
            try:
                weight = int(stripped[len("weight:"):])
            except ValueError:
                raise ParseError("malformed weight", lineno, 1) from None
        elif stripped.startswith("trunc:"):
            trunc = parse_truncation(stripped[len("trunc:"):].strip())
        else:
            raise ParseError("unrecognized normal form line", lineno, 1)
    if weight is None:
        raise ParseError("normal form needs a 'weight:' line", 1, 1)
    mss = MinimalSolutionSet(sig.alpha, sig.beta, weight)
    basis = mss.homogeneous_basis
    znames = z_variable_names(sig, len(basis))
    for name, vec, lineno in zdefs:
        if vec not in basis:
            raise ParseError(f"{vec} is not a Hilbert basis element", lineno, 1)
        if name != znames[basis.index(vec)]:
            raise ParseError(f"{name} must be named {znames[basis.index(vec)]}", lineno, 1)
    coeff_sig = WeightSignature(sig.zero_vars + znames, ())
    coefficients = {v: GradedSeries.zero(coeff_sig) for v in mss.particular}
    for vec, expr, lineno, col in rows:
        if vec not in coefficients:
            raise ParseError(f"{vec} is not a minimal particular solution", lineno, 1)
        try:
            coefficients[vec] = coefficients[vec] + parse_expr(coeff_sig, expr, line=lineno, col=col)
        except UnknownVariable as exc:
            raise ParseError(str(exc), lineno, col) from None
    return BorelNormalForm(sig, weight, basis, mss.particular, coeff_sig, coefficients, trunc)
