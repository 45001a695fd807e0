"""Expression language: parser, canonical printer, report emission.

Grammar (whitespace-insensitive, multiplication always explicit):

    expr   := ["+"|"-"] term {("+"|"-") term}
    term   := factor {("*"|"/") factor}
    factor := atom ["^" ["-"] integer]
    atom   := rational | symbol | "(" expr ")"

A rational literal is digits or digits/digits.  Division requires a scalar
divisor (it exists so printed coefficients such as (q)/(r - 1) read back).
A tensor expression is two expressions separated by the three-character
token (x); because juxtaposition is never multiplication the separator is
unambiguous.

Symbols: generators x, xi (= x^-1), th, dx, dth, d, px, pth, ix, ith;
derived operators H, Nb, T, wx, wth, Lx, Lth; the mode parameters; and the
structure coefficients Q, Q11, Q12, Q21, Q22, Qp.  In the dual-sector
language (pair subcommand) the symbols are T, K, Nb.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Callable, Optional

from .coeffs import QspError, RationalFunction, poly_str, _poly_is_one
from .algebra import (
    GEN_INDEX,
    GENS,
    X,
    Element,
    Monomial,
    RuleTable,
    mono_sort_key,
)
from .hopf import TensorElement, UElement


class ExprSyntaxError(QspError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownSymbol(QspError):
    pass


class BadExponent(QspError):
    pass


# ----------------------------------------------------------------------------
# Lexer / parser
# ----------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z][A-Za-z0-9]*)|([-+*/^()]))")


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip():
                bad = pos + len(rest) - len(rest.lstrip())
                raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
            break
        number, name, op = m.groups()
        at = m.start(1) if number else (m.start(2) if name else m.start(3))
        if number:
            tokens.append(("num", Fraction(number), at))
        elif name:
            tokens.append(("name", name, at))
        else:
            tokens.append(("op", op, at))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)

    def parse_expr(self):
        terms = []
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        terms.append((sign, self.parse_term()))
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                terms.append((-1 if val == "-" else 1, self.parse_term()))
            else:
                break
        return ("add", terms)

    def parse_term(self):
        factors = [("mulop", self.parse_factor())]
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                factors.append(("divop" if val == "/" else "mulop", self.parse_factor()))
            else:
                break
        return ("term", factors)

    def parse_factor(self):
        base = self.parse_atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            sign = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "-":
                self.next()
                sign = -1
            kind, val, pos = self.next()
            if kind != "num" or val.denominator != 1:
                raise ExprSyntaxError("exponent must be an integer", pos)
            return ("pow", base, sign * int(val))
        return base

    def parse_atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return ("num", val)
        if kind == "name":
            return ("sym", val)
        if kind == "op" and val == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise ExprSyntaxError(f"unexpected token {val!r}", pos)


def parse_expr(text: str):
    """Parse an expression; raises ExprSyntaxError with a position."""
    parser = _Parser(tokenize(text))
    ast = parser.parse_expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"trailing input {val!r}", pos)
    return ast


def parse_tensor(text: str):
    """Parse either a single expression or 'expr (x) expr'; returns a tuple
    (left ast, right ast or None).

    The separator is the literal three tokens ( x ) standing after a complete
    expression; since juxtaposition is never multiplication this cannot be
    confused with a parenthesized coordinate inside the expression.
    """
    parser = _Parser(tokenize(text))
    left = parser.parse_expr()
    kind, val, pos = parser.peek()
    if kind == "op" and val == "(":
        toks = parser.tokens[parser.i:parser.i + 3]
        if (len(toks) == 3 and toks[1][:2] == ("name", "x")
                and toks[2][:2] == ("op", ")")):
            parser.i += 3
            right = parser.parse_expr()
            kind, val, pos = parser.peek()
            if kind != "end":
                raise ExprSyntaxError(f"trailing input {val!r}", pos)
            return left, right
    if kind != "end":
        raise ExprSyntaxError(f"trailing input {val!r}", pos)
    return left, None


# ----------------------------------------------------------------------------
# Evaluation into the algebra
# ----------------------------------------------------------------------------

_COEFF_NAMES = ("Q", "Q11", "Q12", "Q21", "Q22", "Qp")

DerivedResolver = Callable[[RuleTable, str], Element]


def eval_ast(rt: RuleTable, ast, derived: Optional[DerivedResolver] = None) -> Element:
    P = rt.params
    kind = ast[0]
    if kind == "num":
        return Element.scalar(P, P.const(ast[1]))
    if kind == "sym":
        return _eval_symbol(rt, ast[1], 1, derived)
    if kind == "pow":
        base = ast[1]
        n = ast[2]
        if base[0] == "sym":
            return _eval_symbol(rt, base[1], n, derived)
        e = eval_ast(rt, base, derived)
        return _element_power(rt, e, n)
    if kind == "term":
        out = Element.one(P)
        for role, node in ast[1]:
            val = eval_ast(rt, node, derived)
            if role == "divop":
                if not val.is_scalar():
                    raise BadExponent("division requires a scalar divisor")
                out = out.scale(P.one() / val.scalar_value())
            else:
                out = rt.mul(out, val)
        return out
    if kind == "add":
        out = Element.zero(P)
        for sign, node in ast[1]:
            val = eval_ast(rt, node, derived)
            out = out + (val if sign > 0 else -val)
        return out
    raise ValueError(f"bad AST node {kind!r}")


def _eval_symbol(rt: RuleTable, name: str, power: int, derived) -> Element:
    P = rt.params
    if name == "xi":
        name, power = "x", -power
    if name in GEN_INDEX:
        g = GEN_INDEX[name]
        if power == 0:
            return Element.one(P)
        if power < 0 and g != X:
            raise BadExponent(f"negative power of {name!r} is not invertible")
        if g == X:
            return rt.normalize_word([("x", power)])
        return rt.normalize_word([name] * power)
    if name == "q" and "q" in P.variables:
        # the deformation parameter follows numeric specializations
        return Element.scalar(P, rt.ct.q ** power)
    if name in P.variables:
        return Element.scalar(P, P.var(name) ** power)
    if name in _COEFF_NAMES:
        return Element.scalar(P, rt.ct.coefficient(name) ** power)
    if derived is not None:
        e = derived(rt, name)
        if e is not None:
            return _element_power(rt, e, power)
    raise UnknownSymbol(f"unknown symbol {name!r}")


def _element_power(rt: RuleTable, e: Element, n: int) -> Element:
    P = rt.params
    if n == 0:
        return Element.one(P)
    if n < 0:
        if e.is_scalar():
            return Element.scalar(P, e.scalar_value() ** n)
        raise BadExponent("negative powers require a scalar or x")
    out = e
    for _ in range(n - 1):
        out = rt.mul(out, e)
    return out


def parse_element(rt: RuleTable, text: str,
                  derived: Optional[DerivedResolver] = None) -> Element:
    return eval_ast(rt, parse_expr(text), derived)


def parse_uelement(params, text: str) -> UElement:
    """Parse a dual-sector expression over the symbols T, K, Nb."""
    ast = parse_expr(text)

    def ev(node) -> UElement:
        kind = node[0]
        if kind == "num":
            return UElement.unit(params).scale(params.const(node[1]))
        if kind == "sym":
            return _usym(node[1], 1)
        if kind == "pow":
            if node[1][0] != "sym":
                raise BadExponent("powers apply to symbols in the dual language")
            return _usym(node[1][1], node[2])
        if kind == "term":
            out = UElement.unit(params)
            for role, sub in node[1]:
                if role == "divop":
                    raise BadExponent("no division in the dual language")
                out = out.mul(ev(sub))
            return out
        if kind == "add":
            out = UElement(params)
            for sign, sub in node[1]:
                v = ev(sub)
                out = out + (v if sign > 0 else -v)
            return out
        raise ValueError(kind)

    def _usym(name: str, power: int) -> UElement:
        if name == "T":
            return UElement.gen_T(params, power)
        if name == "K":
            return UElement.gen_K(params, power)
        if name == "Nb":
            if power == 1:
                return UElement.gen_nabla(params)
            if power == 0:
                return UElement.unit(params)
            if power > 1:
                return UElement(params)  # nilpotent
            raise BadExponent("Nb is nilpotent; negative powers do not exist")
        if name in params.variables:
            return UElement.unit(params).scale(params.var(name) ** power)
        raise UnknownSymbol(f"unknown dual-sector symbol {name!r}")

    return ev(ast)


# ----------------------------------------------------------------------------
# Canonical printing
# ----------------------------------------------------------------------------

def _mono_str(m: Monomial) -> str:
    parts = []
    for g, e in enumerate(m):
        if not e:
            continue
        parts.append(GENS[g] if e == 1 else f"{GENS[g]}^{e}")
    return "*".join(parts)


def _frac_str(f: Fraction) -> str:
    return str(f)


def _coeff_term(c: RationalFunction) -> tuple[int, str]:
    """Render a coefficient as (sign, body) with the sign pulled out when the
    numerator is a single term; bodies are parseable by the grammar above."""
    params = c.params
    num, den = c.num, c.den

    def mono_body(p, negate_exps=False) -> tuple[int, str]:
        (m, coeff), = p.items()
        sign = -1 if coeff < 0 else 1
        coeff = abs(coeff)
        parts = []
        if coeff != 1:
            parts.append(_frac_str(coeff))
        for v, e in zip(params.variables, m):
            if e:
                e = -e if negate_exps else e
                parts.append(v if e == 1 else f"{v}^{e}")
        return sign, "*".join(parts) if parts else "1"

    if _poly_is_one(den):
        if len(num) == 1:
            return mono_body(num)
        return 1, f"({poly_str(num, params.variables)})"
    if len(den) == 1:
        sd, dbody = mono_body(den, negate_exps=True)
        if len(num) == 1:
            sn, nbody = mono_body(num)
            if nbody == "1":
                return sn * sd, dbody
            if dbody == "1":
                return sn * sd, nbody
            return sn * sd, f"{nbody}*{dbody}"
        return sd, f"({poly_str(num, params.variables)})*{dbody}"
    return 1, f"({poly_str(num, params.variables)})/({poly_str(den, params.variables)})"


def print_canonical(e: Element) -> str:
    """Deterministic text form; parse_element(print_canonical(e)) == e."""
    if e.is_zero():
        return "0"
    chunks = []
    for m, c in e.sorted_terms():
        sign, body = _coeff_term(c)
        mstr = _mono_str(m)
        if not mstr:
            # bare scalars print unparenthesized when sign-safe
            if (body.startswith("(") and body.endswith(")")
                    and _poly_is_one(c.den) and not poly_str(c.num, c.params.variables).startswith("-")):
                body = poly_str(c.num, c.params.variables)
            piece = body
        elif body == "1":
            piece = mstr
        else:
            piece = f"{body}*{mstr}"
        chunks.append((sign, piece))
    sign, piece = chunks[0]
    out = ("-" if sign < 0 else "") + piece
    for sign, piece in chunks[1:]:
        out += (" - " if sign < 0 else " + ") + piece
    return out


def print_tensor(te: TensorElement) -> str:
    if te.is_zero():
        return "0"
    chunks = []
    for key, c in sorted(te.terms.items(), key=lambda kv: tuple(mono_sort_key(m) for m in kv[0])):
        sign, body = _coeff_term(c)
        slots = []
        for i, m in enumerate(key):
            mstr = _mono_str(m) or "1"
            if i == 0 and body != "1":
                mstr = f"{body}*{mstr}" if mstr != "1" else body
            slots.append(mstr)
        chunks.append((sign, " (x) ".join(slots)))
    sign, piece = chunks[0]
    out = ("-" if sign < 0 else "") + piece
    for sign, piece in chunks[1:]:
        out += (" - " if sign < 0 else " + ") + piece
    return out


# ----------------------------------------------------------------------------
# Reports
# ----------------------------------------------------------------------------

def emit_report(results, fmt: str, type_label: str,
                param_assignment: Optional[dict] = None) -> bytes:
    """Serialize verification results (sorted by identity id).

    JSON schema: {"type", "paramAssignment", "results": [{"id",
    "paperAnchor", "status", "residual", "elapsedMillis"}]}.
    """
    rows = sorted(results, key=lambda r: r.identityId)
    if fmt == "json":
        doc = {
            "type": type_label,
            "paramAssignment": (
                {k: str(v) for k, v in sorted(param_assignment.items())}
                if param_assignment else None
            ),
            "results": [
                {
                    "id": r.identityId,
                    "paperAnchor": r.paperAnchor,
                    "status": r.status,
                    "residual": print_canonical(r.residual),
                    "elapsedMillis": r.elapsedMillis,
                }
                for r in rows
            ],
        }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"type {type_label}"
             + (f"  params {param_assignment}" if param_assignment else "")]
    idw = max((len(r.identityId) for r in rows), default=2)
    aw = max((len(r.paperAnchor) for r in rows), default=2)
    for r in rows:
        residual = print_canonical(r.residual)
        lines.append(f"{r.identityId:<{idw}}  {r.paperAnchor:<{aw}}  "
                     f"{r.status:<4}  {residual}")
    return ("\n".join(lines) + "\n").encode("utf-8")
