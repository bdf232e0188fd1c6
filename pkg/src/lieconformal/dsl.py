"""Text format (`.lca`) for conformal algebra definitions.

Grammar (ASCII token set; `#` starts a line comment)::

    file         = header? algebra
    header       = '@' 'truncate' INT ';'?
    algebra      = 'algebra' NAME '(' name-list? ')' '{' decl* '}'
    decl         = 'generators' gen (',' gen)* ';'
                 | 'bracket' '[' gen '_' gen ']' '=' rhs ';'
    gen          = NAME | NAME '(' signed-int (',' signed-int)* ')'
    rhs          = term (('+' | '-') term)*
    term         = poly-expr gen? | gen
    poly-expr    = additive chain over '*', '^ INT', unary '-',
                   rational literals INT ('/' INT)?, parentheses, and the
                   reserved variables 'l' (bracket variable) and 'd'
                   (translation generator) plus declared parameter names

Indexed generators are identified by their indices: a single index
``J(3)`` names the integer id 3, several indices ``E(1,2,0)`` name the
tuple id (1, 2, 0); the letter is presentational.  Undeclared bracket
pairs are completed by skew-symmetry when the opposite orientation is
declared; if both orientations are declared they must agree under
skew-symmetry.  With a truncation header, pairs declared in neither
orientation are treated as outside the truncation window; without one
they are an error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import ConformalAlgebra, LambdaExpr, TruncationOverflow, lam_sub, lam_is_zero
from .poly import MultiPoly, v

RESERVED_VARS = ("l", "d")
KEYWORDS = {"algebra", "generators", "bracket", "truncate"}

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[{}()\[\]=;,+\-*/^_@])"
)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    offset: int


@dataclass(frozen=True)
class Token:
    kind: str  # 'int' | 'name' | 'punct' | 'eof'
    text: str
    span: SourceSpan


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected: set[str]):
        if not expected:
            raise ValueError("expected set must be non-empty")
        self.span = span
        self.expected = frozenset(expected)
        super().__init__(
            f"{message} at line {span.line}, column {span.column} "
            f"(expected one of: {', '.join(sorted(expected))})")


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    col = 1
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             SourceSpan(line, col, pos), {"token"})
        kind = m.lastgroup
        frag = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token("int" if kind == "int" else
                                "name" if kind == "name" else "punct",
                                frag, SourceSpan(line, col, pos)))
        newlines = frag.count("\n")
        if newlines:
            line += newlines
            col = len(frag) - frag.rfind("\n")
        else:
            col += len(frag)
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, col, pos)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, expected: set[str], message: str | None = None):
        t = self.peek()
        what = message or (f"unexpected end of input" if t.kind == "eof"
                           else f"unexpected {t.text!r}")
        raise ParseError(what, t.span, expected)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text or t.kind == "eof":
            self.error({text})
        return self.next()

    def expect_name(self, what="name") -> Token:
        t = self.peek()
        if t.kind != "name":
            self.error({what})
        return self.next()

    def expect_int(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.error({"integer"})
        self.next()
        return int(t.text)

    def accept(self, text: str) -> bool:
        if self.peek().text == text and self.peek().kind != "eof":
            self.next()
            return True
        return False

    # -- structure ------------------------------------------------------

    def parse_file(self):
        truncation = None
        if self.accept("@"):
            kw = self.expect_name("truncate")
            if kw.text != "truncate":
                raise ParseError(f"unknown header {kw.text!r}", kw.span,
                                 {"truncate"})
            truncation = self.expect_int()
            self.accept(";")
        t = self.peek()
        if t.text != "algebra":
            self.error({"algebra"})
        self.next()
        name = self.expect_name("algebra name").text
        self.expect("(")
        params: list[str] = []
        if not self.accept(")"):
            while True:
                p = self.expect_name("parameter name")
                if p.text in RESERVED_VARS:
                    raise ParseError(f"{p.text!r} is reserved", p.span,
                                     {"parameter name"})
                params.append(p.text)
                if self.accept(")"):
                    break
                self.expect(",")
        self.expect("{")
        generators: list = []
        brackets: list[tuple] = []  # (gid1, gid2, rhs token range, span)
        while not self.accept("}"):
            t = self.peek()
            if t.text == "generators":
                self.next()
                while True:
                    generators.append(self.parse_gen()[0])
                    if self.accept(";"):
                        break
                    self.expect(",")
            elif t.text == "bracket":
                self.next()
                self.expect("[")
                g1, _ = self.parse_gen()
                self.expect("_")
                g2, _ = self.parse_gen()
                self.expect("]")
                self.expect("=")
                start = self.i
                depth = 0
                while True:
                    tt = self.peek()
                    if tt.kind == "eof":
                        self.error({";"})
                    if tt.text == "(":
                        depth += 1
                    elif tt.text == ")":
                        depth -= 1
                    elif tt.text == ";" and depth == 0:
                        break
                    self.next()
                end = self.i
                self.expect(";")
                brackets.append((g1, g2, start, end, t.span))
            else:
                self.error({"generators", "bracket", "}"})
        if self.peek().kind != "eof":
            self.error({"end of input"})
        return name, params, truncation, generators, brackets

    def parse_gen(self):
        t = self.expect_name("generator")
        if t.text in RESERVED_VARS:
            raise ParseError(f"{t.text!r} is reserved", t.span, {"generator"})
        if self.peek().text != "(":
            return t.text, t.span
        self.next()
        idx = []
        while True:
            sign = -1 if self.accept("-") else 1
            idx.append(sign * self.expect_int())
            if self.accept(")"):
                break
            self.expect(",")
        gid = idx[0] if len(idx) == 1 else tuple(idx)
        return gid, t.span

    # -- expressions ------------------------------------------------------

    def parse_rhs(self, gen_names: dict, params: set[str]) -> LambdaExpr:
        """Parse a sum of (coefficient, generator) terms; runs over a
        pre-sliced token range, so ';' has already been located."""
        value: LambdaExpr = {}
        scalar = MultiPoly.zero()
        sign = 1
        if self.accept("-"):
            sign = -1
        while True:
            coeff, gid = self.parse_term(gen_names, params)
            coeff = coeff * sign
            if gid is None:
                scalar = scalar + coeff
            else:
                cur = value.get(gid, MultiPoly.zero()) + coeff
                if cur.is_zero:
                    value.pop(gid, None)
                else:
                    value[gid] = cur
            t = self.peek()
            if t.kind == "eof":
                break
            if t.text == "+":
                sign = 1
                self.next()
            elif t.text == "-":
                sign = -1
                self.next()
            else:
                self.error({"+", "-", ";"})
        if not scalar.is_zero:
            raise ParseError("nonzero term without a generator",
                             self.peek().span, {"generator"})
        return value

    def parse_term(self, gen_names: dict, params: set[str]):
        t = self.peek()
        if t.kind == "name" and t.text not in RESERVED_VARS and t.text not in params:
            gid = self.parse_gen_ref(gen_names)
            return MultiPoly.const(1), gid
        coeff = self.parse_expr(params)
        t = self.peek()
        if t.kind == "name" and t.text not in RESERVED_VARS and t.text not in params:
            gid = self.parse_gen_ref(gen_names)
            return coeff, gid
        return coeff, None

    def parse_gen_ref(self, gen_names: dict):
        t = self.peek()
        gid, span = self.parse_gen()
        if gid not in gen_names:
            raise ParseError(f"unknown generator {t.text!r}", span,
                             {"declared generator"})
        return gid

    def parse_expr(self, params: set[str]) -> MultiPoly:
        left = self.parse_mul(params)
        while self.peek().text in ("+", "-") and self.peek().kind == "punct":
            op = self.next().text
            right = self.parse_mul(params)
            left = left + right if op == "+" else left - right
        return left

    def parse_mul(self, params: set[str]) -> MultiPoly:
        left = self.parse_unary(params)
        while self.peek().text == "*" and self.peek().kind == "punct":
            self.next()
            left = left * self.parse_unary(params)
        return left

    def parse_unary(self, params: set[str]) -> MultiPoly:
        if self.accept("-"):
            return -self.parse_unary(params)
        return self.parse_pow(params)

    def parse_pow(self, params: set[str]) -> MultiPoly:
        base = self.parse_primary(params)
        if self.peek().text == "^":
            self.next()
            exp = self.expect_int()
            return base ** exp
        return base

    def parse_primary(self, params: set[str]) -> MultiPoly:
        t = self.peek()
        if t.kind == "int":
            self.next()
            num = int(t.text)
            if self.peek().text == "/":
                self.next()
                dent = self.peek()
                den = self.expect_int()
                if den == 0:
                    raise ParseError("zero denominator", dent.span,
                                     {"nonzero integer"})
                return MultiPoly.const(Fraction(num, den))
            return MultiPoly.const(num)
        if t.kind == "name":
            if t.text in RESERVED_VARS or t.text in params:
                self.next()
                return v(t.text)
            raise ParseError(f"{t.text!r} is not a coefficient variable or "
                             f"parameter", t.span,
                             {"l", "d", "parameter", "integer", "("})
        if t.text == "(":
            self.next()
            inner = self.parse_expr(params)
            self.expect(")")
            return inner
        self.error({"integer", "l", "d", "parameter", "(", "-"})


def _skew_flip(value: LambdaExpr) -> LambdaExpr:
    repl = -v("l") - v("d")
    out = {}
    for g, p in value.items():
        q = -p.substitute({"l": repl})
        if not q.is_zero:
            out[g] = q
    return out


def parse_algebra(text: str) -> ConformalAlgebra:
    tokens = tokenize(text)
    parser = _Parser(tokens)
    name, params, truncation, generators, bracket_decls = parser.parse_file()
    if len(set(generators)) != len(generators):
        raise ParseError("duplicate generator declaration",
                         tokens[0].span, {"distinct generators"})
    gen_set = {g: None for g in generators}
    param_set = set(params)
    clash = param_set & {g for g in generators if isinstance(g, str)}
    if clash:
        raise ParseError(f"name used as both parameter and generator: "
                         f"{sorted(clash)}", tokens[0].span, {"distinct names"})

    declared: dict[tuple, LambdaExpr] = {}
    for g1, g2, start, end, span in bracket_decls:
        if g1 not in gen_set or g2 not in gen_set:
            missing = g1 if g1 not in gen_set else g2
            raise ParseError(f"bracket references undeclared generator "
                             f"{missing!r}", span, {"declared generator"})
        if (g1, g2) in declared:
            raise ParseError(f"duplicate bracket declaration for "
                             f"({g1!r}, {g2!r})", span, {"distinct pairs"})
        sub = _Parser(tokens[start:end] + [Token("eof", "", tokens[end].span)])
        value = sub.parse_rhs(gen_set, param_set)
        for g in value:
            if g not in gen_set:
                raise ParseError(f"bracket value references undeclared "
                                 f"generator {g!r}", span,
                                 {"declared generator"})
        declared[(g1, g2)] = value

    table: dict[tuple, LambdaExpr] = {}
    for (g1, g2), value in declared.items():
        table[(g1, g2)] = value
    for (g1, g2), value in declared.items():
        flipped = _skew_flip(value)
        if (g2, g1) in declared:
            if g1 != g2 and not lam_is_zero(lam_sub(declared[(g2, g1)], flipped)):
                span = next(s for a, b, _, _, s in bracket_decls
                            if (a, b) == (g2, g1))
                raise ParseError(
                    f"brackets for ({g1!r}, {g2!r}) and ({g2!r}, {g1!r}) "
                    f"are not skew-consistent", span, {"skew-consistent value"})
        else:
            table[(g2, g1)] = flipped
    if truncation is None:
        for g1 in generators:
            for g2 in generators:
                if (g1, g2) not in table:
                    raise ParseError(
                        f"no bracket declared or derivable for "
                        f"({g1!r}, {g2!r})", tokens[0].span,
                        {"bracket declaration"})

    def rule(gi, gj):
        if (gi, gj) not in table:
            raise TruncationOverflow((gi, gj), (gi, gj))
        return dict(table[(gi, gj)])

    return ConformalAlgebra(generators, rule, name=name, params=params,
                            truncation=truncation)


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _gen_text(gid) -> str:
    if isinstance(gid, str):
        if not _IDENT_RE.match(gid) or gid in RESERVED_VARS or gid in KEYWORDS:
            raise ValueError(f"generator id {gid!r} not serializable")
        return gid
    if isinstance(gid, bool):
        raise ValueError(f"generator id {gid!r} not serializable")
    if isinstance(gid, int):
        return f"J({gid})"
    if isinstance(gid, tuple) and gid and all(isinstance(x, int) for x in gid):
        return "J(" + ",".join(str(x) for x in gid) + ")"
    raise ValueError(f"generator id {gid!r} not serializable")


def _poly_text(p: MultiPoly) -> str:
    from .scalars import QuadExt
    if any(isinstance(c, QuadExt) for c in p.terms.values()):
        raise ValueError("irrational coefficients are not serializable")
    return p.to_str()


def serialize_algebra(alg: ConformalAlgebra) -> str:
    lines = []
    if alg.truncation is not None:
        lines.append(f"@truncate {alg.truncation}")
    name = alg.name if _IDENT_RE.match(alg.name or "") and alg.name not in KEYWORDS else "A"
    param_text = ", ".join(sorted(alg.params))
    lines.append(f"algebra {name}({param_text}) {{")
    gen_text = ", ".join(_gen_text(g) for g in alg.generators)
    lines.append(f"  generators {gen_text};")
    order = {g: i for i, g in enumerate(alg.generators)}
    for i, gi in enumerate(alg.generators):
        for gj in alg.generators[i:]:
            try:
                value = alg.structure(gi, gj)
            except TruncationOverflow:
                if alg.truncation is None:
                    raise
                continue
            try:
                back = alg.structure(gj, gi)
            except TruncationOverflow:
                raise ValueError(f"bracket ({gi!r},{gj!r}) defined but "
                                 f"({gj!r},{gi!r}) overflows; not serializable")
            if gi != gj and not lam_is_zero(lam_sub(back, _skew_flip(value))):
                raise ValueError(f"brackets for ({gi!r},{gj!r}) are not "
                                 f"skew-consistent; not serializable")
            if not value:
                rhs = "0"
            else:
                parts = []
                for g in sorted(value, key=lambda g: order[g]):
                    parts.append(f"({_poly_text(value[g])}) {_gen_text(g)}")
                rhs = " + ".join(parts)
            lines.append(f"  bracket [{_gen_text(gi)} _ {_gen_text(gj)}] = {rhs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
